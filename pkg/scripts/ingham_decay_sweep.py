"""Ingham constructs for theta = log(e + xi)^-p across p and K: leakage, fitted c and sinc-product error."""

from __future__ import annotations

from dataclasses import dataclass
from math import nan

import numpy as np

from _cfg import parse_config, write_table
from uncertainty_lab.construct1d import ingham_construct, ingham_widths
from uncertainty_lab.core import Grid1D, fourier_1d
from uncertainty_lab.envelope import decay_envelope
from uncertainty_lab.errors import ConfigurationError
from uncertainty_lab.weights import parse_weight


@dataclass(frozen=True)
class Config:
    powers: tuple[float, ...] = (1.5, 2.0, 3.0)
    ks: tuple[int, ...] = (8, 16, 24)
    l: float = 1.0
    log2_count: int = 16
    out: str = ""


def run(cfg: Config) -> list[tuple]:
    grid = Grid1D.centered(4.0 * cfg.l, 2 ** cfg.log2_count)
    rows = []
    for p in cfg.powers:
        theta = parse_weight(f"log_pow:{p:g}")
        for K in cfg.ks:
            plan = ingham_widths(theta, cfg.l, K)
            try:
                f = ingham_construct(plan, grid)
            except ConfigurationError:
                # smallest width below the grid resolution
                rows.append((p, K, nan, nan, nan))
                continue
            spec = fourier_1d(f)
            ref = plan.spectrum(spec.points())
            err = float(np.max(np.abs(spec.values - ref)) / np.max(np.abs(ref)))
            leak = f.mass_outside(-cfg.l, cfg.l)
            fit = decay_envelope(spec, theta)
            rows.append((p, K, leak, fit.c_fit, err))
    return rows


if __name__ == "__main__":
    cfg = parse_config(Config)
    write_table(["power", "K", "leakage", "c_fit", "sinc_rel_err"], run(cfg), cfg.out)

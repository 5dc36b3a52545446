"""Free Schrodinger evolution of a compact bump: multiplier route vs kernel quadrature across t and window."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from _cfg import parse_config, write_table
from uncertainty_lab.core import Grid1D, SampledFunction1D
from uncertainty_lab.corpus import bump
from uncertainty_lab.errors import ConfigurationError
from uncertainty_lab.schrodinger_rn import diagonalize, propagate_kernel, propagate_multiplier


@dataclass(frozen=True)
class Config:
    times: tuple[float, ...] = (0.05, 0.1, 0.2, 0.4)
    extents: tuple[float, ...] = (16.0, 32.0, 64.0)
    step: float = 2.0 ** -7
    a: float = 1.0
    out: str = ""


def run(cfg: Config) -> list[tuple]:
    system = diagonalize([[cfg.a]])
    rows = []
    for L in cfg.extents:
        g = Grid1D.centered(L, int(round(L / cfg.step)))
        f = SampledFunction1D.from_callable(bump, g, (-1.0, 1.0))
        for t in cfg.times:
            m = propagate_multiplier(f, system, t)
            try:
                k = propagate_kernel(f, system, t)
            except ConfigurationError:
                rows.append((L, t, float("nan"), abs(m.norm() - f.norm()) / f.norm()))
                continue
            rel = float(np.linalg.norm(m.values - k.values) / np.linalg.norm(k.values))
            rows.append((L, t, rel, abs(m.norm() - f.norm()) / f.norm()))
    return rows


if __name__ == "__main__":
    cfg = parse_config(Config)
    write_table(["extent", "t", "two_route_rel_l2", "unitarity_err"], run(cfg), cfg.out)

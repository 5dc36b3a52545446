"""Plancherel on H_1 for a separable Gaussian: residual and tail fraction as the nu-window grows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from _cfg import parse_config, write_table
from uncertainty_lab.core import Grid1D, SampledFunctionND
from uncertainty_lab.nilpotent import heisenberg, hs_two_route, plancherel_check, separable_construct


@dataclass(frozen=True)
class Config:
    windows: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
    nodes: int = 256
    z_width: float = 0.1
    out: str = ""


def build(cfg: Config):
    gv, gz = Grid1D.centered(12.0, 128), Grid1D.centered(2.0, 128)
    h = SampledFunctionND.from_callable(lambda x, y: np.exp(-np.pi * (x * x + y * y)), (gv, gv))
    g = SampledFunctionND.from_callable(lambda z: np.exp(-np.pi * (z / cfg.z_width) ** 2), (gz,))
    return separable_construct(heisenberg(1), h, g)


def run(cfg: Config) -> list[tuple]:
    F = build(cfg)
    hs = max(hs_two_route(F, nu)["rel_err"] for nu in (-2.0, -1.0, 1.0, 2.0))
    rows = []
    for w in cfg.windows:
        res = plancherel_check(F, -w, w, cfg.nodes)
        tf = res["tail_fraction"]
        rows.append((w, res["rel_err"], float("nan") if tf is None else tf, hs))
    return rows


if __name__ == "__main__":
    cfg = parse_config(Config)
    write_table(["window", "plancherel_rel_err", "tail_fraction", "hs_two_route_max"], run(cfg), cfg.out)

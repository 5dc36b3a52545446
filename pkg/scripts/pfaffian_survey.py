"""Pfaffian against the product of symplectic weights for random central frequencies on preset groups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from _cfg import parse_config, write_table
from uncertainty_lab.nilpotent import mw_check, nu_data, parse_group


@dataclass(frozen=True)
class Config:
    groups: tuple[str, ...] = ("heisenberg:1", "heisenberg:2", "heisenberg:3", "h1xh1", "h1xr", "planes:1,2,5")
    samples: int = 32
    seed: int = 0
    out: str = ""


def run(cfg: Config) -> list[tuple]:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for name in cfg.groups:
        spec = parse_group(name)
        worst, ranks = 0.0, set()
        for _ in range(cfg.samples):
            nd = nu_data(spec, rng.uniform(-10, 10, spec.k))
            ranks.add(nd.rank)
            prod = float(np.prod(nd.d)) if nd.d.size else 0.0
            if nd.pf > 0:
                worst = max(worst, abs(nd.pf - prod) / nd.pf)
        rows.append((name, spec.m, spec.k, mw_check(spec, seed=cfg.seed).is_mw,
                     " ".join(map(str, sorted(ranks))), worst))
    return rows


if __name__ == "__main__":
    cfg = parse_config(Config)
    write_table(["group", "m", "k", "mw", "ranks", "max_rel_err"], run(cfg), cfg.out)

"""Run the audit corpus and print one verdict line per member."""

from __future__ import annotations

from dataclasses import dataclass

from _cfg import parse_config, write_table
from uncertainty_lab.corpus import MEMBERS, run_corpus


@dataclass(frozen=True)
class Config:
    members: tuple[str, ...] = tuple(m.name for m in MEMBERS)
    threads: int = 4
    out: str = ""


def run(cfg: Config) -> list[tuple]:
    res = run_corpus(list(cfg.members), threads=cfg.threads)
    return [(r.name, r.verdict, r.seconds) for r in res]


if __name__ == "__main__":
    cfg = parse_config(Config)
    write_table(["member", "verdict", "seconds"], run(cfg), cfg.out)

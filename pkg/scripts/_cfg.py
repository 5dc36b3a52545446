"""Command-line overrides for dataclass configs: every field becomes --field."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from typing import Iterable, TypeVar

T = TypeVar("T")


def parse_config(cls: type[T], argv: list[str] | None = None) -> T:
    parser = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        if isinstance(default, tuple):
            parser.add_argument(f"--{f.name}", nargs="+", type=type(default[0]), default=default)
        else:
            parser.add_argument(f"--{f.name}", type=type(default), default=default)
    ns = parser.parse_args(argv)
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in vars(ns).items()})


def write_table(header: list[str], rows: Iterable, path: str = "") -> None:
    fh = open(path, "w", newline="") if path else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([f"{x:.6g}" if isinstance(x, float) else x for x in r])
    if path:
        fh.close()

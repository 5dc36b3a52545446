"""Sampled-function files.

``.sfn`` layout: one JSON header line terminated by ``\\n``, followed by raw
little-endian complex64 pairs in row-major order. The header holds
``{"axes": [{"origin", "step", "count"}, ...], "support_hint": ..., "meta": ...}``.
CSV files carry one ``index,re,im`` row per sample (1D only) for debugging.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import Grid1D, SampledFunction1D, SampledFunctionND
from .errors import DataError

MAGIC = "sfn1"


def _header(axes, support_hint, meta) -> bytes:
    head = {
        "format": MAGIC,
        "axes": [{"origin": g.origin, "step": g.step, "count": g.count} for g in axes],
        "support_hint": support_hint,
        "meta": meta,
    }
    return (json.dumps(head, sort_keys=True, default=_jsonable) + "\n").encode()


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def save_sfn(f: SampledFunction1D | SampledFunctionND, path: str | Path) -> Path:
    path = Path(path)
    if isinstance(f, SampledFunction1D):
        axes, hint = [f.grid], f.support_hint
    else:
        axes, hint = list(f.axes), f.support_hint
    payload = np.ascontiguousarray(f.values, dtype="<c8").tobytes()
    path.write_bytes(_header(axes, hint, f.meta) + payload)
    return path


def load_sfn(path: str | Path) -> SampledFunction1D | SampledFunctionND:
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise DataError(f"{path}: missing header line")
    try:
        head = json.loads(raw[:nl].decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: malformed header: {exc}") from exc
    if head.get("format") != MAGIC:
        raise DataError(f"{path}: not an sfn file")
    axes = [Grid1D(a["origin"], a["step"], a["count"]) for a in head["axes"]]
    shape = tuple(g.count for g in axes)
    body = raw[nl + 1:]
    expected = 8 * int(np.prod(shape))
    if len(body) != expected:
        raise DataError(f"{path}: payload has {len(body)} bytes, expected {expected}")
    vals = np.frombuffer(body, dtype="<c8").astype(complex).reshape(shape)
    hint = head.get("support_hint")
    meta = head.get("meta") or {}
    if len(axes) == 1:
        return SampledFunction1D(axes[0], vals, tuple(hint) if hint else None, meta)
    if isinstance(hint, list):
        hint = tuple(tuple(h) for h in hint)
    return SampledFunctionND(tuple(axes), vals, hint, meta)


def save_csv(f: SampledFunction1D, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "re", "im"])
        for i, v in enumerate(f.values):
            w.writerow([i, repr(float(v.real)), repr(float(v.imag))])
    return path


def load_csv(path: str | Path, grid: Grid1D) -> SampledFunction1D:
    vals = np.zeros(grid.count, dtype=complex)
    with Path(path).open() as fh:
        for row in csv.DictReader(fh):
            vals[int(row["index"])] = float(row["re"]) + 1j * float(row["im"])
    return SampledFunction1D(grid, vals)


def write_rows(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return path

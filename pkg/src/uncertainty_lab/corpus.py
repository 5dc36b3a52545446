"""Reference audit corpus: twelve scenarios whose verdicts must never be CONTRADICTION."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .audit import ingham_audit, pw_audit, torus_audit
from .construct1d import (counterexample_psi, ingham_construct, ingham_widths, poisson_counterexample,
                          pw_halfline_construct, radialized_counterexample_psi)
from .core import Grid1D, SampledFunction1D, SampledFunctionND
from .errors import ConfigurationError
from .quasianalytic import CONTRADICTION, AuditReport, bochner_taylor_audit
from .schrodinger_rn import diagonalize, uc_audit_rn
from .torus import periodize
from .weights import parse_weight


def bump(x: np.ndarray, r: float = 1.0) -> np.ndarray:
    """exp(-1/(1 - (x/r)^2)) on |x| < r, zero outside."""
    u = np.clip(1.0 - (np.asarray(x, dtype=float) / r) ** 2, 0.0, None)
    return np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)


def _ingham_log2(grid: Grid1D, l: float = 1.0, K: int = 24) -> SampledFunction1D:
    return ingham_construct(ingham_widths(parse_weight("log_pow:2"), l, K), grid)


def _ingham() -> AuditReport:
    f = _ingham_log2(Grid1D.centered(4.0, 2 ** 16))
    return ingham_audit(f, "ball:1.5:0.4", parse_weight("log_pow:2"))


def _ingham_translated() -> AuditReport:
    g = Grid1D.centered(4.0, 2 ** 16)
    f = _ingham_log2(g)
    shift = 2 ** 12
    moved = SampledFunction1D(g, np.roll(f.values, shift))
    return ingham_audit(moved, f"ball:{1.5 - 4.0 + shift * g.step}:0.4", parse_weight("log_pow:2"))


def _bump_const() -> AuditReport:
    f = SampledFunction1D.from_callable(lambda x: bump(x, 0.5), Grid1D.centered(4.0, 2 ** 16), (-0.5, 0.5))
    return ingham_audit(f, "ball:1.5:0.4", parse_weight("const:1"))


def _gaussian_2d() -> AuditReport:
    g = Grid1D.centered(8.0, 2 ** 9)
    f = SampledFunctionND.from_callable(lambda x, y: np.exp(-np.pi * (x * x + y * y)), (g, g))
    return ingham_audit(f, "ball:3,3:0.5", parse_weight("log_pow:2"), lo=0.125, hi=8.0)


def _zero() -> AuditReport:
    g = Grid1D.centered(4.0, 2 ** 12)
    return ingham_audit(SampledFunction1D(g, np.zeros(g.count)), "ball:0:0.5", parse_weight("log_pow:1"))


def _poisson() -> AuditReport:
    f = poisson_counterexample(0.0, Grid1D.centered(64.0, 2 ** 16), Grid1D.centered(8.0, 2 ** 7))
    return pw_audit(f, "halfspace:1,0:0", radialized_counterexample_psi(), nonradial_psi=counterexample_psi)


def _pw_sqrt() -> AuditReport:
    gx, gy = Grid1D.centered(64.0, 2 ** 16), Grid1D.centered(8.0, 2 ** 6)
    h = pw_halfline_construct(parse_weight("sqrt"), gx, x0=0.0)
    f = SampledFunctionND((gx, gy), np.outer(h.values, np.exp(-np.pi * gy.points() ** 2)))
    return pw_audit(f, "halfspace:1,0:0", parse_weight("sqrt"))


def _torus_ingham() -> AuditReport:
    g = ingham_construct(ingham_widths(parse_weight("log_pow:2"), 0.2, 14), Grid1D(-0.5, 2.0 ** -14, 2 ** 14))
    T = periodize(SampledFunctionND((g.grid,), g.values))
    return torus_audit(T, "ball:0.5:0.2", parse_weight("log_pow:2"))


def _bochner_taylor() -> AuditReport:
    f = _ingham_log2(Grid1D.centered(4.0, 2 ** 14), K=16)
    return bochner_taylor_audit(f, [(1.2, 1.8)], [1.5], parse_weight("log_pow:2"), k_max=12)


def _uc(psi: str, gaussian: bool = False) -> Callable[[], AuditReport]:
    def run() -> AuditReport:
        g = Grid1D.centered(64.0, 2 ** 14)
        if gaussian:
            f = SampledFunction1D.from_callable(lambda x: np.exp(-np.pi * x * x), g)
        else:
            f = SampledFunction1D.from_callable(bump, g, (-1.0, 1.0))
        return uc_audit_rn(f, diagonalize([[1.0]]), 0.25, parse_weight(psi))
    return run


@dataclass(frozen=True)
class CorpusMember:
    name: str
    description: str
    build: Callable[[], AuditReport]


MEMBERS: tuple[CorpusMember, ...] = (
    CorpusMember("ingham_log2", "Ingham construct, theta = log^-2, audited on a ball outside its support", _ingham),
    CorpusMember("ingham_translated", "the same construct rolled by 1/4 with the region moved along", _ingham_translated),
    CorpusMember("bump_const", "C-infinity bump against a constant theta", _bump_const),
    CorpusMember("gaussian_2d", "2D Gaussian on a far ball where it is below the float floor", _gaussian_2d),
    CorpusMember("zero", "zero function", _zero),
    CorpusMember("poisson_counterexample", "Poisson-kernel product against its radialized weight", _poisson),
    CorpusMember("pw_sqrt_halfline", "half-line outer function for sqrt times a Gaussian", _pw_sqrt),
    CorpusMember("torus_ingham", "periodized Ingham construct on T^1", _torus_ingham),
    CorpusMember("bochner_taylor", "Ingham construct with derivatives vanishing at an outside point", _bochner_taylor),
    CorpusMember("uc_bump_sqrt", "free Schrodinger evolution of a compact bump, psi = sqrt", _uc("sqrt")),
    CorpusMember("uc_bump_half_log", "free Schrodinger evolution of a compact bump, psi = log(1+x^2)/2", _uc("half_log")),
    CorpusMember("uc_gaussian", "free Schrodinger evolution of a Gaussian (not compact)", _uc("linear", gaussian=True)),
)


def member_names() -> list[str]:
    return [m.name for m in MEMBERS]


def thread_cap(default: int | None = None) -> int:
    """Worker count from UL_THREADS (falls back to the CPU count)."""
    raw = os.environ.get("UL_THREADS")
    if raw is None:
        return default or max(1, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"UL_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigurationError("UL_THREADS must be >= 1")
    return n


@dataclass(frozen=True)
class CorpusResult:
    name: str
    verdict: str
    seconds: float
    report: AuditReport

    @property
    def contradiction(self) -> bool:
        return self.verdict == CONTRADICTION


def _run(member: CorpusMember) -> CorpusResult:
    t = time.perf_counter()
    rep = member.build()
    return CorpusResult(member.name, rep.verdict, time.perf_counter() - t, rep)


def run_corpus(names: Sequence[str] | None = None, threads: int | None = None) -> list[CorpusResult]:
    """Run the selected members; results come back in corpus order whatever the thread count."""
    lookup = {m.name: m for m in MEMBERS}
    chosen = list(MEMBERS) if names is None else []
    for n in names or []:
        if n not in lookup:
            raise ConfigurationError(f"unknown corpus member {n!r}")
        chosen.append(lookup[n])
    workers = threads or thread_cap()
    if workers == 1:
        return [_run(m) for m in chosen]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run, chosen))

"""Derivative norms from spectra, the m_k bound sequence and the Bochner-Taylor audit.

D_k f(x) = sqrt(sum_{|alpha| = k} |d^alpha f(x)|^2), with every derivative
computed as the moment integral of (2 pi i xi)^alpha fhat(xi) e^{2 pi i xi.x}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import SampledFunction1D, SampledFunctionND, fourier_nd
from .envelope import decay_envelope
from .errors import ConfigurationError, PrecisionError
from .weights import WeightFunction, carleman_divergence

MOMENT_BUDGET = 1e-8


def as_nd(f: SampledFunction1D | SampledFunctionND) -> SampledFunctionND:
    if isinstance(f, SampledFunctionND):
        return f
    hint = None if f.support_hint is None else (tuple(f.support_hint),)
    return SampledFunctionND((f.grid,), f.values, hint, dict(f.meta))


def multiindex_count(k: int, n: int) -> int:
    """Number of multi-indices alpha in N^n with |alpha| = k (exact integer)."""
    if k < 0 or n < 1:
        raise ConfigurationError("need k >= 0 and n >= 1")
    return math.comb(k + n - 1, k)


def multiindices(k: int, n: int) -> list[tuple[int, ...]]:
    """All alpha with |alpha| = k in descending lexicographic order."""
    out = []
    for bars in itertools.combinations(range(k + n - 1), n - 1):
        prev = -1
        alpha = []
        for b in bars:
            alpha.append(b - prev - 1)
            prev = b
        alpha.append(k + n - 2 - prev)
        out.append(tuple(alpha))
    return sorted(out, reverse=True)


def _edge_ratio(weighted: np.ndarray) -> float:
    """Max of |weighted| on the outer shell of the box relative to its global max."""
    a = np.abs(weighted)
    top = float(a.max())
    if top == 0.0:
        return 0.0
    edge = 0.0
    for ax in range(a.ndim):
        k = max(1, a.shape[ax] // 64)
        lo = np.take(a, range(k), axis=ax)
        hi = np.take(a, range(a.shape[ax] - k, a.shape[ax]), axis=ax)
        edge = max(edge, float(lo.max()), float(hi.max()))
    return edge / top


def _moment_table(spec: SampledFunctionND, x: Sequence[float], k: int) -> list[np.ndarray]:
    """Per-axis vectors (2 pi i xi_j)^a e^{2 pi i xi_j x_j} for a = 0..k."""
    out = []
    for g, xj in zip(spec.axes, x):
        xi = g.points()
        base = np.exp(2j * np.pi * xi * xj)
        out.append(np.stack([(2j * np.pi * xi) ** a * base for a in range(k + 1)]))
    return out


def dk_norm(spec: SampledFunctionND, k: int, x: Sequence[float], budget: float = MOMENT_BUDGET) -> float:
    """D_k f(x) from samples of fhat on a (dual) grid.

    Raises PrecisionError when |xi|^k |fhat| is not negligible at the edge of
    the box (edge/max above ``budget``), since the moment integral would then
    be truncated.
    """
    spec = as_nd(spec)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != spec.ndim:
        raise ConfigurationError("probe point dimension does not match the spectrum")
    r = spec.radius()
    ratio = _edge_ratio(r ** k * np.abs(spec.values))
    if ratio > budget:
        raise PrecisionError(f"order-{k} moment is truncated by the grid (edge ratio {ratio:.2e})",
                             partial=None, error=ratio)
    tables = _moment_table(spec, x, k)
    cell = spec.cell
    total = 0.0
    for alpha in multiindices(k, spec.ndim):
        acc = spec.values
        for ax in range(spec.ndim - 1, -1, -1):
            acc = acc @ tables[ax][alpha[ax]]
        total += abs(complex(acc) * cell) ** 2
    return math.sqrt(total)


def dk_upper_scale(spec: SampledFunctionND, k: int) -> float:
    """sqrt(#alpha) (2 pi)^k integral |xi|^k |fhat|, an upper bound for D_k f anywhere."""
    spec = as_nd(spec)
    mom = float(np.sum(spec.radius() ** k * np.abs(spec.values)) * spec.cell)
    return math.sqrt(multiindex_count(k, spec.ndim)) * (2.0 * math.pi) ** k * mom


def log_mk_bound(theta: WeightFunction, k: int, C_fit: float = 1.0) -> float:
    """log m_k with m_k = C (4 pi k / theta(k^4))^k; +inf when theta(k^4) = 0."""
    if k == 0:
        return math.log(C_fit)
    th = float(theta(float(k) ** 4))
    if th <= 0.0:
        return math.inf
    return math.log(C_fit) + k * math.log(4.0 * math.pi * k / th)


mk_bound = log_mk_bound


@dataclass(frozen=True)
class DkProfile:
    orders: list[int]
    values: dict
    log_mk: list[float]
    carleman_terms: list[float]


@dataclass
class AuditReport:
    """Measurements, hypothesis checks and verdict of a theorem-level audit."""

    kind: str
    verdict: str
    hypotheses: dict
    conclusion: dict
    measurements: dict = field(default_factory=dict)
    classification: dict | None = None
    envelope: dict | None = None
    thresholds: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "verdict": self.verdict, "hypotheses": self.hypotheses,
                "conclusion": self.conclusion, "measurements": self.measurements,
                "classification": self.classification, "envelope": self.envelope,
                "thresholds": self.thresholds, "provenance": self.provenance}


CONSISTENT = "consistent"
VACUOUS = "vacuous-consistent"
CONTRADICTION = "CONTRADICTION"


def combine_verdict(zero_function: bool, hypotheses_hold: bool, conclusion_holds: bool) -> str:
    if zero_function:
        return CONSISTENT
    if not hypotheses_hold:
        return VACUOUS
    return CONSISTENT if conclusion_holds else CONTRADICTION


def _box_mass(f: SampledFunctionND, omega: Sequence[tuple[float, float]]) -> float:
    mesh = f.mesh()
    inside = np.ones(f.values.shape, dtype=bool)
    for xj, (lo, hi) in zip(mesh, omega):
        inside &= (xj > lo) & (xj < hi)
    if not inside.any():
        raise ConfigurationError("region does not intersect the grid")
    p = np.abs(f.values) ** 2
    tot = float(p.sum())
    return float(p[inside].sum() / tot) if tot > 0 else 0.0


def bochner_taylor_audit(f: SampledFunction1D | SampledFunctionND, omega: Sequence[tuple[float, float]],
                         x0: Sequence[float], theta: WeightFunction, k_max: int = 24,
                         vanish_tol: float = 1e-8, mass_tol: float = 1e-10, norm_tol: float = 1e-6,
                         envelope_threshold: float = 0.05, min_resolved: int = 4) -> AuditReport:
    """Check (i) D_k <= m_k, (ii) D_k f(x0) = 0, (iii) sum m_k^(-1/k) = inf against f = 0 on omega.

    (i) is measured through the spectral envelope of f against theta, which is
    the hypothesis the m_k bound is derived from; (ii) compares D_k f(x0) with
    the global upper scale for every order the grid resolves; (iii) uses the
    series sum theta(k^4)/k.
    """
    f = as_nd(f)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    omega = [tuple(map(float, b)) for b in omega]
    if len(omega) != f.ndim or x0.size != f.ndim:
        raise ConfigurationError("omega and x0 must match the dimension of f")
    if not all(lo < xj < hi for xj, (lo, hi) in zip(x0, omega)):
        raise ConfigurationError("x0 must lie inside omega")
    norm = f.norm()
    spec = fourier_nd(f)
    ratios, dks, scales = [], [], []
    resolved = -1
    for k in range(k_max + 1):
        try:
            d = dk_norm(spec, k, x0)
        except PrecisionError:
            break
        s = dk_upper_scale(spec, k)
        dks.append(d)
        scales.append(s)
        ratios.append(d / s if s > 0 else 0.0)
        resolved = k
    ii = resolved + 1 >= min_resolved and (max(ratios) if ratios else 1.0) <= vanish_tol
    if norm == 0.0:
        env_holds, env = True, None
    else:
        fit = decay_envelope(spec, theta, threshold=envelope_threshold)
        env_holds, env = fit.holds, fit.to_dict()
    carl = carleman_divergence(theta)
    iii = not carl.convergent
    c_fit = max((s / math.exp(log_mk_bound(theta, k)) for k, s in enumerate(scales)
                 if math.isfinite(log_mk_bound(theta, k))), default=0.0)
    mass = _box_mass(f, omega) if norm > 0 else 0.0
    vanishes = mass <= mass_tol
    zero = norm <= norm_tol
    verdict = combine_verdict(zero, env_holds and ii and iii, vanishes)
    return AuditReport(
        "bochner_taylor", verdict,
        hypotheses={"i_envelope": env_holds, "ii_vanishing_derivatives": ii, "iii_carleman_divergent": iii},
        conclusion={"relative_mass_on_omega": mass, "vanishes_on_omega": vanishes},
        measurements={"orders_resolved": resolved, "dk_at_x0": dks, "dk_scale": scales,
                      "dk_ratio": ratios, "max_ratio": max(ratios) if ratios else None,
                      "C_fit": c_fit, "log_mk": [log_mk_bound(theta, k, max(c_fit, 1e-300))
                                                 for k in range(resolved + 1)],
                      "norm": norm},
        classification=carl.to_dict(), envelope=env,
        thresholds={"vanish_tol": vanish_tol, "mass_tol": mass_tol, "norm_tol": norm_tol,
                    "envelope_threshold": envelope_threshold, "min_resolved": min_resolved,
                    "moment_budget": MOMENT_BUDGET})


def _poly_values(P: Mapping[tuple[int, ...], complex], spec: SampledFunctionND) -> np.ndarray:
    mesh = spec.mesh()
    out = np.zeros(spec.values.shape, dtype=complex)
    for alpha, c in P.items():
        alpha = tuple(alpha)
        if len(alpha) != spec.ndim:
            raise ConfigurationError(f"multi-index {alpha} does not match dimension {spec.ndim}")
        term = np.full(spec.values.shape, complex(c))
        for xi, a in zip(mesh, alpha):
            if a:
                term = term * xi ** a
        out += term
    return out


def poly_multiplier(f: SampledFunction1D | SampledFunctionND, P: Mapping[tuple[int, ...], complex],
                    budget: float = MOMENT_BUDGET) -> SampledFunctionND:
    """Function whose spectrum is P(xi) fhat(xi) on the dual grid.

    P is a map from multi-index to coefficient, so {(1, 0): 1} is xi_1. In
    space this is sum_alpha c_alpha (2 pi i)^(-|alpha|) d^alpha f.
    """
    f = as_nd(f)
    spec = fourier_nd(f)
    pv = _poly_values(P, spec)
    weighted = pv * spec.values
    ratio = _edge_ratio(weighted)
    if ratio > budget:
        raise PrecisionError(f"polynomially weighted spectrum is truncated (edge ratio {ratio:.2e})",
                             error=ratio)
    out = fourier_nd(spec.with_values(weighted), "inverse", out_origins=[g.origin for g in f.axes])
    return SampledFunctionND(f.axes, out.values, None, {"edge_ratio": ratio})


def spectrum_of(f: SampledFunction1D | SampledFunctionND) -> SampledFunctionND:
    return fourier_nd(as_nd(f))

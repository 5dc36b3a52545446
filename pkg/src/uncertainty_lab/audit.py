"""Region masses and the dichotomy audits for sampled functions.

Each audit measures the hypotheses of a uniqueness statement (spectral decay
envelope, vanishing on a region, divergence of the weight integral) together
with the size of f, and reports whether the measurements are mutually
consistent with the implication "hypotheses => f = 0". A CONTRADICTION verdict
means every hypothesis measurement passed its threshold while f is visibly
nonzero; it is a regression tripwire, never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .construct1d import counterexample_psi
from .core import SampledFunction1D, SampledFunctionND, fourier_1d, fourier_nd
from .envelope import PSI, THETA, EnvelopeFit, decay_envelope
from .errors import ConfigurationError
from .quasianalytic import CONSISTENT, CONTRADICTION, VACUOUS, AuditReport, as_nd, combine_verdict
from .torus import TorusFunction, lattice_norms, torus_coefficients
from .weights import WeightFunction, ingham_integral_test, pw_integral_test

MASS_TOL = 1e-10
NORM_TOL = 1e-6
ENVELOPE_THRESHOLD = 0.05

__all__ = ["Ball", "Box", "HalfSpace", "parse_region", "vanishing_mass", "decay_envelope",
           "ingham_audit", "pw_audit", "torus_audit", "CONSISTENT", "VACUOUS", "CONTRADICTION"]


def _interval_cover(x: np.ndarray, h: float, lo: float, hi: float) -> np.ndarray:
    """Fraction of the cell [x - h/2, x + h/2] inside (lo, hi)."""
    a = np.maximum(x - h / 2, lo)
    b = np.minimum(x + h / 2, hi)
    return np.clip((b - a) / h, 0.0, 1.0)


def _wrap(d: np.ndarray, period: float | None) -> np.ndarray:
    if period is None:
        return d
    return (d + period / 2) % period - period / 2


@dataclass(frozen=True)
class Ball:
    """Open ball B(center, radius)."""

    center: tuple[float, ...]
    radius: float

    def cover(self, f: SampledFunctionND, period: float | None = None) -> np.ndarray:
        c = _broadcast(self.center, f.ndim)
        mesh = f.mesh()
        d = np.sqrt(sum(_wrap(m - cj, period) ** 2 for m, cj in zip(mesh, c))) - self.radius
        h = float(np.mean([g.step for g in f.axes]))
        return np.clip(0.5 - d / h, 0.0, 1.0)

    def describe(self) -> dict:
        return {"kind": "ball", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Box:
    """Open box prod (lo_j, hi_j)."""

    bounds: tuple[tuple[float, float], ...]

    def cover(self, f: SampledFunctionND, period: float | None = None) -> np.ndarray:
        if len(self.bounds) != f.ndim:
            raise ConfigurationError(f"box has {len(self.bounds)} axes, function has {f.ndim}")
        w = np.ones(f.values.shape)
        for m, g, (lo, hi) in zip(f.mesh(), f.axes, self.bounds):
            if period is not None:
                mid = 0.5 * (lo + hi)
                w = w * _interval_cover(_wrap(m - mid, period), g.step, lo - mid, hi - mid)
            else:
                w = w * _interval_cover(m, g.step, lo, hi)
        return w

    def describe(self) -> dict:
        return {"kind": "box", "bounds": [list(b) for b in self.bounds]}


@dataclass(frozen=True)
class HalfSpace:
    """The forbidden side {x : x . eta > t} of the half-space {x . eta <= t}."""

    eta: tuple[float, ...]
    t: float

    def unit(self, n: int) -> np.ndarray:
        e = _broadcast(self.eta, n)
        nrm = float(np.linalg.norm(e))
        if nrm == 0.0:
            raise ConfigurationError("half-space normal must be nonzero")
        return e / nrm

    def cover(self, f: SampledFunctionND, period: float | None = None) -> np.ndarray:
        if period is not None:
            raise ConfigurationError("half-spaces are not regions of the torus")
        e = self.unit(f.ndim)
        proj = sum(m * ej for m, ej in zip(f.mesh(), e))
        width = sum(abs(ej) * g.step for ej, g in zip(e, f.axes))
        return np.clip(0.5 + (proj - self.t) / width, 0.0, 1.0)

    def axis(self, n: int) -> tuple[int, int] | None:
        """(axis, sign) when eta is a signed coordinate vector."""
        e = self.unit(n)
        nz = np.nonzero(np.abs(e) > 1e-12)[0]
        if nz.size != 1:
            return None
        return int(nz[0]), int(np.sign(e[nz[0]]))

    def describe(self) -> dict:
        return {"kind": "halfspace", "eta": list(self.eta), "t": self.t, "forbidden": "x.eta > t"}


Region = Ball | Box | HalfSpace


def _broadcast(v: Sequence[float], n: int) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if a.size == 1:
        return np.full(n, float(a[0]))
    if a.size != n:
        raise ConfigurationError(f"vector of length {a.size} does not match dimension {n}")
    return a


def _floats(s: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in s.split(","))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse numbers from {s!r}") from exc


def parse_region(spec: str | dict | Region) -> Region:
    """Parse 'ball:c1,c2:r', 'box:lo,hixlo,hi' or 'halfspace:e1,e2:t' (or a dict)."""
    if isinstance(spec, (Ball, Box, HalfSpace)):
        return spec
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "ball":
            return Ball(tuple(np.atleast_1d(spec["center"]).tolist()), float(spec["radius"]))
        if kind == "box":
            return Box(tuple(tuple(map(float, b)) for b in spec["bounds"]))
        if kind == "halfspace":
            return HalfSpace(tuple(np.atleast_1d(spec["eta"]).tolist()), float(spec["t"]))
        raise ConfigurationError(f"unknown region kind {kind!r}")
    parts = str(spec).split(":")
    kind = parts[0].strip().lower()
    try:
        if kind == "ball" and len(parts) == 3:
            r = float(parts[2])
            if not r > 0:
                raise ConfigurationError("ball radius must be positive")
            return Ball(_floats(parts[1]), r)
        if kind == "box" and len(parts) == 2:
            bounds = tuple(_floats(b) for b in parts[1].split("x"))
            if any(len(b) != 2 or not b[0] < b[1] for b in bounds):
                raise ConfigurationError("box bounds must be lo,hi pairs with lo < hi")
            return Box(bounds)
        if kind == "halfspace" and len(parts) == 3:
            return HalfSpace(_floats(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse region {spec!r}") from exc
    raise ConfigurationError(f"cannot parse region {spec!r}")


def _as_field(f) -> tuple[SampledFunctionND, float | None]:
    if isinstance(f, TorusFunction):
        return f.as_sampled(), 1.0
    return as_nd(f), None


def vanishing_mass(f, region) -> float:
    """Relative L^2 mass of f on the region; NaN when f is identically zero.

    Boundary cells are weighted by the fraction of the cell inside the region,
    so the measurement converges at second order in the step for smooth f.
    """
    g, period = _as_field(f)
    region = parse_region(region)
    w = region.cover(g, period)
    if not np.any(w > 0):
        raise ConfigurationError(f"region {region.describe()} does not intersect the grid")
    p = np.abs(g.values) ** 2
    tot = float(p.sum())
    if tot == 0.0:
        return float("nan")
    return float(np.sum(w * p) / tot)


def _verdict(norm: float, env: bool, vanish: bool, divergent: bool, norm_tol: float) -> str:
    # the implication is satisfied when f is negligible or the integral converges
    return combine_verdict(norm <= norm_tol, env and vanish, not divergent)


def _thresholds(mass_tol, norm_tol, envelope_threshold, **extra) -> dict:
    return {"mass_tol": mass_tol, "norm_tol": norm_tol, "envelope_threshold": envelope_threshold, **extra}


def _fit(spec: SampledFunctionND, weight, mode, threshold, **kw) -> EnvelopeFit:
    # bin out to the finest axis so anisotropic grids use every sampled frequency
    nyq = max(0.5 * g.count * g.step for g in spec.axes)
    return decay_envelope(spec, weight, mode=mode, threshold=threshold, nyquist=nyq, **kw)


def ingham_audit(f: SampledFunction1D | SampledFunctionND, region, theta: WeightFunction,
                 mass_tol: float = MASS_TOL, norm_tol: float = NORM_TOL,
                 envelope_threshold: float = ENVELOPE_THRESHOLD, lo: float = 2.0,
                 hi: float | None = None) -> AuditReport:
    """Decay |fhat| <= C exp(-theta |y|) plus vanishing on an open set, against I = int theta/|y|^n."""
    g = as_nd(f)
    region = parse_region(region)
    norm = g.norm()
    mass = vanishing_mass(g, region)
    fit = _fit(fourier_nd(g), theta, THETA, envelope_threshold, lo=lo, hi=hi)
    cls = ingham_integral_test(theta, n=g.ndim)
    divergent = not cls.convergent
    vanish = bool(norm == 0.0 or mass <= mass_tol)
    verdict = _verdict(norm, fit.holds, vanish, divergent, norm_tol)
    return AuditReport(
        "ingham", verdict,
        hypotheses={"envelope": fit.holds, "vanishes_on_region": vanish, "integral_divergent": divergent},
        conclusion={"norm": norm, "negligible": norm <= norm_tol},
        measurements={"region": region.describe(), "relative_mass": None if math.isnan(mass) else mass,
                      "degenerate": math.isnan(mass), "norm": norm, "c_fit": fit.c_fit,
                      "C_fit": fit.C_fit, "dimension": g.ndim},
        classification=cls.to_dict(), envelope=fit.to_dict(),
        thresholds=_thresholds(mass_tol, norm_tol, envelope_threshold))


def _shifted_weight(psi: WeightFunction, y: float) -> WeightFunction:
    ev = psi.evaluator
    return WeightFunction(f"{psi.name}@|y|={y:.4g}", lambda r: ev(np.sqrt(r * r + y * y)),
                          psi.monotonicity, params={"y": y})


def _slice_reports(g: SampledFunctionND, half: HalfSpace, psi: WeightFunction, n_slices: int,
                   threshold: float, lo: float) -> list[dict]:
    """Envelopes and forbidden-side masses of g_y = F_{n-1} f(., y) for a few |y|."""
    ax = half.axis(g.ndim)
    if g.ndim < 2 or ax is None:
        return []
    axis, sgn = ax
    others = [a for a in range(g.ndim) if a != axis]
    part = fourier_nd(g, axes=others)
    ymesh = [m for a, m in enumerate(part.mesh()) if a != axis]
    yr = np.sqrt(sum(m ** 2 for m in ymesh))
    yr_line = np.moveaxis(yr, axis, 0)[0]
    vals = np.moveaxis(part.values, axis, 0)
    targets = [0.0] + [2.0 ** j for j in range(n_slices - 1)]
    out = []
    seen = set()
    for target in targets:
        idx = np.unravel_index(int(np.argmin(np.abs(yr_line - target))), yr_line.shape)
        if idx in seen:
            continue
        seen.add(idx)
        y = float(yr_line[idx])
        line = vals[(slice(None),) + idx]
        g1 = SampledFunction1D(g.axes[axis], line)
        spec = fourier_1d(g1)
        x = g1.points()
        p = np.abs(line) ** 2
        tot = float(p.sum())
        forbidden = float(p[sgn * x > half.t].sum()) / tot if tot else None
        try:
            fit = decay_envelope(spec, _shifted_weight(psi, y), mode=PSI, threshold=threshold, lo=lo)
            env = {"holds": fit.holds, "c_fit": fit.c_fit, "C_fit": fit.C_fit, "no_decay": fit.no_decay}
        except ConfigurationError as exc:
            env = {"holds": None, "error": str(exc)}
        out.append({"y_norm": y, "y_index": [int(i) for i in idx], "norm": math.sqrt(tot * g1.grid.step),
                    "forbidden_mass": forbidden, "envelope": env})
    return out


def pw_audit(f: SampledFunction1D | SampledFunctionND, halfspace, psi: WeightFunction,
             mass_tol: float = MASS_TOL, norm_tol: float = NORM_TOL,
             envelope_threshold: float = ENVELOPE_THRESHOLD, n_slices: int = 4, lo: float = 2.0,
             hi: float | None = None, nonradial_psi=None) -> AuditReport:
    """|fhat| <= C exp(-psi) plus support in {x . eta <= t}, against int psi/(1+|x|)^(n+1).

    For axis-aligned eta the report also carries the reduction to one
    dimension: the partial transform g_y over the remaining axes, its mass on
    the forbidden side and its envelope against psi(sqrt(xi^2 + |y|^2)).
    ``nonradial_psi(xi_1, ..., xi_n)``, when given, is checked pointwise as an
    extra (non-hypothesis) measurement.
    """
    g = as_nd(f)
    half = parse_region(halfspace)
    if not isinstance(half, HalfSpace):
        raise ConfigurationError("pw_audit needs a half-space region")
    norm = g.norm()
    mass = vanishing_mass(g, half)
    spec = fourier_nd(g)
    fit = _fit(spec, psi, PSI, envelope_threshold, lo=lo, hi=hi)
    cls = pw_integral_test(psi, n=g.ndim)
    divergent = not cls.convergent
    supported = bool(norm == 0.0 or mass <= mass_tol)
    verdict = _verdict(norm, fit.holds, supported, divergent, norm_tol)
    meas = {"region": half.describe(), "relative_mass": None if math.isnan(mass) else mass,
            "degenerate": math.isnan(mass), "norm": norm, "c_fit": fit.c_fit, "C_fit": fit.C_fit,
            "dimension": g.ndim,
            "slices": _slice_reports(g, half, psi, n_slices, envelope_threshold, lo) if norm > 0 else []}
    if nonradial_psi is not None and norm > 0:
        meas["nonradial"] = _pointwise_psi_check(spec, nonradial_psi, fit)
    return AuditReport(
        "paley_wiener", verdict,
        hypotheses={"envelope": fit.holds, "supported_in_halfspace": supported, "integral_divergent": divergent},
        conclusion={"norm": norm, "negligible": norm <= norm_tol},
        measurements=meas, classification=cls.to_dict(), envelope=fit.to_dict(),
        thresholds=_thresholds(mass_tol, norm_tol, envelope_threshold))


def _pointwise_psi_check(spec: SampledFunctionND, psi_fn, fit: EnvelopeFit) -> dict:
    """Largest c with |fhat| <= C exp(-c psi(xi)) on the fitted band, point by point."""
    mesh = spec.mesh()
    r = spec.radius()
    band = (r >= fit.bin_edges[0]) & (r <= fit.bin_edges[-1])
    mag = np.abs(spec.values[band])
    w = np.asarray(psi_fn(*[m[band] for m in mesh]), dtype=float)
    floor = 1e-13 * fit.C_fit
    keep = (mag > floor) & (w > 0)
    if not np.any(keep):
        return {"c_pointwise": None, "resolved_points": 0}
    c = float(np.min(-np.log(mag[keep] / fit.C_fit) / w[keep]))
    return {"c_pointwise": c, "holds": c >= fit.threshold, "resolved_points": int(keep.sum()),
            "floor": floor}


def torus_audit(f: TorusFunction, region, theta: WeightFunction, band: int | None = None,
                mass_tol: float = MASS_TOL, norm_tol: float = NORM_TOL,
                envelope_threshold: float = ENVELOPE_THRESHOLD, lo: float = 2.0) -> AuditReport:
    """|fhat(m)| <= C exp(-theta(m)|m|) plus vanishing on an open subset of T^n, against sum theta(m)/m.

    For decreasing theta the series and the integral of theta(t)/t over (1, inf)
    converge together, so the classification is the integral test.
    """
    if band is None:
        band = min(f.shape) // 4
    region = parse_region(region)
    if isinstance(region, HalfSpace):
        raise ConfigurationError("torus audits need a ball or box region")
    norm = f.norm()
    mass = vanishing_mass(f, region)
    coeffs = torus_coefficients(f, band)
    fit = decay_envelope(coeffs, theta, mode=THETA, lo=lo, hi=float(band), threshold=envelope_threshold,
                         radii=lattice_norms(band, f.n), nyquist=float(band))
    cls = ingham_integral_test(theta, n=1)
    m = np.arange(1, 10 ** 6 + 1, dtype=float)
    series = float(np.sum(theta(m) / m))
    divergent = not cls.convergent
    vanish = bool(norm == 0.0 or mass <= mass_tol)
    verdict = _verdict(norm, fit.holds, vanish, divergent, norm_tol)
    return AuditReport(
        "torus", verdict,
        hypotheses={"envelope": fit.holds, "vanishes_on_region": vanish, "series_divergent": divergent},
        conclusion={"norm": norm, "negligible": norm <= norm_tol},
        measurements={"region": region.describe(), "relative_mass": None if math.isnan(mass) else mass,
                      "degenerate": math.isnan(mass), "norm": norm, "band": band, "c_fit": fit.c_fit,
                      "series_partial_1e6": series},
        classification=cls.to_dict(), envelope=fit.to_dict(),
        thresholds=_thresholds(mass_tol, norm_tol, envelope_threshold))


def poisson_nonradial_psi(u, v) -> np.ndarray:
    return counterexample_psi(u, v)

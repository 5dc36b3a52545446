"""Explicit extremal functions in one dimension.

* Compactly supported functions whose spectrum decays like exp(-c theta(xi) xi),
  built as infinite-convolution products of normalized indicators.
* Half-line supported functions with prescribed spectral modulus exp(-psi),
  built as outer functions whose phase is the conjugate function of -psi.
* The half-plane counterexample f(x) P_1(y) with a Poisson kernel factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import (Grid1D, SampledFunction1D, SampledFunctionND, convolve, embed, fourier_1d,
                   reflect)
from .errors import ConfigurationError, DivergenceError, PreconditionError
from .weights import WeightFunction, dyadic_sum, ingham_integral_test, pw_integral_test


# Ingham-type compactly supported functions ------------------------------------------

@dataclass(frozen=True, eq=False)
class InghamPlan:
    """Widths a_1 >= a_2 >= ... >= a_K with sum equal to ``total_support``."""

    widths: np.ndarray
    total_support: float
    weight: WeightFunction
    slack: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def K(self) -> int:
        return int(self.widths.size)

    def spectrum(self, xi) -> np.ndarray:
        """prod_k sin(2 pi a_k xi)/(2 pi a_k xi)."""
        xi = np.asarray(xi, dtype=float)
        out = np.ones_like(xi)
        for a in self.widths:
            out = out * np.sinc(2.0 * a * xi)
        return out

    def to_dict(self) -> dict:
        return {"widths": self.widths.tolist(), "total_support": self.total_support,
                "weight": self.weight.describe(), "support_slack": self.slack, **self.details}


def ingham_widths(theta: WeightFunction, l: float, K: int) -> InghamPlan:
    """Dyadic widths a_k = l theta(2^k) / S_K with S_K = sum_{j<=K} theta(2^j).

    Refuses weights whose integral test diverges: no compactly supported
    nonzero function has that decay. ``slack`` bounds the support that the
    discarded factors k > K would add if the product were not truncated.
    """
    if not l > 0:
        raise ConfigurationError("support half-length l must be positive")
    if K < 1:
        raise ConfigurationError("K must be at least 1")
    cls = ingham_integral_test(theta)
    if not cls.convergent:
        raise DivergenceError(
            f"integral test diverges for {theta.name} ({cls.evidence}); no nonzero compactly "
            "supported function can have this spectral decay")
    vals = theta(2.0 ** np.arange(1, K + 1))
    s_k = dyadic_sum(theta, K)
    if s_k <= 0:
        raise PreconditionError(f"{theta.name} vanishes on the dyadic points")
    widths = l * vals / s_k
    widths = widths * (l / np.sum(widths))
    tail = theta.ingham_tail(2.0 ** K) if theta.ingham_tail is not None else math.inf
    slack = l * tail / (math.log(2.0) * s_k)
    return InghamPlan(widths, float(l), theta, float(slack),
                      {"dyadic_sum": s_k, "integral_test": cls.verdict})


def _uniform_sum_density(widths: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Exact density of a sum of independent uniforms on [-a_k, a_k].

    Inclusion-exclusion over the 2^K corners; only used for small K where the
    cancellation is harmless.
    """
    K = widths.size
    out = np.zeros_like(x, dtype=float)
    norm = math.factorial(K - 1) * float(np.prod(2.0 * widths))
    for mask in range(1 << K):
        signs = np.array([1.0 if (mask >> k) & 1 else -1.0 for k in range(K)])
        shift = float(np.dot(signs, widths))
        u = x + shift
        # truncated power; 0**0 would otherwise switch on the K = 1 step for u < 0
        out += float(np.prod(signs)) * np.where(u > 0, np.maximum(u, 0.0) ** (K - 1), 0.0)
    return out / norm


def ingham_construct(plan: InghamPlan, grid: Grid1D, method: str = "auto") -> SampledFunction1D:
    """Sample the convolution of (1/(2a_k)) 1_[-a_k, a_k] for k = 1..K.

    ``method="spectral"`` inverse-transforms the sinc product from the dual
    grid, so the spectrum is exact at dual nodes; it needs the product to be
    negligible beyond Nyquist. ``method="nodal"`` evaluates the exact
    piecewise polynomial at the nodes (K <= 6). ``auto`` picks spectral when
    the band is resolved.
    """
    l = float(np.sum(plan.widths))
    if grid.step > plan.widths[-1] / 8:
        raise ConfigurationError(
            f"grid step {grid.step:.3g} does not resolve the smallest width {plan.widths[-1]:.3g} "
            "(need step <= a_K/8)")
    if grid.origin > -l + 1e-12 * l or grid.end < l - 1e-12 * l:
        raise ConfigurationError(f"grid [{grid.origin}, {grid.end}) does not cover [-{l}, {l}]")
    dual = grid.dual()
    edge = abs(float(plan.spectrum(grid.nyquist)))
    if method == "auto":
        method = "spectral" if edge <= 1e-16 else "nodal"
    if method == "spectral":
        spec = SampledFunction1D(dual, plan.spectrum(dual.points()))
        vals = fourier_1d(spec, "inverse", out_origin=grid.origin).values.real
    elif method == "nodal":
        if plan.K > 6:
            raise ConfigurationError("nodal evaluation is limited to K <= 6; refine the grid instead")
        vals = _uniform_sum_density(plan.widths, grid.points())
    else:
        raise ConfigurationError(f"unknown method {method!r}")
    out = SampledFunction1D(grid, vals, (-l, l))
    out.meta.update({"method": method, "nyquist_spectrum": edge, "plan": plan.to_dict()})
    return out


def _support_extent(f: SampledFunction1D, rel: float = 1e-14) -> tuple[float, float]:
    if f.support_hint is not None:
        return f.support_hint
    x = f.points()
    a = np.abs(f.values)
    nz = np.nonzero(a > rel * a.max())[0] if a.max() > 0 else np.array([], dtype=int)
    if nz.size == 0:
        return (0.0, 0.0)
    return (float(x[nz[0]]), float(x[nz[-1]]))


def _symmetric_grid_for(f: SampledFunction1D) -> Grid1D:
    h = f.grid.step
    half = max(abs(f.grid.origin), abs(f.grid.end))
    n = 1
    while n * h / 2 < half + h:
        n *= 2
    return Grid1D(-(n // 2) * h, h, n)


def smooth_and_symmetrize(g1: SampledFunction1D, phi: SampledFunction1D, l: float) -> SampledFunction1D:
    """Even part of g1 * phi on a grid symmetric about zero.

    Both inputs must live in [-l/4, l/4], so the result is supported in
    [-l/2, l/2], well inside (-l, l).
    """
    for name, f in (("g1", g1), ("phi", phi)):
        lo, hi = _support_extent(f)
        if lo < -l / 4 - 1e-12 or hi > l / 4 + 1e-12:
            raise PreconditionError(f"{name} support [{lo:.4g}, {hi:.4g}] is not inside [-l/4, l/4]")
    g = convolve(g1, phi)
    g = embed(g, _symmetric_grid_for(g))
    even = g.with_values(0.5 * (g.values + reflect(g).values), support_hint=(-l / 2, l / 2))
    even.meta.update({"unsymmetrized_norm": g.norm(), "l": l})
    return even


# outer functions with prescribed modulus --------------------------------------------

@lru_cache(maxsize=8)
def _tanh_sinh(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Double-exponential nodes and weights on (0, 1)."""
    h = 6.0 / n
    k = np.arange(-n, n + 1) * h
    t = 0.5 * np.pi * np.sinh(k)
    u = 0.5 * (1.0 + np.tanh(t))
    w = 0.25 * h * np.pi * np.cosh(k) / np.cosh(t) ** 2
    keep = (u > 0) & (u < 1) & (w > 0)
    return u[keep], w[keep]


def conjugate_phase(psi: WeightFunction, xi, nodes: int = 160, chunk: int = 2048) -> np.ndarray:
    """Phase of the outer function with modulus exp(-psi), for xi >= 0.

    phi(xi) = -(2/pi) * integral_0^inf (psi(xi u) - psi(xi)) / (1 - u^2) du,
    split at u = 1 and mapped to (0, 1) on both sides. The phase at -xi is
    the negative of the phase at xi.
    """
    xi = np.abs(np.asarray(xi, dtype=float))
    u, w = _tanh_sinh(nodes)
    out = np.empty(xi.size)
    flat = xi.ravel()
    for lo in range(0, flat.size, chunk):
        x = flat[lo:lo + chunk, None]
        p0 = psi(x)
        near = (psi(x * u) - p0) / (1.0 - u * u)
        far = (psi(x / u) - p0) / (u * u - 1.0)
        out[lo:lo + chunk] = -(2.0 / np.pi) * ((near + far) @ w)
    return out.reshape(xi.shape)


def tukey_edge(a: np.ndarray, frac: float) -> np.ndarray:
    """1 on |a| <= 1-frac, cosine roll-off to 0 at |a| = 1."""
    w = np.ones_like(a, dtype=float)
    if frac <= 0:
        return w
    lo = 1.0 - frac
    m = a > lo
    w[m] = 0.5 * (1.0 + np.cos(np.pi * np.minimum(a[m] - lo, frac) / frac))
    return w


def pw_halfline_construct(psi: WeightFunction, grid: Grid1D, x0: float = 0.0,
                          taper: float = 0.05, nodes: int = 160) -> SampledFunction1D:
    """Function vanishing for x > x0 with |fhat| = exp(-psi) on the interior band.

    The spectrum F = exp(-psi(xi) + i sgn(xi) phi(|xi|)) extends holomorphically
    to the upper half-plane, so its inverse transform lives on x <= 0; it is
    then translated to x0. A Tukey roll-off over the outer ``taper`` fraction
    of the band limits Gibbs ringing; the modulus guarantee holds inside it.
    """
    cls = pw_integral_test(psi)
    if not cls.convergent:
        raise DivergenceError(
            f"log-integral diverges for {psi.name} ({cls.evidence}); no nonzero half-line "
            "supported function has this spectral modulus")
    nyq = grid.nyquist
    top = float(psi(nyq))
    if top > 690.0:
        raise ConfigurationError(
            f"psi(Nyquist)={top:.3g} exceeds the double-precision decay budget; use a coarser grid")
    if not grid.origin < x0 < grid.end:
        raise ConfigurationError(f"x0={x0} lies outside the grid")
    dual = grid.dual()
    xi = dual.points()
    mod = np.exp(-psi(xi))
    phase = np.sign(xi) * conjugate_phase(psi, xi, nodes)
    window = tukey_edge(np.abs(xi) / nyq, taper)
    spec = mod * window * np.exp(1j * phase) * np.exp(-2j * np.pi * xi * x0)
    vals = fourier_1d(SampledFunction1D(dual, spec), "inverse", out_origin=grid.origin).values
    out = SampledFunction1D(grid, vals, (grid.origin, x0))
    x = grid.points()
    p = np.abs(vals) ** 2
    total = float(np.sum(p))
    cum = np.cumsum(p[::-1])[::-1] / total if total > 0 else np.zeros_like(p)
    b = x[np.argmax(cum <= 1e-3)] if np.any(cum <= 1e-3) else x[-1]
    out.meta.update({
        "psi": psi.name, "x0": x0, "taper": taper, "phase_nodes": nodes,
        "interior_band": (1.0 - taper) * nyq, "psi_at_nyquist": top,
        "mass_right_of_x0": float(np.sum(p[x > x0]) / total) if total > 0 else 0.0,
        "mass_boundary_1e-3": float(b), "integral_test": cls.to_dict()})
    return out


def interior_band_mask(f_spec: SampledFunction1D, nyquist: float, taper: float) -> np.ndarray:
    return np.abs(f_spec.points()) <= (1.0 - taper) * nyquist + 1e-12


# Poisson-kernel counterexample ------------------------------------------------------

def poisson_kernel(y, period: float | None = None) -> np.ndarray:
    """P_1(y) = 1/(pi (1 + y^2)), optionally periodized with the given period."""
    y = np.asarray(y, dtype=float)
    if period is None:
        return 1.0 / (np.pi * (1.0 + y * y))
    L = period
    a = 2.0 * np.pi / L
    return np.sinh(a) / (L * (np.cosh(a) - np.cos(a * y)))


@dataclass(frozen=True)
class PoissonBudget:
    mode: str
    truncation: float
    alias: float
    tail_mass: float


def poisson_counterexample(x0: float, grid_x: Grid1D, grid_y: Grid1D, mode: str = "periodized",
                           budget: float = 1e-6, f: SampledFunction1D | None = None
                           ) -> SampledFunctionND:
    """F(x, y) = f(x) P_1(y) with f vanishing for x >= x0 and |fhat| = exp(-|u|^{1/2}).

    ``mode="periodized"`` samples the exact periodization of P_1 over the
    y-window, so the sampled spectrum in v is exactly exp(-2 pi |v|) up to the
    sampling alias exp(-pi/h_y); ``mode="truncate"`` samples P_1 itself and
    reports the discarded tail mass 1 - (2/pi) arctan(Y).
    """
    from .weights import parse_weight
    if f is None:
        f = pw_halfline_construct(parse_weight("sqrt"), grid_x, x0=x0)
    elif f.grid != grid_x:
        raise ConfigurationError("f must be sampled on grid_x")
    hy = grid_y.step
    alias = 2.0 * math.exp(-math.pi / hy)
    Y = min(-grid_y.origin, grid_y.end)
    if mode == "periodized":
        py = poisson_kernel(grid_y.points(), period=grid_y.extent)
        tail = 0.0
        trunc = alias
    elif mode == "truncate":
        py = poisson_kernel(grid_y.points())
        tail = 1.0 - (2.0 / math.pi) * math.atan(Y)
        trunc = tail + alias
    else:
        raise ConfigurationError(f"unknown Poisson mode {mode!r}")
    if trunc > budget:
        raise ConfigurationError(
            f"Poisson-kernel truncation error {trunc:.3g} exceeds budget {budget:.3g}; "
            "refine y-step or widen the window")
    vals = np.outer(f.values, py)
    out = SampledFunctionND((grid_x, grid_y), vals, ((grid_x.origin, x0), (grid_y.origin, grid_y.end)))
    out.meta.update({"x0": x0, "mode": mode, "alias_bound": alias, "tail_mass": tail,
                     "f_meta": {k: v for k, v in f.meta.items() if k != "integral_test"}})
    return out


def counterexample_psi(u, v) -> np.ndarray:
    """The non-radial growth weight |u|^{1/2} + 2 pi |v|."""
    return np.sqrt(np.abs(u)) + 2.0 * np.pi * np.abs(v)


def radialized_counterexample_psi() -> WeightFunction:
    """Angular mean of |u|^{1/2} + 2 pi |v| over the circle of radius r.

    The mean of |cos t|^{1/2} is Gamma(3/4)/(sqrt(pi) Gamma(5/4)) and the mean of
    |sin t| is 2/pi, giving c r^{1/2} + 4 r.
    """
    from scipy.special import gamma
    from .weights import NONDECREASING, _inf
    c = gamma(0.75) / (math.sqrt(math.pi) * gamma(1.25))
    return WeightFunction("radialized_poisson", lambda r: c * np.sqrt(r) + 4.0 * r, NONDECREASING,
                          False, ingham_tail=_inf, pw_tail=_inf, params={"c_sqrt": c, "c_lin": 4.0})

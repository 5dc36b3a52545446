"""Radial functions on R^n, their Radon profiles and the slice projection identity.

For a radial f on R^n with profile f(rho), the n-dimensional transform is radial
with profile::

    fhat(lam) = 2 pi (2 pi)^nu  int_0^inf f(rho) rho^(n-1) J_nu(2 pi lam rho) / (2 pi lam rho)^nu drho

with nu = n/2 - 1 (the same kernel inverts it). The Radon transform over the
hyperplane {x . omega = t} is::

    Rf(t) = |S^(n-2)| int_0^inf f(sqrt(t^2 + s^2)) s^(n-2) ds
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

from .core import Grid1D, SampledFunction1D, fourier_1d_at
from .errors import ConfigurationError, PreconditionError
from .weights import sphere_area

BESSEL_SERIES_SWITCH = 1e-2


@lru_cache(maxsize=16)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def composite_gl(a: float, b: float, panels: int, order: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Gauss-Legendre on [a, b]."""
    u, w = _gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    width = np.diff(edges)[:, None]
    nodes = edges[:-1, None] + width * u[None, :]
    weights = width * w[None, :]
    return nodes.ravel(), weights.ravel()


def bessel_ratio(nu: float, z: np.ndarray) -> np.ndarray:
    """J_nu(z)/z^nu, with the power series near z = 0."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < BESSEL_SERIES_SWITCH
    zs = z[small]
    q = (zs / 2.0) ** 2
    c0 = 1.0 / (2.0 ** nu * special.gamma(nu + 1.0))
    out[small] = c0 * (1.0 - q / (nu + 1.0) + q * q / (2.0 * (nu + 1.0) * (nu + 2.0)))
    zl = z[~small]
    if nu == 0.0:
        out[~small] = special.j0(zl)
    elif nu == 0.5:
        out[~small] = math.sqrt(2.0 / math.pi) * np.sin(zl) / zl
    else:
        out[~small] = special.jv(nu, zl) / zl ** nu
    return out


def hankel_radial(profile: Callable[[np.ndarray], np.ndarray], n: int, lam,
                  r_max: float, panels: int | None = None, order: int = 20) -> np.ndarray:
    """Radial profile of the n-dimensional Fourier transform of a radial function.

    ``profile`` is integrated over [0, r_max] by composite Gauss-Legendre with
    enough panels to resolve the largest requested frequency.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if n == 1:
        raise ConfigurationError("use fourier_1d for n = 1")
    nu = n / 2.0 - 1.0
    if panels is None:
        panels = max(16, int(math.ceil(4.0 * r_max * max(1.0, float(np.max(np.abs(lam)))))))
    rho, w = composite_gl(0.0, r_max, panels, order)
    vals = np.asarray(profile(rho), dtype=complex) * rho ** (n - 1) * w
    kern = bessel_ratio(nu, 2.0 * np.pi * np.outer(np.abs(lam), rho))
    return 2.0 * np.pi * (2.0 * np.pi) ** nu * (kern @ vals)


@dataclass(frozen=True, eq=False)
class RadialFunctionND:
    """Radial function on R^n given by a profile on [0, r_max]."""

    n: int
    profile: SampledFunction1D
    support_radius: float
    evaluator: Callable[[np.ndarray], np.ndarray] | None = None
    spectrum: Callable[[np.ndarray], np.ndarray] | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigurationError("dimension must be >= 1")
        if self.evaluator is None:
            r = self.profile.points()
            vals = self.profile.values
            fn = _profile_spline(r, vals)
            object.__setattr__(self, "evaluator", fn)

    @property
    def r_max(self) -> float:
        return self.profile.grid.end

    def __call__(self, rho) -> np.ndarray:
        rho = np.abs(np.asarray(rho, dtype=float))
        out = np.asarray(self.evaluator(rho), dtype=complex)
        return np.where(rho > self.r_max, 0.0, out)

    def at(self, *coords) -> np.ndarray:
        return self(np.sqrt(sum(np.asarray(c, dtype=float) ** 2 for c in coords)))

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], n: int, support_radius: float,
                      step: float = 1.0 / 256, spectrum=None) -> "RadialFunctionND":
        count = 1
        while count * step < support_radius + 2 * step:
            count *= 2
        grid = Grid1D(0.0, step, count)
        return cls(n, SampledFunction1D(grid, fn(grid.points())), support_radius, fn, spectrum)


def _profile_spline(r: np.ndarray, vals: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    # even extension fixes the slope at the origin
    rr = np.concatenate([-r[:0:-1], r])
    re = CubicSpline(rr, np.concatenate([vals.real[:0:-1], vals.real]))
    if np.any(vals.imag != 0):
        im = CubicSpline(rr, np.concatenate([vals.imag[:0:-1], vals.imag]))
        return lambda x: re(x) + 1j * im(x)
    return lambda x: re(x)


def _check_even(g: SampledFunction1D, tol: float = 1e-10) -> None:
    x = g.points()
    scale = float(np.max(np.abs(g.values))) or 1.0
    probe = x[np.abs(x) <= min(-g.grid.origin, g.grid.end - g.grid.step)]
    mirror = np.interp(-probe, x, g.values.real) + 1j * np.interp(-probe, x, g.values.imag)
    direct = np.interp(probe, x, g.values.real) + 1j * np.interp(probe, x, g.values.imag)
    asym = float(np.max(np.abs(mirror - direct))) / scale if probe.size else 0.0
    if asym > tol:
        raise PreconditionError(f"input is not even (asymmetry {asym:.3g})")


def radial_extend(g: SampledFunction1D, n: int, s_max: float | None = None,
                  profile_step: float | None = None, spectrum=None) -> RadialFunctionND:
    """Radial f on R^n whose n-dimensional transform has radial profile ghat.

    ``ghat`` is evaluated by a direct Riemann sum over the samples of g (or
    taken from ``spectrum`` when given) and inverted with the Hankel kernel on
    [0, s_max]; by default s_max is where |ghat| falls below 1e-15 of its peak,
    capped at the Nyquist frequency of g.
    """
    _check_even(g)
    lo, hi = g.support_hint if g.support_hint is not None else (g.grid.origin, g.grid.end)
    r = max(abs(lo), abs(hi))
    if n == 1:
        i0 = g.grid.index_of(0.0) if g.grid.origin <= 0.0 else 0
        half = SampledFunction1D(Grid1D(g.grid.origin + i0 * g.grid.step, g.grid.step, g.grid.count - i0),
                                 g.values[i0:])
        return RadialFunctionND(1, half, r, meta={"route": "identity"})
    h = profile_step or g.grid.step

    def ghat(s):
        if spectrum is not None:
            return np.asarray(spectrum(s), dtype=complex)
        return fourier_1d_at(g, s)

    if s_max is None:
        probe = np.linspace(0.0, g.grid.nyquist, 4097)
        mag = np.abs(ghat(probe))
        above = np.nonzero(mag > 1e-15 * mag.max())[0]
        s_max = float(probe[min(above[-1] + 1, probe.size - 1)]) if above.size else g.grid.nyquist
    count = 1
    while count * h < r + 4 * h:
        count *= 2
    grid = Grid1D(0.0, h, count)
    rho = grid.points()
    panels = max(16, int(math.ceil(4.0 * s_max * grid.end)))
    s, w = composite_gl(0.0, s_max, panels)
    nu = n / 2.0 - 1.0
    gs = ghat(s) * s ** (n - 1) * w
    vals = np.empty(count, dtype=complex)
    for lo_i in range(0, count, 256):
        kern = bessel_ratio(nu, 2.0 * np.pi * np.outer(rho[lo_i:lo_i + 256], s))
        vals[lo_i:lo_i + 256] = 2.0 * np.pi * (2.0 * np.pi) ** nu * (kern @ gs)
    if np.all(np.isreal(g.values)):
        vals = vals.real.astype(complex)
    prof = SampledFunction1D(grid, vals)
    weight = np.maximum(rho, h) ** (n - 1)
    p = np.abs(vals) ** 2 * weight
    tot = float(np.sum(p))
    leak = float(np.sum(p[rho > r + 2 * h]) / tot) if tot > 0 else 0.0
    return RadialFunctionND(n, prof, r, spectrum=ghat,
                            meta={"route": "hankel", "s_max": s_max, "panels": panels,
                                  "leakage": leak, "input_support": r})


def radon_radial(f: RadialFunctionND, t, panels: int = 32, order: int = 20) -> np.ndarray:
    """Hyperplane integral of a radial function at signed distance t (vectorized)."""
    t = np.abs(np.atleast_1d(np.asarray(t, dtype=float)))
    R = min(f.support_radius, f.r_max)
    out = np.zeros(t.shape, dtype=complex)
    if f.n == 1:
        inside = t <= R
        out[inside] = f(t[inside])
        return out
    omega = sphere_area(f.n - 1)
    u, w = composite_gl(0.0, 1.0, panels, order)
    for i, ti in enumerate(t):
        if ti >= R:
            continue
        smax = math.sqrt(R * R - ti * ti)
        s = smax * u
        out[i] = omega * smax * np.sum(w * f(np.sqrt(ti * ti + s * s)) * s ** (f.n - 2))
    return out


def radon_monte_carlo(f: RadialFunctionND, t: float, samples: int = 200_000, seed: int = 0) -> float:
    """Brute-force hyperplane integral for n = 2 or 3 by uniform sampling."""
    rng = np.random.default_rng(seed)
    R = f.support_radius
    if f.n == 2:
        s = rng.uniform(-R, R, samples)
        return float(2 * R * np.mean(f(np.sqrt(t * t + s * s)).real))
    if f.n == 3:
        p = rng.uniform(-R, R, (samples, 2))
        return float(4 * R * R * np.mean(f(np.sqrt(t * t + np.sum(p * p, axis=1))).real))
    raise ConfigurationError("Monte Carlo oracle covers n = 2 and n = 3")


@dataclass(frozen=True)
class SliceReport:
    lam: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    rel_err: np.ndarray

    @property
    def max_rel_err(self) -> float:
        return float(np.max(self.rel_err))

    def rows(self):
        for a, b, c, d in zip(self.lam, self.lhs, self.rhs, self.rel_err):
            yield (float(a), float(b.real), float(c.real), float(d))


def slice_projection_check(f: RadialFunctionND, lam_samples, t_step: float | None = None) -> SliceReport:
    """Compare the radial n-D transform with the 1D transform of the Radon profile.

    The left side is the Hankel transform of the profile; the right side
    samples Rf on a uniform t-grid and applies the Riemann-sum transform.
    Errors are relative to the largest left-side magnitude.
    """
    lam = np.asarray(lam_samples, dtype=float)
    R = min(f.support_radius, f.r_max)
    if f.n == 1:
        lhs = fourier_1d_at(SampledFunction1D(f.profile.grid, f.profile.values), lam)
    else:
        lhs = hankel_radial(f, f.n, lam, R)
    h = t_step or min(f.profile.grid.step, 1.0 / 64)
    count = 1
    while count * h < 2 * R + 2 * h:
        count *= 2
    tg = Grid1D(-(count // 2) * h, h, count)
    rf = SampledFunction1D(tg, radon_radial(f, tg.points()))
    rhs = fourier_1d_at(rf, lam)
    scale = float(np.max(np.abs(lhs))) or 1.0
    return SliceReport(lam, lhs, rhs, np.abs(lhs - rhs) / scale)

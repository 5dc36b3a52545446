"""Uniform grids, continuous-normalized Fourier transforms, convolution and quadrature.

Convention throughout the package::

    fhat(xi) = integral f(x) exp(-2 pi i x xi) dx

A grid with ``count`` points and ``step`` h has the dual grid of step
``1/(count*h)``. By default the dual grid is centred so that index
``count//2`` sits at frequency zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, signal

from .errors import ConfigurationError, DataError, DivergenceError, PreconditionError, PrecisionError

FORWARD = "forward"
INVERSE = "inverse"


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def _sign_value(sign: str) -> int:
    if sign in (FORWARD, "-", -1):
        return -1
    if sign in (INVERSE, "+", 1):
        return 1
    raise ConfigurationError(f"unknown transform sign {sign!r}")


def _unit_phase(turns: np.ndarray | float) -> np.ndarray:
    """exp(2 pi i * turns), reducing the argument mod 1 first for accuracy."""
    t = np.asarray(turns, dtype=float)
    return np.exp(2j * np.pi * (t - np.round(t)))


@dataclass(frozen=True)
class Grid1D:
    """Uniform samples ``origin + i*step`` for ``i = 0..count-1``."""

    origin: float
    step: float
    count: int

    def __post_init__(self) -> None:
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ConfigurationError(f"grid step must be positive, got {self.step}")
        if int(self.count) != self.count or self.count < 1:
            raise ConfigurationError(f"grid count must be a positive integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "step", float(self.step))

    @classmethod
    def centered(cls, extent: float, count: int) -> "Grid1D":
        """Grid on [-extent/2, extent/2) with x=0 at index count//2."""
        step = extent / count
        return cls(-(count // 2) * step, step, count)

    @classmethod
    def from_interval(cls, lo: float, hi: float, count: int) -> "Grid1D":
        return cls(lo, (hi - lo) / count, count)

    @property
    def extent(self) -> float:
        return self.step * self.count

    @property
    def end(self) -> float:
        return self.origin + self.extent

    def points(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.count)

    def index_of(self, x: float, tol: float = 1e-9) -> int:
        """Index of the node at x; raises if x is not (close to) a node."""
        r = (x - self.origin) / self.step
        i = int(round(r))
        if abs(r - i) > tol or not 0 <= i < self.count:
            raise ConfigurationError(f"{x} is not a node of {self}")
        return i

    def dual(self, origin: float | None = None) -> "Grid1D":
        dstep = 1.0 / self.extent
        if origin is None:
            origin = -(self.count // 2) * dstep
        return Grid1D(origin, dstep, self.count)

    @property
    def nyquist(self) -> float:
        return 0.5 / self.step


def _as_values(values, shape=None) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if shape is not None and arr.shape != tuple(shape):
        if arr.size != int(np.prod(shape)):
            raise DataError(f"expected {int(np.prod(shape))} values, got {arr.size}")
        arr = arr.reshape(shape)
    return arr


@dataclass(frozen=True, eq=False)
class SampledFunction1D:
    """Complex samples on a Grid1D, optionally with a declared support interval."""

    grid: Grid1D
    values: np.ndarray
    support_hint: tuple[float, float] | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        vals = _as_values(self.values)
        if vals.ndim != 1 or vals.size != self.grid.count:
            raise DataError(f"values length {vals.size} does not match grid count {self.grid.count}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], grid: Grid1D,
                      support_hint: tuple[float, float] | None = None) -> "SampledFunction1D":
        return cls(grid, fn(grid.points()), support_hint)

    def points(self) -> np.ndarray:
        return self.grid.points()

    def with_values(self, values, **kw) -> "SampledFunction1D":
        return replace(self, values=_as_values(values), meta=dict(self.meta), **kw)

    def norm(self) -> float:
        return float(np.sqrt(self.grid.step * np.sum(np.abs(self.values) ** 2)))

    def integral(self) -> complex:
        return complex(self.grid.step * np.sum(self.values))

    def mass_outside(self, lo: float, hi: float) -> float:
        """Relative squared-L2 mass outside [lo, hi] (0 for the zero function)."""
        x = self.points()
        p = np.abs(self.values) ** 2
        total = np.sum(p)
        if total == 0:
            return 0.0
        return float(np.sum(p[(x < lo) | (x > hi)]) / total)

    def leakage(self) -> float:
        if self.support_hint is None:
            return 0.0
        return self.mass_outside(*self.support_hint)

    def check_finite(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise DataError("samples contain NaN or infinite values")


@dataclass(frozen=True, eq=False)
class SampledFunctionND:
    """Complex samples on a tensor-product grid; ``values`` has shape (axis counts)."""

    axes: tuple[Grid1D, ...]
    values: np.ndarray
    support_hint: tuple[tuple[float, float], ...] | float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        axes = tuple(self.axes)
        shape = tuple(g.count for g in axes)
        vals = _as_values(self.values, shape)
        if vals.shape != shape:
            raise DataError(f"values shape {vals.shape} does not match axes {shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, fn: Callable[..., np.ndarray], axes: Sequence[Grid1D],
                      support_hint=None) -> "SampledFunctionND":
        return cls(tuple(axes), fn(*np.meshgrid(*[g.points() for g in axes], indexing="ij")),
                   support_hint)

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def cell(self) -> float:
        return float(np.prod([g.step for g in self.axes]))

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*[g.points() for g in self.axes], indexing="ij")

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(x * x for x in self.mesh()))

    def with_values(self, values, **kw) -> "SampledFunctionND":
        return replace(self, values=_as_values(values, self.values.shape), meta=dict(self.meta), **kw)

    def norm(self) -> float:
        return float(np.sqrt(self.cell * np.sum(np.abs(self.values) ** 2)))

    def check_finite(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise DataError("samples contain NaN or infinite values")


def _dft_axis(values: np.ndarray, axis: int, grid: Grid1D, s: int,
              out_origin: float | None) -> tuple[np.ndarray, Grid1D]:
    """Continuous-normalized DFT along one axis.

    With x_j = a + j h and y_m = b + m/(N h)::

        F(y_m) = h e^{s 2pi i a b} e^{s 2pi i a m/(N h)} DFT_s[f_j e^{s 2pi i j h b}]
    """
    n = grid.count
    if not is_power_of_two(n):
        raise ConfigurationError(f"grid count {n} is not a power of two")
    out = grid.dual(out_origin)
    a, h, b = grid.origin, grid.step, out.origin
    j = np.arange(n)
    shape = [1] * values.ndim
    shape[axis] = n
    if out_origin is None:
        # b = -(N/2)/(N h) makes the pre-phase exactly (-1)^j
        pre = np.where(j % 2 == 0, 1.0, -1.0) if n > 1 else np.ones(1)
    else:
        pre = _unit_phase(s * j * h * b)
    work = values * pre.reshape(shape)
    if s < 0:
        work = np.fft.fft(work, axis=axis)
    else:
        work = np.fft.ifft(work, axis=axis) * n
    post = h * _unit_phase(s * a * b) * _unit_phase(s * a * j * out.step)
    return work * post.reshape(shape), out


def fourier_1d(f: SampledFunction1D, sign: str = FORWARD,
               out_origin: float | None = None) -> SampledFunction1D:
    """Samples of the integral of f(x) exp(-+2 pi i x xi) on the dual grid.

    ``out_origin`` sets the first dual node; the default centres the dual grid.
    To undo a transform, call the opposite sign with ``out_origin`` equal to the
    original grid origin.
    """
    f.check_finite()
    vals, out = _dft_axis(f.values, 0, f.grid, _sign_value(sign), out_origin)
    return SampledFunction1D(out, vals)


def fourier_nd(f: SampledFunctionND, sign: str = FORWARD,
               out_origins: Sequence[float | None] | None = None,
               axes: Sequence[int] | None = None) -> SampledFunctionND:
    """Apply ``fourier_1d`` along each listed axis (all axes by default)."""
    f.check_finite()
    s = _sign_value(sign)
    axes = list(range(f.ndim)) if axes is None else list(axes)
    origins = [None] * f.ndim if out_origins is None else list(out_origins)
    if len(origins) != f.ndim:
        raise ConfigurationError("out_origins must list one entry per axis")
    vals = f.values
    grids = list(f.axes)
    for ax in axes:
        vals, grids[ax] = _dft_axis(vals, ax, f.axes[ax], s, origins[ax])
    return SampledFunctionND(tuple(grids), vals)


def fourier_1d_at(f: SampledFunction1D, freqs, sign: str = FORWARD,
                  chunk: int = 256) -> np.ndarray:
    """Riemann-sum transform evaluated at arbitrary frequencies.

    Same discretization as ``fourier_1d`` (which it matches on dual nodes) but
    usable off the dual grid.
    """
    f.check_finite()
    s = _sign_value(sign)
    xi = np.atleast_1d(np.asarray(freqs, dtype=float))
    x = f.points()
    out = np.empty(xi.shape, dtype=complex)
    flat = xi.ravel()
    res = out.ravel()
    for lo in range(0, flat.size, chunk):
        blk = flat[lo:lo + chunk]
        res[lo:lo + chunk] = f.grid.step * (_unit_phase(s * np.outer(blk, x)) @ f.values)
    return res.reshape(xi.shape)


def embed(f: SampledFunction1D, grid: Grid1D) -> SampledFunction1D:
    """Zero-extend f onto a larger grid with the same step and aligned nodes."""
    if not math.isclose(f.grid.step, grid.step, rel_tol=1e-12):
        raise ConfigurationError("embed requires equal steps")
    off = (f.grid.origin - grid.origin) / grid.step
    i0 = int(round(off))
    if abs(off - i0) > 1e-9 or i0 < 0 or i0 + f.grid.count > grid.count:
        raise ConfigurationError("target grid does not contain the source nodes")
    vals = np.zeros(grid.count, dtype=complex)
    vals[i0:i0 + f.grid.count] = f.values
    return SampledFunction1D(grid, vals, f.support_hint)


def convolve(f: SampledFunction1D, g: SampledFunction1D, direct_limit: int = 4096) -> SampledFunction1D:
    """Zero-padded linear convolution with the continuous normalization (times step).

    The output grid starts at ``f.origin + g.origin`` and is padded up to a power
    of two, so it is never circular.
    """
    if not math.isclose(f.grid.step, g.grid.step, rel_tol=1e-12):
        raise ConfigurationError(f"grid steps differ: {f.grid.step} vs {g.grid.step}")
    f.check_finite()
    g.check_finite()
    h = f.grid.step
    m = f.grid.count + g.grid.count - 1
    if min(f.grid.count, g.grid.count) <= direct_limit // 8 or m <= direct_limit:
        full = np.convolve(f.values, g.values)
    else:
        full = signal.fftconvolve(f.values, g.values)
    n = next_power_of_two(m)
    vals = np.zeros(n, dtype=complex)
    vals[:m] = h * full
    hint = None
    if f.support_hint is not None and g.support_hint is not None:
        hint = (f.support_hint[0] + g.support_hint[0], f.support_hint[1] + g.support_hint[1])
    return SampledFunction1D(Grid1D(f.grid.origin + g.grid.origin, h, n), vals, hint)


def reflect(f: SampledFunction1D) -> SampledFunction1D:
    """x -> -x on a grid symmetric about zero (origin = -count/2 * step)."""
    g = f.grid
    r = -2.0 * g.origin / g.step
    m = int(round(r))
    if abs(r - m) > 1e-9 or m != g.count:
        raise ConfigurationError("reflection needs a grid with origin -count*step/2")
    # node i maps to node N-i; node 0 has no mirror image on the grid
    vals = np.zeros(g.count, dtype=complex)
    vals[1:] = f.values[:0:-1]
    return f.with_values(vals, support_hint=None if f.support_hint is None
                         else (-f.support_hint[1], -f.support_hint[0]))


# quadrature -------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    partials: tuple[tuple[float, float], ...] = ()


def _quad(fn: Callable[[float], float], a: float, b: float, tol: float, limit: int) -> tuple[float, float]:
    val, err = integrate.quad(fn, a, b, epsabs=tol, epsrel=0.0, limit=limit)[:2]
    return float(val), float(err)


def _panels(a: float, b: float) -> list[tuple[float, float]]:
    if a > 0 and b / a > 100.0:
        edges = np.geomspace(a, b, int(math.ceil(math.log10(b / a))) + 1)
        return list(zip(edges[:-1], edges[1:]))
    return [(a, b)]


def integrate_adaptive(fn: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                       tail: Callable[[float], float] | None = None, limit: int = 200,
                       max_decades: int = 60) -> QuadResult:
    """Adaptive Gauss-Kronrod integral of a real function with an error target.

    Wide finite intervals are split into decade panels. For ``b = inf`` a tail
    envelope ``tail(T) >= |integral_T^inf fn|`` must be supplied; the range is
    extended decade by decade until the envelope drops below ``tol/2``. If the
    envelope never closes the partial integrals are tested for logarithmic
    growth and a DivergenceError is raised when they do not settle.
    """
    if not tol > 0:
        raise ConfigurationError("tol must be positive")
    if math.isinf(b):
        if tail is None:
            raise PreconditionError("infinite range needs a declared monotone tail envelope")
        return _integrate_to_infinity(fn, a, tol, tail, limit, max_decades)
    pieces = _panels(a, b)
    total, err = 0.0, 0.0
    for lo, hi in pieces:
        v, e = _quad(fn, lo, hi, tol / len(pieces), limit)
        total += v
        err += e
    if err > tol:
        raise PrecisionError(f"quadrature error {err:.3e} exceeds tol {tol:.3e}", total, err)
    return QuadResult(total, err)


def _integrate_to_infinity(fn, a, tol, tail, limit, max_decades) -> QuadResult:
    start = max(a, 1.0)
    total, err = 0.0, 0.0
    if start > a:
        total, err = _quad(fn, a, start, tol / 4, limit)
    partials = []
    t_lo = start
    for _ in range(max_decades):
        t_hi = 10.0 * t_lo
        # u = 1/t maps the decade to a bounded interval in the reciprocal variable
        v, e = _quad(lambda u: fn(1.0 / u) / (u * u), 1.0 / t_hi, 1.0 / t_lo, tol / 4, limit)
        total += v
        err += e
        partials.append((t_hi, total))
        t_lo = t_hi
        bound = tail(t_lo)
        if bound <= tol / 2:
            return QuadResult(total, err + bound, tuple(partials))
    growth = log_growth_rate([p[0] for p in partials], [p[1] for p in partials])
    incr = np.diff([p[1] for p in partials])
    if len(incr) >= 3 and abs(incr[-1]) > tol and abs(incr[-1]) >= 0.5 * abs(incr[-3]):
        raise DivergenceError(f"partial integrals keep growing (slope {growth:.3g} per unit log T)")
    raise PrecisionError("tail envelope did not close within the decade limit", total, err + tail(t_lo))


def log_growth_rate(ts: Sequence[float], values: Sequence[float], last: int = 3) -> float:
    """Slope of partial integrals against log T over the last ``last`` points."""
    ts = np.asarray(ts, dtype=float)[-last:]
    vs = np.asarray(values, dtype=float)[-last:]
    if ts.size < 2:
        return float("nan")
    return float((vs[-1] - vs[0]) / (math.log(ts[-1]) - math.log(ts[0])))

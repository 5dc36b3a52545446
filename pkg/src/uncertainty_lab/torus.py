"""Periodization onto T^n = R^n / Z^n, Fourier coefficients and modulation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Grid1D, SampledFunctionND, is_power_of_two
from .errors import ConfigurationError


def _dyadic_step(step: float) -> int:
    """Return N with step = 1/N, N a power of two; raise otherwise."""
    n = 1.0 / step
    N = int(round(n))
    if abs(n - N) > 1e-9 * n or not is_power_of_two(N):
        raise ConfigurationError(f"step {step} is not 1/2^j; folding onto the torus needs dyadic steps")
    return N


@dataclass(frozen=True, eq=False)
class TorusFunction:
    """Samples at x = i/N on [0, 1)^n (one N per axis)."""

    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        for N in vals.shape:
            if not is_power_of_two(N):
                raise ConfigurationError(f"torus axis length {N} is not a power of two")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*[np.arange(N) / N for N in self.shape], indexing="ij")

    def norm(self) -> float:
        return float(np.sqrt(np.mean(np.abs(self.values) ** 2)))

    def integral(self) -> complex:
        return complex(np.mean(self.values))

    def as_sampled(self) -> SampledFunctionND:
        return SampledFunctionND(tuple(Grid1D(0.0, 1.0 / N, N) for N in self.shape), self.values)


def periodize(g: SampledFunctionND, shift: Sequence[float] | None = None) -> TorusFunction:
    """f(x) = sum_k g(x + shift + k) sampled on the dyadic torus grid.

    Each sample of g at y lands at x = y - shift mod 1, so the coefficients
    satisfy fhat(m) = ghat(m) exp(2 pi i m . shift). Shift and grid origin must
    be whole multiples of the step, which keeps the folding exact.
    """
    shift = np.zeros(g.ndim) if shift is None else np.asarray(shift, dtype=float)
    if shift.size != g.ndim:
        raise ConfigurationError("shift needs one entry per axis")
    idx = []
    shape = []
    for ax, (grid, s) in enumerate(zip(g.axes, shift)):
        N = _dyadic_step(grid.step)
        off = (grid.origin - s) * N
        o = int(round(off))
        if abs(off - o) > 1e-9 * max(1.0, abs(off)):
            raise ConfigurationError(f"axis {ax}: origin - shift is not a multiple of the step")
        idx.append((o + np.arange(grid.count)) % N)
        shape.append(N)
    out = np.zeros(shape, dtype=complex)
    np.add.at(out, np.ix_(*idx), g.values)
    return TorusFunction(out, {"shift": shift.tolist()})


def torus_coefficients(f: TorusFunction, band: int) -> np.ndarray:
    """fhat(m) for |m|_inf <= band; entry [m_1+band, ..., m_n+band].

    The rectangle rule on the torus grid is exact for trigonometric
    polynomials of degree below N/2.
    """
    for N in f.shape:
        if band >= N // 2:
            raise ConfigurationError(f"band {band} exceeds Nyquist for {N} samples per axis")
    c = np.fft.fftn(f.values) / f.values.size
    sel = np.arange(-band, band + 1)
    return c[np.ix_(*[sel % N for N in f.shape])]


def coefficient_rows(coeffs: np.ndarray, band: int):
    """Yield (m_1, ..., m_n, re, im) rows for CSV export."""
    for ind in np.ndindex(coeffs.shape):
        v = coeffs[ind]
        yield tuple(i - band for i in ind) + (float(v.real), float(v.imag))


def modulate(g: TorusFunction, m: Sequence[int], m0: Sequence[int]) -> TorusFunction:
    """g_m(x) = exp(2 pi i (m - m0) . x) g(x); its coefficients satisfy g_m^(l) = ghat(l + m0 - m)."""
    d = np.asarray(m, dtype=int) - np.asarray(m0, dtype=int)
    if d.size != g.n:
        raise ConfigurationError("lattice vectors need one entry per axis")
    phase = np.ones(g.shape, dtype=complex)
    for ax, (N, k) in enumerate(zip(g.shape, d)):
        j = np.arange(N)
        e = np.exp(2j * np.pi * ((k * j) % N) / N)
        shape = [1] * g.n
        shape[ax] = N
        phase = phase * e.reshape(shape)
    return TorusFunction(g.values * phase, {"m": list(map(int, m)), "m0": list(map(int, m0))})


def translate_torus(f: TorusFunction, shift: Sequence[float]) -> TorusFunction:
    """x -> f(x + shift) by index rolling; shift must be on the grid."""
    vals = f.values
    for ax, (N, s) in enumerate(zip(f.shape, shift)):
        k = s * N
        ki = int(round(k))
        if abs(k - ki) > 1e-9 * max(1.0, abs(k)):
            raise ConfigurationError("torus translation must be a multiple of the step")
        vals = np.roll(vals, -ki, axis=ax)
    return TorusFunction(vals)


def lattice_norms(band: int, n: int) -> np.ndarray:
    """|m| for the coefficient block returned by ``torus_coefficients``."""
    axes = np.meshgrid(*[np.arange(-band, band + 1)] * n, indexing="ij")
    return np.sqrt(sum(a.astype(float) ** 2 for a in axes))


def integer_spectrum_direct(g: SampledFunctionND, band: int) -> np.ndarray:
    """ghat(m) at integer m by direct Riemann sums, as an independent reference."""
    sel = np.arange(-band, band + 1)
    vals = g.values
    for ax, grid in enumerate(g.axes):
        x = grid.points()
        ker = grid.step * np.exp(-2j * np.pi * np.outer(sel, x))
        vals = np.moveaxis(np.tensordot(ker, np.moveaxis(vals, ax, 0), axes=(1, 0)), 0, ax)
    return vals


def weight_on_lattice(theta, band: int, n: int) -> np.ndarray:
    """Evaluate a radial weight at |m| only, as the torus statements require."""
    return np.asarray(theta(lattice_norms(band, n)))


def decay_bound_lattice(theta, C: float, band: int, n: int) -> np.ndarray:
    """C exp(-(2/sqrt|l| + theta(l)) |l|), the transported envelope for modulated functions."""
    r = lattice_norms(band, n)
    with np.errstate(divide="ignore"):
        extra = np.where(r > 0, 2.0 / np.sqrt(np.maximum(r, 1e-300)), 0.0)
    return C * np.exp(-(extra + weight_on_lattice(theta, band, n)) * r)


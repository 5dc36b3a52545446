"""Free Schrodinger evolution for constant-coefficient operators sum a_ij d_i d_j.

The solution of dw/dt = i Delta_A w with w(., 0) = f has transform
exp(-4 pi^2 i t xi.A xi) fhat(xi). Two independent routes are provided: the
spectral multiplier on the FFT grid and direct oscillatory quadrature against
the explicit kernel. The kernel of the diagonal operator with entries d_j != 0
factorizes as

    gamma_t(x) = prod_j |d_j|^(-1/2) (4 pi |t|)^(-1/2) e^{-i pi sgn(t d_j)/4} e^{i x_j^2 / (4 t d_j)}

and a zero entry leaves the corresponding coordinate untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import Grid1D, SampledFunction1D, SampledFunctionND, _unit_phase, fourier_nd
from .envelope import PSI, decay_envelope
from .errors import ConfigurationError, PreconditionError
from .quasianalytic import AuditReport, as_nd, combine_verdict
from .weights import WeightFunction, pw_integral_test

SYMMETRY_TOL = 1e-12
RANK_TOL = 1e-10
DIRECT_SUM_LIMIT = 6e7


@dataclass(frozen=True, eq=False)
class SchrodingerSystem:
    """A = P diag(d) P^t with the nonzero entries of d listed first."""

    A: np.ndarray
    P: np.ndarray
    d: np.ndarray
    k: int
    sigma: int
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def singular(self) -> bool:
        return self.k < self.n

    def residual(self) -> float:
        return float(np.linalg.norm(self.P.T @ self.A @ self.P - np.diag(self.d)))

    def coordinate_axes(self) -> list[int] | None:
        """Axis carrying eigen-coordinate j when P is a signed permutation, else None."""
        Q = np.abs(self.P)
        if not np.allclose(Q, np.round(Q), atol=1e-12):
            return None
        return [int(np.argmax(Q[:, j])) for j in range(self.n)]

    def to_dict(self) -> dict:
        return {"A": self.A.tolist(), "P": self.P.tolist(), "d": self.d.tolist(), "k": self.k,
                "sigma": self.sigma, "residual": self.residual()}


def diagonalize(A) -> SchrodingerSystem:
    """Orthogonal diagonalization with a deterministic eigenvector sign and a rank cut."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise PreconditionError(f"A must be square, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.T)) > SYMMETRY_TOL * scale:
        raise PreconditionError("A is not symmetric")
    A = 0.5 * (A + A.T)
    w, V = np.linalg.eigh(A)
    top = float(np.max(np.abs(w))) if w.size else 0.0
    zero = np.abs(w) <= RANK_TOL * top if top > 0 else np.ones(w.shape, dtype=bool)
    w = np.where(zero, 0.0, w)
    order = np.concatenate([np.nonzero(~zero)[0], np.nonzero(zero)[0]])
    w, V = w[order], V[:, order]
    for j in range(V.shape[1]):
        col = V[:, j]
        lead = col[np.nonzero(np.abs(col) > 1e-12)[0][0]]
        if lead < 0:
            V[:, j] = -col
    k = int(np.sum(~zero))
    sigma = int(np.sum(w > 0) - np.sum(w < 0))
    near = np.abs(np.linalg.eigvalsh(A))
    borderline = bool(top > 0 and np.any((near > 0.1 * RANK_TOL * top) & (near < 10 * RANK_TOL * top)))
    return SchrodingerSystem(A, V, w, k, sigma, {"borderline_rank": borderline})


def parse_matrix(text: str) -> np.ndarray:
    """'1,0;0,-1' -> [[1, 0], [0, -1]]."""
    try:
        rows = [[float(v) for v in row.split(",")] for row in text.strip().split(";")]
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse matrix {text!r}") from exc
    if len({len(r) for r in rows}) != 1:
        raise ConfigurationError(f"ragged matrix {text!r}")
    return np.array(rows)


def propagate_multiplier(f: SampledFunction1D | SampledFunctionND, sys: SchrodingerSystem,
                         t: float) -> SampledFunctionND:
    """w(., t) through the multiplier exp(-4 pi^2 i t xi.A xi) on the periodic FFT grid."""
    f = as_nd(f)
    if f.ndim != sys.n:
        raise ConfigurationError(f"function has {f.ndim} axes, A is {sys.n}x{sys.n}")
    if t == 0:
        return f.with_values(f.values.copy())
    spec = fourier_nd(f)
    mesh = spec.mesh()
    quad = sum(sys.A[i, j] * mesh[i] * mesh[j] for i in range(sys.n) for j in range(sys.n))
    out = fourier_nd(spec.with_values(spec.values * _unit_phase(-2.0 * math.pi * t * quad)), "inverse",
                     out_origins=[g.origin for g in f.axes])
    return SampledFunctionND(f.axes, out.values, None, {"route": "multiplier", "t": t})


def _gamma_factor(d: float, t: float, u: np.ndarray) -> np.ndarray:
    amp = 1.0 / math.sqrt(abs(d) * 4.0 * math.pi * abs(t))
    return amp * _unit_phase(-0.125 * math.copysign(1.0, t * d) + u * u / (8.0 * math.pi * t * d))


def kernel_gamma(sys: SchrodingerSystem, t: float, x) -> np.ndarray:
    """gamma_t at points x (last axis = coordinates), evaluated at z = P^t x."""
    if sys.singular:
        raise ConfigurationError("A is singular; the kernel is a distribution (use propagate_kernel)")
    if t == 0:
        raise ConfigurationError("the kernel is undefined at t = 0")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != sys.n:
        x = x[..., None] if sys.n == 1 else x
    z = x @ sys.P
    out = np.ones(z.shape[:-1], dtype=complex)
    for j in range(sys.n):
        out = out * _gamma_factor(sys.d[j], t, z[..., j])
    return out


def _oscillation_budget(sys: SchrodingerSystem, t: float, diameter: float, step: float) -> dict:
    """Refuse steps that do not resolve the kernel phase gradient |z|/(2|t||d_j|)."""
    dmin = float(np.min(np.abs(sys.d[:sys.k])))
    grad = diameter / (2.0 * abs(t) * dmin)
    limit = math.pi / (4.0 * grad)
    if step > limit:
        raise ConfigurationError(
            f"step {step:.3g} exceeds the oscillation budget {limit:.3g} "
            f"(phase gradient {grad:.3g} over distance {diameter:.3g})")
    return {"phase_gradient": grad, "step_limit": limit, "diameter": diameter}


def _support_box(f: SampledFunctionND) -> list[np.ndarray]:
    """Index ranges on each axis that contain every nonzero sample."""
    nz = np.nonzero(f.values)
    if nz[0].size == 0:
        return [np.arange(0) for _ in f.axes]
    return [np.arange(int(i.min()), int(i.max()) + 1) for i in nz]


def _kernel_matrix(out_x: np.ndarray, in_x: np.ndarray, d: float, t: float, h: float) -> np.ndarray:
    return h * _gamma_factor(d, t, out_x[:, None] - in_x[None, :])


def propagate_kernel(f: SampledFunction1D | SampledFunctionND, sys: SchrodingerSystem,
                     t: float) -> SampledFunctionND:
    """w(., t) = f * beta_t by direct quadrature, evaluated on the grid of f.

    When P is a signed permutation the kernel factorizes and the sum is taken
    one axis at a time; singular directions are left untouched, which is the
    convolution over the first k eigen-coordinates only. A general rotated A
    (necessarily nonsingular here) uses the full n-dimensional sum.
    """
    f = as_nd(f)
    if f.ndim != sys.n:
        raise ConfigurationError(f"function has {f.ndim} axes, A is {sys.n}x{sys.n}")
    if t == 0:
        return f.with_values(f.values.copy())
    if sys.k == 0:
        return SampledFunctionND(f.axes, f.values.copy(), None, {"route": "kernel", "t": t})
    box = _support_box(f)
    if any(b.size == 0 for b in box):
        return SampledFunctionND(f.axes, np.zeros(f.values.shape, complex), None, {"route": "kernel", "t": t})
    axes_of = sys.coordinate_axes()
    if axes_of is not None:
        active = [axes_of[j] for j in range(sys.k)]
        diam = math.sqrt(sum(max(abs(f.axes[a].end - f.axes[a].points()[box[a][0]]),
                                 abs(f.axes[a].points()[box[a][-1]] - f.axes[a].origin)) ** 2
                             for a in active))
        budget = _oscillation_budget(sys, t, diam, max(f.axes[a].step for a in active))
        vals = f.values
        for j in range(sys.k):
            a = axes_of[j]
            g = f.axes[a]
            x = g.points()
            K = _kernel_matrix(x, x[box[a]], sys.d[j], t, g.step)
            vals = np.moveaxis(np.tensordot(K, np.moveaxis(np.take(vals, box[a], axis=a), a, 0),
                                            axes=(1, 0)), 0, a)
        return SampledFunctionND(f.axes, vals, None, {"route": "kernel", "t": t, "separable": True, **budget})
    if sys.singular:
        raise ConfigurationError("singular A must have coordinate-aligned eigenvectors for the kernel route")
    pts = np.stack([m.ravel() for m in f.mesh()], axis=-1)
    return SampledFunctionND(f.axes, propagate_kernel_at(f, sys, t, pts).reshape(f.values.shape), None,
                             {"route": "kernel", "t": t, "separable": False})


def propagate_kernel_at(f: SampledFunction1D | SampledFunctionND, sys: SchrodingerSystem, t: float,
                        points, chunk: int = 512) -> np.ndarray:
    """Direct oscillatory sum at arbitrary points (nonsingular A)."""
    f = as_nd(f)
    if sys.singular:
        raise ConfigurationError("pointwise evaluation needs nonsingular A")
    if t == 0:
        raise ConfigurationError("the kernel is undefined at t = 0")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[-1] != f.ndim:
        pts = pts.reshape(-1, f.ndim)
    mask = f.values != 0
    ys = np.stack([m[mask] for m in f.mesh()], axis=-1)
    fv = f.values[mask]
    if ys.shape[0] * pts.shape[0] > DIRECT_SUM_LIMIT:
        raise ConfigurationError(f"direct sum of {ys.shape[0]} x {pts.shape[0]} terms exceeds the work limit")
    out = np.zeros(pts.shape[0], dtype=complex)
    if ys.shape[0] == 0:
        return out
    diam = float(np.max(np.linalg.norm(pts, axis=-1)) + np.max(np.linalg.norm(ys, axis=-1)))
    _oscillation_budget(sys, t, diam, max(g.step for g in f.axes))
    for lo in range(0, pts.shape[0], chunk):
        p = pts[lo:lo + chunk]
        out[lo:lo + chunk] = kernel_gamma(sys, t, p[:, None, :] - ys[None, :, :]) @ fv * f.cell
    return out


def chirp_reduce(f: SampledFunctionND, sys: SchrodingerSystem, t0: float,
                 x_rest: Sequence[float] = ()) -> SampledFunctionND:
    """g(z') = f(4 pi t0 d_1 z_1, ..., x'') exp(4 pi^2 i t0 sum d_j z_j^2) on R^k.

    The z-grid is the image of the y-grid under z_j = y_j/(4 pi t0 d_j), so the
    substitution is exact at the sample level (a negative scale reverses the
    axis). Its transform satisfies
    |f_x'' * gamma_t0 (x')| = sqrt|d_1...d_k| (4 pi |t0|)^(k/2) |ghat(x')|.
    """
    f = as_nd(f)
    axes_of = sys.coordinate_axes()
    if axes_of is None:
        raise ConfigurationError("chirp reduction needs A diagonal in the sampling coordinates")
    if t0 == 0:
        raise ConfigurationError("t0 must be nonzero")
    k = sys.k
    rest_axes = axes_of[k:]
    x_rest = list(x_rest)
    if len(x_rest) != len(rest_axes):
        raise ConfigurationError(f"need {len(rest_axes)} frozen coordinates, got {len(x_rest)}")
    index = [slice(None)] * f.ndim
    for a, xv in zip(rest_axes, x_rest):
        index[a] = f.axes[a].index_of(xv)
    sl = f.values[tuple(index)]
    act = axes_of[:k]
    # remaining array axes are the active ones in increasing axis order
    order = sorted(act)
    sl = np.transpose(sl, [order.index(a) for a in act])
    grids, vals = [], sl
    phase = np.zeros(sl.shape)
    for j, a in enumerate(act):
        g = f.axes[a]
        y = g.points()
        if np.max(np.abs(y)) / (2.0 * abs(t0) * abs(sys.d[j])) * g.step > math.pi / 4.0:
            raise ConfigurationError(f"chirp on axis {a} is under-resolved at step {g.step:.3g}")
        s = 4.0 * math.pi * t0 * sys.d[j]
        shape = [1] * k
        shape[j] = y.size
        phase = phase + (y * y / (8.0 * math.pi * t0 * sys.d[j])).reshape(shape)
        grids.append((g, s))
    vals = sl * _unit_phase(phase)
    out_axes = []
    for j, (g, s) in enumerate(grids):
        if s > 0:
            out_axes.append(Grid1D(g.origin / s, g.step / s, g.count))
        else:
            out_axes.append(Grid1D((g.origin + (g.count - 1) * g.step) / s, g.step / abs(s), g.count))
            vals = np.flip(vals, axis=j)
    return SampledFunctionND(tuple(out_axes), vals, None,
                             {"t0": t0, "scales": [s for _, s in grids], "x_rest": x_rest,
                              "prefactor": math.sqrt(abs(float(np.prod(sys.d[:k])))) * (4 * math.pi * abs(t0)) ** (k / 2)})


def transform_at(g: SampledFunctionND, points) -> np.ndarray:
    """Riemann-sum transform of g at arbitrary points (rows of ``points``)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(pts.shape[0], dtype=complex)
    xs = [ax.points() for ax in g.axes]
    for i, p in enumerate(pts):
        v = g.values
        for ax in range(g.ndim - 1, -1, -1):
            v = v @ _unit_phase(-p[ax] * xs[ax])
        out[i] = complex(v) * g.cell
    return out


def chirp_identity(f: SampledFunctionND, sys: SchrodingerSystem, t0: float, x_rest: Sequence[float],
                   probe_index: Sequence[int]) -> dict:
    """Both sides of the chirp identity at grid probes along the first active axis."""
    f = as_nd(f)
    axes_of = sys.coordinate_axes()
    if axes_of is None or sys.k != 1:
        raise ConfigurationError("the probe helper covers one active coordinate")
    w = propagate_kernel(f, sys, t0)
    a = axes_of[0]
    index = [slice(None)] * f.ndim
    for ax, xv in zip(axes_of[1:], x_rest):
        index[ax] = f.axes[ax].index_of(xv)
    line = w.values[tuple(index)]
    probes = np.asarray(probe_index, dtype=int)
    lhs = np.abs(line[probes])
    g = chirp_reduce(f, sys, t0, x_rest)
    xp = f.axes[a].points()[probes]
    rhs = g.meta["prefactor"] * np.abs(transform_at(g, xp[:, None]))
    scale = float(np.max(lhs)) or 1.0
    return {"x": xp, "lhs": lhs, "rhs": rhs, "max_rel_err": float(np.max(np.abs(lhs - rhs)) / scale)}


def free_gaussian(x: np.ndarray, a: float, t: float) -> np.ndarray:
    """Evolution of exp(-pi x^2) under dw/dt = i a w'': (1 + 4 pi i a t)^(-1/2) exp(-pi x^2/(1 + 4 pi i a t))."""
    z = 1.0 + 4j * math.pi * a * t
    return np.exp(-math.pi * x * x / z) / np.sqrt(z)


def rotation_check(fn: Callable[..., np.ndarray], axes: Sequence[Grid1D], A, t0: float,
                   points, source_cut: float = 1e-17) -> dict:
    """Compare exp(i t0 Delta_A) f(x) with exp(i t0 Delta_D) f_P(P^t x), f_P(y) = f(P y).

    The left side uses the multiplier route on the grid (read at grid points),
    the right side the diagonal kernel at the rotated points.
    """
    sys = diagonalize(A)
    f = SampledFunctionND.from_callable(fn, axes)
    lhs_full = propagate_multiplier(f, sys, t0)
    idx = np.atleast_2d(np.asarray(points, dtype=int))
    lhs = np.array([lhs_full.values[tuple(i)] for i in idx])
    x = np.stack([ax.points()[idx[:, j]] for j, ax in enumerate(axes)], axis=-1)
    P = sys.P
    fP = SampledFunctionND.from_callable(lambda *y: fn(*np.tensordot(P, np.stack(y), axes=(1, 0))), axes)
    # drop negligible source samples so the direct sum stays inside the oscillation budget
    v = np.array(fP.values)
    v[np.abs(v) < source_cut * np.max(np.abs(v))] = 0.0
    fP = fP.with_values(v)
    dsys = diagonalize(np.diag(sys.d))
    rhs = propagate_kernel_at(fP, dsys, t0, x @ P)
    scale = float(np.max(np.abs(lhs_full.values)))
    return {"lhs": lhs, "rhs": rhs, "max_rel_err": float(np.max(np.abs(lhs - rhs)) / scale), "P": P.tolist()}


def _compact_support(f: SampledFunctionND, mass_tol: float) -> dict:
    """Evidence that f is compactly supported inside the sampling window.

    Samples cannot separate a C_c function from a rapidly decaying one (both
    underflow to zero), so compactness must be declared through the support
    hint; the declared box has to carry all but ``mass_tol`` of the mass and
    sit strictly inside the window.
    """
    p = np.abs(f.values) ** 2
    tot = float(p.sum())
    if tot == 0.0:
        return {"compact": True, "how": "zero function"}
    if f.support_hint is None:
        return {"compact": False, "how": "no declared support"}
    inside = np.ones(p.shape, dtype=bool)
    for m, (lo, hi) in zip(f.mesh(), f.support_hint):
        inside &= (m >= lo) & (m <= hi)
    out = float(p[~inside].sum()) / tot
    interior = all(g.origin < lo and hi < g.end for g, (lo, hi) in zip(f.axes, f.support_hint))
    return {"compact": bool(out <= mass_tol and interior), "how": "declared support",
            "mass_outside": out, "support": [list(b) for b in f.support_hint]}


def uc_audit_rn(f: SampledFunction1D | SampledFunctionND, sys: SchrodingerSystem, t0: float,
                psi: WeightFunction, mass_tol: float = 1e-10, norm_tol: float = 1e-6,
                envelope_threshold: float = 0.05, bins: int = 6) -> AuditReport:
    """Compact f, spatial decay |w(x, t0)| <= C exp(-psi(x)), against int psi/(1+r^2).

    The spatial envelope uses dyadic radial bins of |w| from R/2^bins up to the
    largest radius R inscribed in the window.
    """
    f = as_nd(f)
    if t0 == 0:
        raise ConfigurationError("t0 must be nonzero")
    norm = f.norm()
    supp = _compact_support(f, mass_tol)
    w = propagate_multiplier(f, sys, t0)
    R = min(min(-g.origin, g.end) for g in f.axes)
    radii = np.sqrt(sum(m ** 2 for m in w.mesh()))
    fit = decay_envelope(np.abs(w.values), psi, mode=PSI, lo=R / 2 ** bins, hi=R, radii=radii,
                         nyquist=R, threshold=envelope_threshold, min_bins=bins)
    cls = pw_integral_test(psi, n=1)
    divergent = not cls.convergent
    hyps = supp["compact"] and fit.holds
    verdict = combine_verdict(norm <= norm_tol, hyps, not divergent)
    return AuditReport(
        "schrodinger_uc", verdict,
        hypotheses={"compact_support": supp["compact"], "envelope": fit.holds, "integral_divergent": divergent},
        conclusion={"norm": norm, "negligible": norm <= norm_tol},
        measurements={"t0": t0, "system": sys.to_dict(), "support": supp, "norm": norm,
                      "c_fit": fit.c_fit, "C_fit": fit.C_fit, "window_radius": R},
        classification=cls.to_dict(), envelope=fit.to_dict(),
        thresholds={"mass_tol": mass_tol, "norm_tol": norm_tol, "envelope_threshold": envelope_threshold})

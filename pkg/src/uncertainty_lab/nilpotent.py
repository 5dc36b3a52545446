"""Two-step nilpotent Lie algebras g = v + z at desk scale.

A group is given by structure constants [V_i, V_j] = sum_s c_ij^s Z_s. For a
central frequency nu the alternating form B_nu(V_i, V_j) = nu([V_i, V_j]) has
matrix S_nu; its jump indices, symplectic weights d_j(nu) and Pfaffian drive
the Plancherel density. Indices of basis vectors are 1-based in every public
interface.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import linalg

from .core import Grid1D, SampledFunction1D, SampledFunctionND, _unit_phase, fourier_1d_at, next_power_of_two
from .errors import ConfigurationError, LabError, PreconditionError
from .geometry import composite_gl
from .io import load_sfn, save_sfn

RANK_TOL = 1e-10
COLLISION_TOL = 1e-6
SERIES_SWITCH = 1e-3


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Structure constants as an array C[s, i, j] (0-based storage)."""

    m: int
    k: int
    C: np.ndarray
    name: str = "custom"

    def __post_init__(self) -> None:
        C = np.asarray(self.C, dtype=float)
        if C.shape != (self.k, self.m, self.m):
            raise ConfigurationError(f"structure constants must have shape ({self.k}, {self.m}, {self.m})")
        if not np.array_equal(C, -np.transpose(C, (0, 2, 1))):
            raise ConfigurationError("structure constants must be antisymmetric in i, j")
        if self.k < 1 or self.m < 1:
            raise ConfigurationError("need m >= 1 and k >= 1")
        C.setflags(write=False)
        object.__setattr__(self, "C", C)

    @classmethod
    def from_brackets(cls, m: int, k: int, brackets: Sequence[Sequence[float]], name: str = "custom") -> "GroupSpec":
        """Brackets [i, j, s, c] mean [V_i, V_j] gets c Z_s (1-based); the antisymmetric partner is implied."""
        C = np.zeros((k, m, m))
        for entry in brackets:
            if len(entry) != 4:
                raise ConfigurationError(f"bracket entry {entry} must be [i, j, s, c]")
            i, j, s = (int(e) for e in entry[:3])
            c = float(entry[3])
            if not (1 <= i <= m and 1 <= j <= m and 1 <= s <= k) or i == j:
                raise ConfigurationError(f"bracket entry {entry} is out of range")
            C[s - 1, i - 1, j - 1] += c
            C[s - 1, j - 1, i - 1] -= c
        return cls(m, k, C, name)

    def brackets(self) -> list[list[float]]:
        out = []
        for s in range(self.k):
            for i in range(self.m):
                for j in range(i + 1, self.m):
                    if self.C[s, i, j] != 0:
                        out.append([i + 1, j + 1, s + 1, float(self.C[s, i, j])])
        return out

    def to_dict(self) -> dict:
        return {"m": self.m, "k": self.k, "brackets": self.brackets(), "name": self.name}

    def bracket(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """[u, w] in z for u, w in v (coordinate vectors)."""
        return np.einsum("sij,i,j->s", self.C, u, w)

    def product(self, a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]):
        """Group law (V, Z)(V', Z') = (V + V', Z + Z' + [V, V']/2)."""
        return a[0] + b[0], a[1] + b[1] + 0.5 * self.bracket(a[0], b[0])


def heisenberg(n: int = 1) -> GroupSpec:
    """H_n with [V_{2i-1}, V_{2i}] = Z."""
    if n < 1:
        raise ConfigurationError("heisenberg dimension must be >= 1")
    return GroupSpec.from_brackets(2 * n, 1, [[2 * i + 1, 2 * i + 2, 1, 1.0] for i in range(n)], f"heisenberg:{n}")


def planes(weights: Sequence[float]) -> GroupSpec:
    """One center, planes [V_{2i-1}, V_{2i}] = w_i Z."""
    return GroupSpec.from_brackets(2 * len(weights), 1,
                                   [[2 * i + 1, 2 * i + 2, 1, float(w)] for i, w in enumerate(weights)],
                                   "planes:" + ",".join(f"{w:g}" for w in weights))


def h1xr() -> GroupSpec:
    return GroupSpec.from_brackets(3, 1, [[1, 2, 1, 1.0]], "h1xr")


def h1xh1() -> GroupSpec:
    return GroupSpec.from_brackets(4, 2, [[1, 2, 1, 1.0], [3, 4, 2, 1.0]], "h1xh1")


def parse_group(spec) -> GroupSpec:
    """Preset string ('heisenberg:2', 'h1xr', 'h1xh1', 'planes:1,2'), JSON path, or dict."""
    if isinstance(spec, GroupSpec):
        return spec
    if isinstance(spec, dict):
        try:
            return GroupSpec.from_brackets(int(spec["m"]), int(spec["k"]), spec["brackets"], spec.get("name", "custom"))
        except KeyError as exc:
            raise ConfigurationError(f"group spec is missing {exc}") from exc
    text = str(spec)
    if text.endswith(".json"):
        return parse_group(json.loads(Path(text).read_text()))
    name, _, arg = text.partition(":")
    try:
        if name == "heisenberg":
            return heisenberg(int(arg or 1))
        if name == "planes":
            return planes([float(w) for w in arg.split(",")])
    except ValueError as exc:
        raise ConfigurationError(f"bad group parameter in {text!r}") from exc
    if name == "h1xr":
        return h1xr()
    if name == "h1xh1":
        return h1xh1()
    raise ConfigurationError(f"unknown group preset {text!r}")


def _nu(spec: GroupSpec, nu) -> np.ndarray:
    v = np.atleast_1d(np.asarray(nu, dtype=float))
    if v.size != spec.k:
        raise ConfigurationError(f"nu must have {spec.k} components")
    return v


def b_nu_matrix(spec: GroupSpec, nu) -> np.ndarray:
    """(S_nu)_ij = nu([V_i, V_j]) = sum_s nu_s c_ij^s."""
    return np.tensordot(_nu(spec, nu), spec.C, axes=(0, 0))


def _tol(S: np.ndarray) -> float:
    return RANK_TOL * float(np.linalg.norm(S, 2)) if S.size else 0.0


def _rank(M: np.ndarray, tol: float) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(sv > tol))


def jump_indices(spec: GroupSpec, nu) -> tuple[int, ...]:
    """1-based indices i where rank(S_nu[:i, :]) exceeds rank(S_nu[:i-1, :])."""
    S = b_nu_matrix(spec, nu)
    tol = _tol(S)
    if tol == 0.0:
        return ()
    out, prev = [], 0
    for i in range(1, spec.m + 1):
        r = _rank(S[:i, :], tol)
        if r > prev:
            out.append(i)
        prev = r
    return tuple(out)


@dataclass(frozen=True)
class MWResult:
    is_mw: bool
    witness: np.ndarray | None
    certain: bool
    condition: float | None
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"is_mw": self.is_mw, "witness": None if self.witness is None else self.witness.tolist(),
                "certain": self.certain, "condition": self.condition, "samples": self.samples,
                "seed": self.seed}


def mw_check(spec: GroupSpec, samples: int = 64, seed: int = 0) -> MWResult:
    """Is B_nu nondegenerate for some nu? Random probing with the odd-m parity shortcut."""
    if samples < 16:
        raise ConfigurationError("mw_check needs at least 16 samples")
    if spec.m % 2 == 1:
        return MWResult(False, None, True, None, 0, seed)
    rng = np.random.default_rng(seed)
    best, best_cond = None, math.inf
    for _ in range(samples):
        nu = rng.standard_normal(spec.k)
        sv = np.linalg.svd(b_nu_matrix(spec, nu), compute_uv=False)
        if sv[0] == 0:
            continue
        cond = sv[0] / sv[-1] if sv[-1] > 0 else math.inf
        if cond < best_cond:
            best, best_cond = nu, cond
    if best is not None and best_cond < 1.0 / RANK_TOL:
        return MWResult(True, best, False, float(best_cond), samples, seed)
    return MWResult(False, None, False, None, samples, seed)


@dataclass(frozen=True, eq=False)
class NuData:
    nu: np.ndarray
    S: np.ndarray
    rank: int
    jumps: tuple[int, ...]
    d: np.ndarray
    pf: float
    basis: np.ndarray | None = None
    flags: dict = field(default_factory=dict)

    @property
    def nondegenerate(self) -> bool:
        return self.rank == self.S.shape[0]

    def to_dict(self) -> dict:
        return {"nu": self.nu.tolist(), "rank": self.rank, "jumps": list(self.jumps), "d": self.d.tolist(),
                "pf": self.pf, "nondegenerate": self.nondegenerate, **self.flags}


def _schur_planes(S: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray, list[tuple[int, int]]]:
    """Real Schur form of antisymmetric S: Z, T and the 2x2 block positions."""
    T, Z = linalg.schur(S, output="real")
    blocks = []
    i = 0
    n = S.shape[0]
    while i < n - 1:
        if abs(T[i + 1, i]) > tol:
            blocks.append((i, i + 1))
            i += 2
        else:
            i += 1
    return Z, T, blocks


def symplectic_spectrum(S: np.ndarray, with_basis: bool = False):
    """Weights d_j > 0 (descending) with S ~ blocks d_j [[0, 1], [-1, 0]]; optionally the Schur basis."""
    S = np.asarray(S, dtype=float)
    tol = _tol(S)
    if tol == 0.0:
        return (np.zeros(0), np.eye(S.shape[0])) if with_basis else np.zeros(0)
    Z, T, blocks = _schur_planes(S, tol)
    d = np.array([math.sqrt(abs(T[i, j] * T[j, i])) for i, j in blocks])
    order = np.argsort(-d, kind="stable")
    d = d[order]
    if not with_basis:
        return d
    cols = []
    for b in order:
        i, j = blocks[b]
        x, y = Z[:, i], Z[:, j]
        if T[i, j] < 0:
            x, y = y, x
        cols += [x, y]
    used = {c for blk in blocks for c in blk}
    cols += [Z[:, c] for c in range(S.shape[0]) if c not in used]
    return d, np.stack(cols, axis=1)


def pfaffian(spec: GroupSpec, nu) -> float:
    """|Pf(nu)| = sqrt(det) of S_nu restricted to the jump indices."""
    S = b_nu_matrix(spec, nu)
    P = [j - 1 for j in jump_indices(spec, nu)]
    if not P:
        return 0.0
    det = float(np.linalg.det(S[np.ix_(P, P)]))
    if det < -1e-12 * max(1.0, float(np.max(np.abs(S))) ** len(P)):
        raise LabError(f"negative determinant {det:.3g} on the jump block")
    return math.sqrt(max(det, 0.0))


def nu_data(spec: GroupSpec, nu, with_basis: bool = False) -> NuData:
    nu = _nu(spec, nu)
    S = b_nu_matrix(spec, nu)
    tol = _tol(S)
    rank = _rank(S, tol) if tol > 0 else 0
    res = symplectic_spectrum(S, with_basis)
    d, basis = res if with_basis else (res, None)
    gaps = np.abs(np.diff(d)) if d.size > 1 else np.zeros(0)
    flags = {"collision": bool(np.any(gaps <= COLLISION_TOL * max(1.0, float(d.max()) if d.size else 1.0)))}
    return NuData(nu, S, rank, jump_indices(spec, nu), d, pfaffian(spec, nu), basis, flags)


# functions on the group ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupFunction:
    """Samples over the v-coordinates followed by the z-coordinates."""

    spec: GroupSpec
    f: SampledFunctionND

    def __post_init__(self) -> None:
        if self.f.ndim != self.spec.m + self.spec.k:
            raise ConfigurationError(f"need {self.spec.m + self.spec.k} axes, got {self.f.ndim}")

    @property
    def v_axes(self) -> tuple[Grid1D, ...]:
        return self.f.axes[:self.spec.m]

    @property
    def z_axes(self) -> tuple[Grid1D, ...]:
        return self.f.axes[self.spec.m:]

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.f.values) ** 2) * self.f.cell)


def _v_cell(F: GroupFunction) -> float:
    return float(np.prod([g.step for g in F.v_axes]))


def central_ft(F: GroupFunction, nu) -> SampledFunctionND:
    """f^nu(v) = int e^{-2 pi i nu.z} f(v, z) dz as a Riemann sum evaluated exactly at nu.

    On dual nodes this coincides with the FFT; between nodes it is the
    trigonometric interpolant of the DFT.
    """
    nu = _nu(F.spec, nu)
    vals = F.f.values
    for s in range(F.spec.k - 1, -1, -1):
        g = F.z_axes[s]
        if abs(nu[s]) > g.nyquist:
            raise ConfigurationError(f"|nu_{s + 1}| = {abs(nu[s]):.3g} exceeds the z-grid band {g.nyquist:.3g}")
        vals = vals @ (g.step * _unit_phase(-nu[s] * g.points()))
    return SampledFunctionND(F.v_axes, vals, None, {"nu": nu.tolist()})


def hs_norm(F: GroupFunction, nu) -> float:
    """||pi_nu(f)||_HS from |Pf(nu)| ||pi_nu(f)||^2 = int_v |f^nu|^2."""
    pf = pfaffian(F.spec, nu)
    if pf <= RANK_TOL:
        raise PreconditionError(f"nu = {np.atleast_1d(nu).tolist()} is degenerate (|Pf| = {pf:.3g})")
    fn = central_ft(F, nu)
    return math.sqrt(float(np.sum(np.abs(fn.values) ** 2)) * _v_cell(F) / pf)


def _check_h1(spec: GroupSpec) -> None:
    if spec.m != 2 or spec.k != 1 or abs(spec.C[0, 0, 1]) == 0:
        raise ConfigurationError("the explicit kernel is implemented for H_1 only")


def heisenberg_rep_kernel(F: GroupFunction, nu: float, grid: Grid1D | None = None,
                          cut: float = 1e-16) -> tuple[Grid1D, np.ndarray]:
    """Kernel K(xi, eta) of pi_nu(f) on L^2(R) for H_1.

    With coordinates (x, y) in the symplectic basis (swapped when
    nu c_12 < 0) and d = |nu c_12|, K(xi, eta) = F_x f^nu(d (xi + eta)/2, xi - eta).
    The kernel grid uses the y-step so that xi - eta falls on y-nodes, and K
    is zero where |a| exceeds the x-Nyquist (the sampled x-spectrum is
    band-limited there; the Riemann sum would alias).
    """
    _check_h1(F.spec)
    nu = float(np.atleast_1d(nu)[0])
    c = float(F.spec.C[0, 0, 1])
    d = abs(nu * c)
    if d == 0:
        raise PreconditionError("nu = 0 is degenerate")
    fn = central_ft(F, nu).values
    gx, gy = F.v_axes
    if nu * c < 0:
        fn = fn.T
        gx, gy = gy, gx
    hy = gy.step
    if grid is None:
        spec_x = np.abs(np.fft.fft(fn, axis=0)).max(axis=1)
        top = spec_x.max()
        band = gx.nyquist
        if top > 0:
            freqs = np.abs(np.fft.fftfreq(gx.count, gx.step))
            band = float(freqs[spec_x > cut * top].max()) if np.any(spec_x > cut * top) else 0.0
        half = 0.5 * max(abs(gy.origin), abs(gy.end)) + band / d + 4 * hy
        count = next_power_of_two(int(math.ceil(2 * half / hy)))
        grid = Grid1D(-(count // 2) * hy, hy, count)
    elif not math.isclose(grid.step, hy, rel_tol=1e-12):
        raise ConfigurationError("kernel grid step must equal the y-step")
    xi = grid.points()
    K = np.zeros((grid.count, grid.count), dtype=complex)
    yv = gy.points()
    for dk in range(-(grid.count - 1), grid.count):
        b = dk * hy
        jy = int(round((b - gy.origin) / hy))
        if jy < 0 or jy >= gy.count or abs(yv[jy] - b) > 1e-9 * hy:
            continue
        i = np.arange(max(0, dk), min(grid.count, grid.count + dk))
        j = i - dk
        a = d * (xi[i] + xi[j]) / 2
        keep = np.abs(a) < gx.nyquist
        K[i[keep], j[keep]] = fourier_1d_at(_row(gx, fn[:, jy]), a[keep])
    return grid, K


def _row(g: Grid1D, vals: np.ndarray) -> SampledFunction1D:
    return SampledFunction1D(g, vals)


def hs_two_route(F: GroupFunction, nu: float) -> dict:
    """Kernel Frobenius route vs central-transform route for |Pf| ||pi_nu(f)||^2."""
    grid, K = heisenberg_rep_kernel(F, nu)
    pf = pfaffian(F.spec, nu)
    kernel = pf * float(np.sum(np.abs(K) ** 2)) * grid.step ** 2
    central = float(np.sum(np.abs(central_ft(F, nu).values) ** 2)) * _v_cell(F)
    return {"nu": nu, "kernel_route": kernel, "central_route": central,
            "rel_err": abs(kernel - central) / central if central else abs(kernel)}


def plancherel_check(F: GroupFunction, lo: float = -8.0, hi: float = 8.0, nodes: int = 256) -> dict:
    """int |Pf| ||pi_nu(f)||^2 dnu over [lo, hi]^k versus ||f||^2, with the truncation tail.

    The integrand is int_v |f^nu|^2 by the Hilbert-Schmidt identity. The tail
    is the discrete Plancherel mass of the z-spectrum outside the window, with
    half weight on nodes at the window edge.
    """
    k = F.spec.k
    per = max(2, int(round(nodes ** (1.0 / k))))
    panels = max(1, per // 16)
    x, w = composite_gl(lo, hi, panels, order=max(2, per // panels))
    total = 0.0
    for idx in np.ndindex(*([x.size] * k)):
        nu = np.array([x[i] for i in idx])
        wt = float(np.prod([w[i] for i in idx]))
        total += wt * float(np.sum(np.abs(central_ft(F, nu).values) ** 2)) * _v_cell(F)
    norm2 = F.norm2()
    spec = np.fft.fftn(F.f.values, axes=tuple(range(F.spec.m, F.spec.m + k)))
    inside = np.ones(spec.shape)
    for s, g in enumerate(F.z_axes):
        f_s = np.fft.fftfreq(g.count, g.step)
        w_s = np.where((f_s > lo) & (f_s < hi), 1.0, 0.0)
        w_s[np.isclose(f_s, lo) | np.isclose(f_s, hi)] = 0.5
        shape = [1] * spec.ndim
        shape[F.spec.m + s] = g.count
        inside = inside * w_s.reshape(shape)
    zsize = int(np.prod([g.count for g in F.z_axes]))
    tail = float(np.sum((1.0 - inside) * np.abs(spec) ** 2)) * F.f.cell / zsize
    residual = norm2 - total
    return {"quadrature": total, "norm2": norm2, "rel_err": abs(residual) / norm2 if norm2 else 0.0,
            "tail": tail, "tail_fraction": tail / residual if residual else None,
            "nodes": int(x.size) ** k, "window": [lo, hi]}


def separable_construct(spec: GroupSpec, h: SampledFunctionND, g: SampledFunctionND) -> GroupFunction:
    """f(v, z) = h(v) g(z)."""
    if h.ndim != spec.m or g.ndim != spec.k:
        raise ConfigurationError(f"h needs {spec.m} axes and g needs {spec.k}")
    for part, name in ((h, "h"), (g, "g")):
        if part.support_hint is not None:
            for ax, (lo, hi) in zip(part.axes, part.support_hint):
                if lo < ax.origin or hi > ax.end:
                    raise PreconditionError(f"{name} support {part.support_hint} exceeds its grid")
    vals = np.multiply.outer(h.values, g.values)
    hint = None
    if h.support_hint is not None and g.support_hint is not None:
        hint = tuple(h.support_hint) + tuple(g.support_hint)
    return GroupFunction(spec, SampledFunctionND(h.axes + g.axes, vals, hint,
                                                 {"separable": True}))


def separable_hs_identity(F: GroupFunction, h: SampledFunctionND, g: SampledFunctionND, nu) -> dict:
    """||pi_nu(f)||_HS against |ghat(nu)| ||h||_2 / |Pf(nu)|^(1/2)."""
    lhs = hs_norm(F, nu)
    nu = _nu(F.spec, nu)
    vals = g.values
    for s in range(F.spec.k - 1, -1, -1):
        ax = g.axes[s]
        vals = vals @ (ax.step * _unit_phase(-nu[s] * ax.points()))
    ghat = complex(vals)
    rhs = abs(ghat) * math.sqrt(float(np.sum(np.abs(h.values) ** 2)) * h.cell) / math.sqrt(pfaffian(F.spec, nu))
    return {"lhs": lhs, "rhs": rhs, "rel_err": abs(lhs - rhs) / rhs if rhs else abs(lhs)}


def phi_reduce(F: GroupFunction, phi: SampledFunctionND) -> SampledFunctionND:
    """F_phi(z) = int_v f(v, z) conj(phi(v)) dv."""
    if phi.ndim != F.spec.m or phi.values.shape != tuple(g.count for g in F.v_axes):
        raise ConfigurationError("phi must be sampled on the v-grid of f")
    for a, b in zip(phi.axes, F.v_axes):
        if not (math.isclose(a.origin, b.origin, abs_tol=1e-12) and math.isclose(a.step, b.step)):
            raise ConfigurationError("phi and f use different v-grids")
    m = F.spec.m
    vals = np.tensordot(np.conj(phi.values), F.f.values, axes=(tuple(range(m)), tuple(range(m)))) * _v_cell(F)
    return SampledFunctionND(F.z_axes, vals)


# matrix functions for the sublaplacian chirp ---------------------------------------------

def _x_cot(d: np.ndarray, t: float) -> np.ndarray:
    """d cot(t d / 2), with the series 2/t (1 - (td)^2/12 - (td)^4/720) for small |td|."""
    d = np.asarray(d, dtype=float)
    u = t * d
    small = np.abs(u) < SERIES_SWITCH
    out = np.empty_like(d)
    us = u[small]
    out[small] = (2.0 / t) * (1.0 - us ** 2 / 12.0 - us ** 4 / 720.0)
    dl = d[~small]
    out[~small] = dl / np.tan(t * dl / 2.0)
    return out


@dataclass(frozen=True, eq=False)
class CothMap:
    t: float
    Q: np.ndarray
    M: np.ndarray
    planes: np.ndarray

    def chirp(self, v: np.ndarray) -> np.ndarray:
        """exp(i pi/2 <v, Q v>) for v with coordinates on the last axis."""
        v = np.asarray(v, dtype=float)
        form = np.einsum("...i,ij,...j->...", v, self.Q, v)
        return _unit_phase(0.25 * form)

    def v_prime(self, v: np.ndarray) -> np.ndarray:
        return np.asarray(v, dtype=float) @ self.M.T


def coth_map(data: NuData | np.ndarray, t: float) -> CothMap:
    """Q = S coth(t S/2) and M = (S/2)(coth(t S/2) + I) through the real Schur planes.

    On a plane with weight d the even function x coth(t x/2) of S is
    d cot(t d/2) times the identity; on the kernel of S it is 2/t.
    """
    if t == 0:
        raise ConfigurationError("t must be nonzero")
    S = data.S if isinstance(data, NuData) else np.asarray(data, dtype=float)
    n = S.shape[0]
    tol = _tol(S)
    diag = np.full(n, 2.0 / t)
    Z = np.eye(n)
    ws = np.zeros(0)
    if tol > 0:
        Z, T, blocks = _schur_planes(S, tol)
        ws = np.array([math.sqrt(abs(T[i, j] * T[j, i])) for i, j in blocks])
        if np.any(np.abs(np.sin(t * ws / 2.0)) < 1e-12):
            raise PreconditionError(f"t d / 2 hits a pole of cot for weights {ws.tolist()}")
        vals = _x_cot(ws, t)
        for (i, j), v in zip(blocks, vals):
            diag[i] = diag[j] = v
    Q = (Z * diag) @ Z.T
    Q = 0.5 * (Q + Q.T)
    M = 0.5 * Q + 0.5 * S
    return CothMap(t, Q, M, ws)


def fitted_order(scales: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(scale)."""
    x = np.log(np.asarray(scales, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def coth_asymptotics(spec: GroupSpec, t: float = 1.0, nus: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4),
                     direction=None) -> dict:
    """Orders of ||Q - (2/t) I|| and ||M^{-1} - t I|| as nu -> 0 along a direction."""
    e = np.ones(spec.k) if direction is None else np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    q_err, m_err = [], []
    for s in nus:
        cm = coth_map(nu_data(spec, s * e), t)
        n = spec.m
        q_err.append(float(np.linalg.norm(cm.Q - (2.0 / t) * np.eye(n), 2)))
        m_err.append(float(np.linalg.norm(np.linalg.inv(cm.M) - t * np.eye(n), 2)))
    return {"nus": list(nus), "q_err": q_err, "m_inv_err": m_err,
            "q_order": fitted_order(nus, q_err), "m_order": fitted_order(nus, m_err)}


def save_gfn(F: GroupFunction, path: str | Path) -> Path:
    """A .sfn file whose metadata carries the group spec."""
    f = SampledFunctionND(F.f.axes, F.f.values, F.f.support_hint, {**F.f.meta, "group": F.spec.to_dict()})
    return save_sfn(f, path)


def load_gfn(path: str | Path, spec=None) -> GroupFunction:
    f = load_sfn(path)
    if not isinstance(f, SampledFunctionND):
        raise ConfigurationError("a group function needs at least two axes")
    group = spec if spec is not None else f.meta.get("group")
    if group is None:
        raise ConfigurationError(f"{path} carries no group spec; pass one explicitly")
    return GroupFunction(parse_group(group), f)

"""Radial weight profiles and the three integrability dichotomies.

A weight is a nonnegative profile of a single radius r >= 0. Decay weights
theta enter bounds of the form exp(-theta(|y|) |y|); growth weights psi enter
exp(-psi(|y|)). Each preset carries analytic tail envelopes so that
convergence verdicts rest on a bound rather than on extrapolation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np
from scipy import integrate, special

from .errors import ConfigurationError, PreconditionError

DECREASING = "decreasing"
NONDECREASING = "nondecreasing"
NONE = "none"

TailFn = Callable[[float], float]


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n."""
    return 2.0 * math.pi ** (n / 2) / special.gamma(n / 2)


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Radial weight with metadata and optional analytic tail envelopes.

    ``ingham_tail(T)`` bounds the integral of w(t)/t over (T, inf) and
    ``pw_tail(T)`` bounds the integral of w(t)/t^2 over (T, inf); both may be
    ``inf`` when the integral diverges and ``None`` when no bound is known.
    """

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    monotonicity: str = NONE
    decays_to_zero: bool = False
    kind: str = "symbolic"
    ingham_tail: TailFn | None = None
    pw_tail: TailFn | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.monotonicity not in (DECREASING, NONDECREASING, NONE):
            raise ConfigurationError(f"unknown monotonicity {self.monotonicity!r}")
        probe = np.concatenate([[0.0], np.geomspace(1e-3, 1e12, 301)])
        vals = np.asarray(self(probe), dtype=float)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ConfigurationError(f"weight {self.name} is negative or non-finite")
        if self.monotonicity == DECREASING and np.any(np.diff(vals) > 1e-12 * (1 + vals[:-1])):
            raise PreconditionError(f"weight {self.name} is declared decreasing but increases")
        if self.monotonicity == NONDECREASING and np.any(np.diff(vals) < -1e-12 * (1 + vals[:-1])):
            raise PreconditionError(f"weight {self.name} is declared nondecreasing but decreases")

    def __call__(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        return np.asarray(self.evaluator(r), dtype=float)

    def radial(self, *coords) -> np.ndarray:
        """Evaluate at |y| for coordinate arrays y_1..y_n."""
        return self(np.sqrt(sum(np.asarray(c, dtype=float) ** 2 for c in coords)))

    def scaled(self, c: float) -> "WeightFunction":
        if not c > 0:
            raise ConfigurationError("scale factor must be positive")
        ev = self.evaluator
        it, pt = self.ingham_tail, self.pw_tail
        return WeightFunction(
            f"{c:g}*{self.name}", lambda r: c * ev(r), self.monotonicity, self.decays_to_zero,
            self.kind, None if it is None else (lambda T: c * it(T)),
            None if pt is None else (lambda T: c * pt(T)), dict(self.params, scale=c))

    def describe(self) -> dict:
        return {"name": self.name, "kind": self.kind, "monotonicity": self.monotonicity,
                "decays_to_zero": self.decays_to_zero, "params": dict(self.params)}


# presets ------------------------------------------------------------------------------

def _inf(_T: float) -> float:
    return math.inf


def _zero(_T: float) -> float:
    return 0.0


def log_pow(alpha: float) -> WeightFunction:
    """(log(e + r))^(-alpha)."""
    def ev(r):
        return np.log(np.e + r) ** (-alpha)
    tail = (lambda T: math.log(T) ** (1 - alpha) / (alpha - 1)) if alpha > 1 else _inf
    return WeightFunction(f"log_pow:{alpha:g}", ev, DECREASING if alpha > 0 else NONE, alpha > 0,
                          ingham_tail=tail, pw_tail=lambda T: float(ev(T)) / T,
                          params={"alpha": alpha})


def loglog_pow(beta: float) -> WeightFunction:
    """1/(L (log L)^beta) with L = log(e^e + r)."""
    def ev(r):
        L = np.log(np.exp(np.e) + r)
        return 1.0 / (L * np.log(L) ** beta)

    def tail(T):
        if beta <= 1:
            return math.inf
        return math.log(math.log(T)) ** (1 - beta) / (beta - 1) if T > math.e ** math.e else math.inf
    return WeightFunction(f"loglog_pow:{beta:g}", ev, DECREASING, True, ingham_tail=tail,
                          pw_tail=lambda T: float(ev(T)) / T, params={"beta": beta})


def inv_pow(alpha: float) -> WeightFunction:
    """(1 + r)^(-alpha)."""
    if not alpha > 0:
        raise ConfigurationError("inv_pow needs alpha > 0")
    return WeightFunction(f"inv_pow:{alpha:g}", lambda r: (1.0 + r) ** (-alpha), DECREASING, True,
                          ingham_tail=lambda T: T ** (-alpha) / alpha,
                          pw_tail=lambda T: (1.0 + T) ** (-alpha) / T, params={"alpha": alpha})


def const(c: float) -> WeightFunction:
    if c < 0:
        raise ConfigurationError("constant weight must be nonnegative")
    return WeightFunction(f"const:{c:g}", lambda r: np.full_like(r, c, dtype=float), DECREASING,
                          c == 0, ingham_tail=_inf if c > 0 else _zero,
                          pw_tail=lambda T: c / T, params={"c": c})


def theta1() -> WeightFunction:
    """The auxiliary decay weight 4/sqrt(r + 1)."""
    return WeightFunction("theta1", lambda r: 4.0 / np.sqrt(r + 1.0), DECREASING, True,
                          ingham_tail=lambda T: 8.0 / math.sqrt(T),
                          pw_tail=lambda T: 4.0 / (math.sqrt(T + 1.0) * T))


def zero() -> WeightFunction:
    return WeightFunction("zero", lambda r: np.zeros_like(r, dtype=float), DECREASING, True,
                          ingham_tail=_zero, pw_tail=_zero)


def power(p: float) -> WeightFunction:
    """r^p for p >= 0 (growth weight)."""
    if p < 0:
        raise ConfigurationError("power weight needs p >= 0; use inv_pow for decay")
    tail = (lambda T: T ** (p - 1) / (1 - p)) if p < 1 else _inf
    return WeightFunction(f"power:{p:g}", lambda r: r ** p, NONDECREASING, False,
                          ingham_tail=_inf, pw_tail=tail, params={"p": p})


def linear() -> WeightFunction:
    w = power(1.0)
    return WeightFunction("linear", w.evaluator, NONDECREASING, False, ingham_tail=_inf, pw_tail=_inf)


def half_log() -> WeightFunction:
    """(1/2) log(1 + r^2)."""
    c = 0.5 * math.log(2.0)
    return WeightFunction("half_log", lambda r: 0.5 * np.log1p(r * r), NONDECREASING, False,
                          ingham_tail=_inf, pw_tail=lambda T: (c + math.log(T) + 1.0) / T)


def _sqrt() -> WeightFunction:
    w = power(0.5)
    return WeightFunction("sqrt", w.evaluator, NONDECREASING, False, ingham_tail=_inf,
                          pw_tail=w.pw_tail, params={"p": 0.5})


def tabulated(path: str | Path, tail: str = "const") -> WeightFunction:
    """Piecewise-linear weight from CSV rows (r, value), extended past the last row.

    ``tail="const"`` holds the last value; ``tail="power_fit"`` extends by
    c r^p fitted in log-log coordinates over the last fifth of the table.
    """
    rows = []
    with Path(path).open() as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                continue
    if len(rows) < 2:
        raise ConfigurationError(f"{path}: need at least two (r, value) rows")
    rs, vs = map(np.asarray, zip(*sorted(rows)))
    return tabulated_arrays(rs, vs, tail, name=f"tabulated:{Path(path).name}")


def tabulated_arrays(rs, vs, tail: str = "const", name: str = "tabulated") -> WeightFunction:
    rs = np.asarray(rs, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if np.any(vs < 0):
        raise ConfigurationError("tabulated weight has negative values")
    r_last, v_last = float(rs[-1]), float(vs[-1])
    if tail == "const":
        p, c = 0.0, v_last
    elif tail == "power_fit":
        k = max(2, len(rs) // 5)
        sel = (rs[-k:] > 0) & (vs[-k:] > 0)
        if sel.sum() < 2:
            raise ConfigurationError("power_fit tail needs positive trailing samples")
        p, logc = np.polyfit(np.log(rs[-k:][sel]), np.log(vs[-k:][sel]), 1)
        p = float(p)
        c = v_last / r_last ** p
    else:
        raise ConfigurationError(f"unknown tail kind {tail!r}")

    def ev(r):
        r = np.asarray(r, dtype=float)
        inner = np.interp(r, rs, vs)
        return np.where(r > r_last, c * np.maximum(r, r_last) ** p, inner)

    def interior(T: float, power_shift: int) -> float:
        if T >= r_last:
            return 0.0
        return integrate.quad(lambda t: float(ev(t)) / t ** power_shift, T, r_last, limit=200)[0]

    def ingham_tail(T):
        base = interior(T, 1)
        if c == 0:
            return base
        if p >= 0:
            return math.inf
        return base + c * max(T, r_last) ** p / (-p)

    def pw_tail(T):
        base = interior(T, 2)
        if c == 0:
            return base
        if p >= 1:
            return math.inf
        return base + c * max(T, r_last) ** (p - 1) / (1 - p)

    dif = np.diff(np.concatenate([vs, [float(ev(2 * r_last + 1))]]))
    mono = DECREASING if np.all(dif <= 0) else NONDECREASING if np.all(dif >= 0) else NONE
    return WeightFunction(name, ev, mono, tail == "power_fit" and p < 0, "tabulated",
                          ingham_tail, pw_tail, {"tail": tail, "tail_power": p, "tail_coeff": c})


PRESETS: dict[str, Callable[..., WeightFunction]] = {
    "log_pow": log_pow, "loglog_pow": loglog_pow, "inv_pow": inv_pow, "const": const,
    "theta1": theta1, "zero": zero, "power": power, "sqrt": _sqrt, "linear": linear,
    "half_log": half_log, "tabulated": tabulated,
}
_PARAM_KEYS = {"log_pow": "alpha", "loglog_pow": "beta", "inv_pow": "alpha", "const": "c",
               "power": "p", "tabulated": "path"}


def parse_weight(spec: str | Mapping | WeightFunction) -> WeightFunction:
    """Build a weight from ``"log_pow:2"``, ``{"kind": "log_pow", "alpha": 2}`` or a weight."""
    if isinstance(spec, WeightFunction):
        return spec
    if isinstance(spec, Mapping):
        kind = spec.get("kind")
        if kind not in PRESETS:
            raise ConfigurationError(f"unknown weight kind {kind!r}")
        kwargs = {k: v for k, v in spec.items() if k not in ("kind", "scale")}
        w = PRESETS[kind](**kwargs)
        return w.scaled(spec["scale"]) if "scale" in spec else w
    if not isinstance(spec, str):
        raise ConfigurationError(f"cannot parse weight from {spec!r}")
    name, _, rest = spec.partition(":")
    if name not in PRESETS:
        raise ConfigurationError(f"unknown weight preset {name!r}")
    if not rest:
        try:
            return PRESETS[name]()
        except TypeError as exc:
            raise ConfigurationError(f"weight preset {name!r} needs a parameter") from exc
    if name == "tabulated":
        path, _, tail = rest.rpartition(":") if rest.endswith((":const", ":power_fit")) else (rest, "", "const")
        return tabulated(path, tail or "const")
    try:
        val = float(rest)
    except ValueError as exc:
        raise ConfigurationError(f"bad weight parameter in {spec!r}") from exc
    return PRESETS[name](val)


# classification ---------------------------------------------------------------------

CONVERGENT = "convergent"
DIVERGENT = "divergent"


@dataclass(frozen=True)
class Classification:
    """Verdict on an integral or series, with the numbers behind it."""

    verdict: str
    value: float
    error: float
    growth_log: float
    growth_loglog: float
    evidence: str
    details: dict = field(default_factory=dict)

    @property
    def convergent(self) -> bool:
        return self.verdict == CONVERGENT

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "value": self.value, "error": self.error,
                "growth_log": self.growth_log, "growth_loglog": self.growth_loglog,
                "evidence": self.evidence, "details": self.details}


def _decade_partials(g: Callable[[float], float], t_max: float, tol: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Partial integrals of g(e^u) du over decades of t in [1, t_max]."""
    n_dec = int(round(math.log10(t_max)))
    if n_dec < 3:
        raise ConfigurationError("T_max must be at least 1e3")
    ln10 = math.log(10.0)
    ts = 10.0 ** np.arange(n_dec + 1)
    parts = [0.0]
    err = 0.0
    for k in range(n_dec):
        v, e = integrate.quad(lambda u: g(math.exp(u)), k * ln10, (k + 1) * ln10,
                              epsabs=tol, epsrel=1e-12, limit=200)[:2]
        parts.append(parts[-1] + v)
        err += e
    return ts, np.asarray(parts), err


def _growth(ts: np.ndarray, parts: np.ndarray) -> tuple[float, float]:
    """Slopes of I(T) against log T and log log T over the top two decades."""
    t0, t1 = ts[-3], ts[-1]
    d = parts[-1] - parts[-3]
    return (float(d / (math.log(t1) - math.log(t0))),
            float(d / (math.log(math.log(t1)) - math.log(math.log(t0)))))


def _fitted_log_tail(w: WeightFunction, T: float, shift: int) -> tuple[float, str]:
    """Monotone envelope fitted as w ~ c (log t)^(-p) near T, for weights without analytic tails."""
    if shift == 2:
        # w(t)/t^2 with w nonincreasing is bounded by w(T)/T; nondecreasing needs a power fit
        if w.monotonicity == DECREASING:
            return float(w(T)) / T, "monotone bound w(T)/T"
        ts = np.geomspace(T / 100, T, 5)
        vals = w(ts)
        if np.any(vals <= 0):
            return 0.0, "weight vanishes near T_max"
        p = float(np.polyfit(np.log(ts), np.log(vals), 1)[0])
        if p >= 0.9:
            return math.inf, f"fitted power growth r^{p:.3g} leaves no integrable tail"
        return float(w(T)) * T ** -1 / (1 - p), f"fitted power tail r^{p:.3g}"
    if w.monotonicity != DECREASING:
        return math.inf, "no decreasing envelope"
    ts = np.geomspace(T / 100, T, 5)
    vals = w(ts)
    if np.all(vals == 0):
        return 0.0, "weight vanishes near T_max"
    if np.any(vals <= 0):
        return math.inf, "weight not positive near T_max"
    p = -float(np.polyfit(np.log(np.log(ts)), np.log(vals), 1)[0])
    if p <= 1.1:
        return math.inf, f"fitted log-power decay (log t)^-{p:.3g} is not integrable against dt/t"
    return float(w(T)) * math.log(T) / (p - 1), f"fitted log-power tail (log t)^-{p:.3g}"


def ingham_integral_test(theta: WeightFunction, n: int = 1, t_max: float = 1e12,
                         tol: float = 1e-12) -> Classification:
    """Classify the integral of theta(|y|)/|y|^n over |y| >= 1 in R^n.

    The radial reduction gives |S^{n-1}| times the one-dimensional integral of
    theta(t)/t over (1, inf). Convergence is declared only when a tail envelope
    closes; otherwise the integral is reported divergent with the measured
    growth of the partial integrals.
    """
    if theta.monotonicity != DECREASING:
        raise PreconditionError(f"{theta.name} is not decreasing")
    if n < 1:
        raise ConfigurationError("dimension must be >= 1")
    area = sphere_area(n) if n > 1 else 1.0
    ts, parts, qerr = _decade_partials(lambda t: float(theta(t)), t_max, tol)
    g_log, g_loglog = _growth(ts, parts)
    if theta.ingham_tail is not None:
        tail, how = theta.ingham_tail(t_max), "analytic tail envelope"
    else:
        tail, how = _fitted_log_tail(theta, t_max, 1)
    value = area * float(parts[-1])
    details = {"dimension": n, "sphere_area": area, "t_max": t_max,
               "partials": [[float(t), area * float(p)] for t, p in zip(ts, parts)],
               "tail_method": how}
    if math.isfinite(tail):
        return Classification(CONVERGENT, value, area * (tail + qerr), area * g_log, area * g_loglog,
                              f"I(T_max)={value:.6g}, tail <= {area * tail:.3g} ({how})", details)
    return Classification(DIVERGENT, value, math.inf, area * g_log, area * g_loglog,
                          f"tail cannot close ({how}); dI/dlogT={area * g_log:.3g}, "
                          f"dI/dloglogT={area * g_loglog:.3g} over the top two decades", details)


def pw_integral_test(psi: WeightFunction, n: int = 1, t_max: float = 1e12,
                     tol: float = 1e-12) -> Classification:
    """Classify the integral of psi(|x|)/(1+|x|)^(n+1) over R^n.

    For n = 1 this is the integral of psi(t)/(1+t^2) over the real line, computed
    as twice the half-line integral. The tail beyond T_max is bounded by the
    integral of psi(r)/r^2, which dominates the integrand in every dimension.
    """
    if n < 1:
        raise ConfigurationError("dimension must be >= 1")
    if n == 1:
        area = 2.0

        def kern(r: float) -> float:
            return 1.0 / (1.0 + r * r)
    else:
        area = sphere_area(n)

        def kern(r: float) -> float:
            return r ** (n - 1) / (1.0 + r) ** (n + 1)
    head, herr = integrate.quad(lambda r: float(psi(r)) * kern(r), 0.0, 1.0, epsabs=tol, limit=200)[:2]
    ts, parts, qerr = _decade_partials(lambda t: float(psi(t)) * kern(t) * t, t_max, tol)
    parts = parts + head
    g_log, g_loglog = _growth(ts, parts)
    if psi.pw_tail is not None:
        tail, how = psi.pw_tail(t_max), "analytic tail envelope"
    else:
        tail, how = _fitted_log_tail(psi, t_max, 2)
    value = area * float(parts[-1])
    details = {"dimension": n, "angular_factor": area, "t_max": t_max,
               "partials": [[float(t), area * float(p)] for t, p in zip(ts, parts)],
               "tail_method": how}
    if math.isfinite(tail):
        return Classification(CONVERGENT, value, area * (tail + qerr + herr), area * g_log,
                              area * g_loglog, f"I(T_max)={value:.6g}, tail <= {area * tail:.3g} ({how})",
                              details)
    return Classification(DIVERGENT, value, math.inf, area * g_log, area * g_loglog,
                          f"tail cannot close ({how}); dI/dlogT={area * g_log:.3g} over the top two decades",
                          details)


def carleman_divergence(theta: WeightFunction, k_max: int = 10**6,
                        check_integral: bool = True) -> Classification:
    """Classify the series sum_k theta(k^4)/k.

    For decreasing theta the remainder after K is at most the integral of
    theta(u^4)/u over (K, inf), which equals one quarter of the integral of
    theta(t)/t over (K^4, inf). The verdict is cross-checked against
    ``ingham_integral_test``; a mismatch is recorded as an internal
    inconsistency in ``details``.
    """
    if k_max < 16:
        raise ConfigurationError("K_max must be at least 16")
    if theta.monotonicity != DECREASING:
        raise PreconditionError(f"{theta.name} is not decreasing")
    k = np.arange(1, int(k_max) + 1, dtype=float)
    terms = theta(k ** 4) / k
    partial = np.cumsum(terms)
    total = float(partial[-1])
    checkpoints = [K for K in (10, 100, 1000, 10**4, 10**5, 10**6, 10**7) if K <= k_max]
    details: dict = {"k_max": int(k_max),
                     "partials": [[K, float(partial[K - 1])] for K in checkpoints]}
    K0 = checkpoints[-3] if len(checkpoints) >= 3 else 16
    d = total - float(partial[K0 - 1])
    g_log = d / (math.log(k_max) - math.log(K0))
    g_loglog = d / (math.log(math.log(k_max)) - math.log(math.log(K0)))
    if theta.ingham_tail is not None:
        tail = 0.25 * theta.ingham_tail(float(k_max) ** 4)
        how = "integral comparison with the analytic envelope"
    else:
        t4, h4 = _fitted_log_tail(theta, float(k_max) ** 4, 1)
        tail, how = 0.25 * t4, f"integral comparison ({h4})"
    verdict = CONVERGENT if math.isfinite(tail) else DIVERGENT
    if check_integral:
        ref = ingham_integral_test(theta)
        details["integral_test_verdict"] = ref.verdict
        details["consistent_with_integral_test"] = ref.verdict == verdict
    if verdict == CONVERGENT:
        return Classification(verdict, total, tail, g_log, g_loglog,
                              f"S(K_max)={total:.6g}, remainder <= {tail:.3g} ({how})", details)
    return Classification(verdict, total, math.inf, g_log, g_loglog,
                          f"remainder unbounded ({how}); dS/dlogK={g_log:.3g}, dS/dloglogK={g_loglog:.3g}",
                          details)


def dyadic_sum(theta: WeightFunction, K: int) -> float:
    """S_K = sum_{j=1..K} theta(2^j)."""
    return float(np.sum(theta(2.0 ** np.arange(1, K + 1))))

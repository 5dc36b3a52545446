"""Command-line front end: ``uncertainty-lab <subcommand> <action> [flags]`` or ``--config file.json``.

Every run writes a JSON report (with the config hash and the tolerances
used) plus CSV data into the output directory. Outputs are assembled in
memory and written only after the pipeline finished, so a failed run leaves
no partial files. Exit codes: 0 for consistent runs, 2 when any audit
returns CONTRADICTION, 1 for errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import audit as _audit
from .construct1d import ingham_construct, ingham_widths, pw_halfline_construct
from .core import Grid1D, SampledFunction1D, SampledFunctionND, fourier_1d, fourier_1d_at
from .corpus import bump, run_corpus, thread_cap
from .envelope import decay_envelope
from .errors import ConfigurationError, LabError
from .geometry import RadialFunctionND, radial_extend, slice_projection_check
from .io import _header, load_sfn
from .nilpotent import (GroupFunction, hs_two_route, load_gfn, nu_data, parse_group, plancherel_check,
                        separable_construct)
from .quasianalytic import CONTRADICTION, AuditReport, as_nd, bochner_taylor_audit
from .schrodinger_rn import diagonalize, parse_matrix, propagate_kernel, propagate_multiplier, uc_audit_rn
from .torus import coefficient_rows, periodize, torus_coefficients
from .weights import parse_weight

REPORT_VERSION = 1


# parsing helpers ---------------------------------------------------------------------------

def parse_grid(text: str) -> Grid1D:
    """``"2^16x[-2,2]"`` or ``"65536x[-2,2]"`` -> Grid1D on [lo, hi)."""
    try:
        count_s, _, rest = text.partition("x")
        count = 2 ** int(count_s[2:]) if count_s.startswith("2^") else int(count_s)
        lo, hi = (float(v) for v in rest.strip("[]").split(","))
    except ValueError as exc:
        raise ConfigurationError(f"grid {text!r} is not of the form 2^Nx[lo,hi]") from exc
    if not hi > lo:
        raise ConfigurationError(f"grid {text!r} has an empty interval")
    return Grid1D.from_interval(lo, hi, count)


def parse_range(text: str) -> np.ndarray:
    """``"lo:hi:count"`` -> linspace."""
    try:
        lo, hi, n = text.split(":")
        return np.linspace(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise ConfigurationError(f"range {text!r} is not of the form lo:hi:count") from exc


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"{text!r} is not a comma-separated list of numbers") from exc


def parse_omega(text: str) -> list[tuple[float, float]]:
    """``"-1,1x-1,1"`` -> [(-1, 1), (-1, 1)]."""
    out = []
    for part in text.split("x"):
        vals = parse_floats(part)
        if len(vals) != 2:
            raise ConfigurationError(f"omega factor {part!r} needs lo,hi")
        out.append((vals[0], vals[1]))
    return out


# outputs ---------------------------------------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: numpy scalars and arrays become Python values, non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return obj


def _csv_bytes(header: list[str], rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue().encode()


def _sfn_bytes(f: SampledFunction1D | SampledFunctionND) -> bytes:
    axes = [f.grid] if isinstance(f, SampledFunction1D) else list(f.axes)
    payload = np.ascontiguousarray(f.values, dtype="<c8").tobytes()
    return _header(axes, f.support_hint, _clean(f.meta)) + payload


@dataclass
class Outcome:
    result: dict
    verdicts: list[str] = field(default_factory=list)
    files: dict[str, bytes] = field(default_factory=dict)


# scenario runners ---------------------------------------------------------------------------

def _load(path: str, fallback: Callable[[], Any]):
    return load_sfn(path) if path else fallback()


def _default_ingham() -> SampledFunction1D:
    return ingham_construct(ingham_widths(parse_weight("log_pow:2"), 1.0, 24), Grid1D.centered(4.0, 2 ** 16))


def _default_bump() -> SampledFunction1D:
    return SampledFunction1D.from_callable(bump, Grid1D.centered(32.0, 2 ** 12), (-1.0, 1.0))


def _audit_kw(p: dict) -> dict:
    return {"mass_tol": p["mass_tol"], "norm_tol": p["norm_tol"], "envelope_threshold": p["envelope_threshold"]}


def _report_outcome(rep: AuditReport, extra: dict | None = None) -> Outcome:
    env = rep.envelope or {}
    rows = list(zip(env.get("bin_centers", []), env.get("sup_values", []), env.get("c_bins", [])))
    return Outcome({"audit": rep.to_dict(), **(extra or {})}, [rep.verdict],
                   {"envelope.csv": _csv_bytes(["bin_center", "sup", "c_bin"],
                                               [(a, b, "" if c is None else c) for a, b, c in rows])})


def run_construct_ingham(p: dict) -> Outcome:
    theta = parse_weight(p["theta"])
    plan = ingham_widths(theta, p["l"], p["K"])
    grid = parse_grid(p["grid"])
    f = ingham_construct(plan, grid)
    spec = fourier_1d(f)
    lo, hi = f.support_hint
    fit = decay_envelope(spec, theta)
    ref = plan.spectrum(spec.points())
    node_err = float(np.max(np.abs(spec.values - ref)) / np.max(np.abs(ref)))
    # half-step offsets are not dual nodes, so this probes the samples themselves
    off = np.linspace(0.0, min(fit.details["hi"], grid.nyquist / 4), 257) + 0.5 / grid.extent
    direct = fourier_1d_at(f, off)
    ref_off = plan.spectrum(off)
    off_err = float(np.max(np.abs(direct - ref_off)) / np.max(np.abs(plan.spectrum(np.array([0.0])))))
    result = {"plan": plan.to_dict(), "leakage": f.mass_outside(lo, hi), "support": [lo, hi],
              "envelope": fit.to_dict(), "sinc_rel_err_nodes": node_err, "sinc_rel_err_offgrid": off_err,
              "method": f.meta.get("method")}
    rows = zip(fit.bin_centers, fit.sup_values, fit.c_bins)
    return Outcome(result, [], {"function.sfn": _sfn_bytes(f),
                                "envelope.csv": _csv_bytes(["bin_center", "sup", "c_bin"], rows)})


def run_construct_pw(p: dict) -> Outcome:
    psi = parse_weight(p["psi"])
    grid = parse_grid(p["grid"])
    f = pw_halfline_construct(psi, grid, x0=p["x0"], taper=p["taper"])
    spec = fourier_1d(f)
    band = np.abs(spec.points()) <= f.meta["interior_band"]
    target = np.exp(-psi(spec.points()[band]))
    mod_err = float(np.max(np.abs(np.abs(spec.values[band]) - target)) / np.max(target))
    result = {"meta": f.meta, "modulus_rel_err_interior": mod_err}
    return Outcome(result, [], {"function.sfn": _sfn_bytes(f)})


def run_radon_check(p: dict) -> Outcome:
    lam = parse_range(p["lambda"])
    if p["input"]:
        g = load_sfn(p["input"])
        if not isinstance(g, SampledFunction1D):
            raise ConfigurationError("radon check expects a 1D even profile")
        f = radial_extend(g, p["n"])
    else:
        f = RadialFunctionND.from_callable(lambda r: np.exp(-np.pi * r * r), p["n"], 6.0)
    rep = slice_projection_check(f, lam)
    return Outcome({"n": p["n"], "max_rel_err": rep.max_rel_err, "nodes": int(lam.size)}, [],
                   {"slice.csv": _csv_bytes(["lambda", "lhs", "rhs", "rel_err"], rep.rows())})


def _default_torus_input() -> SampledFunctionND:
    g = Grid1D(-0.25, 2.0 ** -8, 128)
    return SampledFunctionND.from_callable(lambda x, y: bump(x, 0.25) * bump(y, 0.25), (g, g))


def run_torus_periodize(p: dict) -> Outcome:
    g = as_nd(_load(p["input"], _default_torus_input))
    shift = parse_floats(p["shift"]) if p["shift"] else None
    T = periodize(g, shift)
    c = torus_coefficients(T, p["band"])
    header = [f"m{i + 1}" for i in range(T.n)] + ["re", "im"]
    return Outcome({"shape": list(T.shape), "band": p["band"], "shift": shift, "norm": T.norm()}, [],
                   {"coefficients.csv": _csv_bytes(header, coefficient_rows(c, p["band"]))})


def run_qa_audit(p: dict) -> Outcome:
    f = _load(p["input"], lambda: ingham_construct(ingham_widths(parse_weight("log_pow:2"), 1.0, 16),
                                                   Grid1D.centered(4.0, 2 ** 14)))
    rep = bochner_taylor_audit(f, parse_omega(p["omega"]), parse_floats(p["x0"]), parse_weight(p["theta"]),
                               k_max=p["kmax"], mass_tol=p["mass_tol"], norm_tol=p["norm_tol"],
                               envelope_threshold=p["envelope_threshold"])
    return _report_outcome(rep)


def run_audit_ingham(p: dict) -> Outcome:
    f = _load(p["input"], _default_ingham)
    return _report_outcome(_audit.ingham_audit(f, p["region"], parse_weight(p["theta"]), **_audit_kw(p)))


def run_audit_pw(p: dict) -> Outcome:
    def default():
        gx, gy = Grid1D.centered(64.0, 2 ** 16), Grid1D.centered(8.0, 2 ** 6)
        h = pw_halfline_construct(parse_weight("sqrt"), gx, x0=0.0)
        return SampledFunctionND((gx, gy), np.outer(h.values, np.exp(-np.pi * gy.points() ** 2)))
    f = _load(p["input"], default)
    return _report_outcome(_audit.pw_audit(f, p["halfspace"], parse_weight(p["psi"]), **_audit_kw(p)))


def run_audit_torus(p: dict) -> Outcome:
    def default():
        g = ingham_construct(ingham_widths(parse_weight("log_pow:2"), 0.2, 14), Grid1D(-0.5, 2.0 ** -14, 2 ** 14))
        return SampledFunctionND((g.grid,), g.values)
    T = periodize(as_nd(_load(p["input"], default)))
    rep = _audit.torus_audit(T, p["region"], parse_weight(p["theta"]), band=p["band"] or None, **_audit_kw(p))
    return _report_outcome(rep)


def run_audit_corpus(p: dict) -> Outcome:
    if not p["dir"]:
        raise ConfigurationError("dir: a directory of .sfn files is required")
    d = Path(p["dir"])
    if not d.is_dir():
        raise ConfigurationError(f"dir: {d} is not a directory")
    files = sorted(d.glob("*.sfn"))
    if not files:
        raise ConfigurationError(f"dir: {d} holds no .sfn files")
    theta = parse_weight(p["theta"])
    reports, rows = {}, []
    for path in files:
        rep = _audit.ingham_audit(load_sfn(path), p["region"], theta, **_audit_kw(p))
        reports[path.name] = rep.to_dict()
        rows.append((path.name, rep.verdict))
    return Outcome({"reports": reports}, [v for _, v in rows],
                   {"verdicts.csv": _csv_bytes(["file", "verdict"], rows)})


def run_schro_evolve(p: dict) -> Outcome:
    f = _load(p["input"], _default_bump)
    system = diagonalize(parse_matrix(p["A"]))
    if p["method"] == "multiplier":
        w = propagate_multiplier(f, system, p["t"])
    elif p["method"] == "kernel":
        w = propagate_kernel(f, system, p["t"])
    else:
        raise ConfigurationError(f"method: expected multiplier or kernel, got {p['method']!r}")
    n0 = as_nd(f).norm()
    result = {"system": system.to_dict(), "t": p["t"], "method": p["method"], "norm_in": n0,
              "norm_out": as_nd(w).norm(), "unitarity_err": abs(as_nd(w).norm() - n0) / n0 if n0 else 0.0}
    return Outcome(result, [], {"evolved.sfn": _sfn_bytes(w)})


def run_schro_uc_audit(p: dict) -> Outcome:
    def default():
        return SampledFunction1D.from_callable(bump, Grid1D.centered(64.0, 2 ** 14), (-1.0, 1.0))
    f = _load(p["input"], default)
    rep = uc_audit_rn(f, diagonalize(parse_matrix(p["A"])), p["t0"], parse_weight(p["psi"]))
    return _report_outcome(rep)


def _nu_direction(spec, text: str) -> np.ndarray:
    e = np.array(parse_floats(text)) if text else np.ones(spec.k)
    if e.size != spec.k or not np.any(e):
        raise ConfigurationError(f"direction: need {spec.k} components, not all zero")
    return e / np.linalg.norm(e)


def run_group_pfaffian(p: dict) -> Outcome:
    spec = parse_group(p["spec"])
    e = _nu_direction(spec, p["direction"])
    rows = []
    for s in parse_range(p["nu"]):
        nd = nu_data(spec, s * e)
        rows.append((float(s), nd.pf, float(np.prod(nd.d)) if nd.d.size else 0.0, nd.rank,
                     " ".join(map(str, nd.jumps))))
    return Outcome({"spec": spec.to_dict(), "direction": e.tolist(), "points": len(rows)}, [],
                   {"pfaffian.csv": _csv_bytes(["nu", "pf", "prod_d", "rank", "jumps"], rows)})


def _default_group_function(spec) -> GroupFunction:
    gv = Grid1D.centered(12.0, 128)
    gz = Grid1D.centered(2.0, 128)
    h = SampledFunctionND.from_callable(lambda *v: np.exp(-np.pi * sum(x * x for x in v)), (gv,) * spec.m)
    g = SampledFunctionND.from_callable(lambda *z: np.exp(-np.pi * sum(x * x for x in z) / 0.01), (gz,) * spec.k)
    return separable_construct(spec, h, g)


def run_group_plancherel(p: dict) -> Outcome:
    spec = parse_group(p["spec"])
    F = load_gfn(p["input"], spec) if p["input"] else _default_group_function(spec)
    out = plancherel_check(F, p["lo"], p["hi"], p["nodes"])
    result = {"spec": spec.to_dict(), "plancherel": out}
    if spec.m == 2 and spec.k == 1:
        result["hs_two_route"] = [hs_two_route(F, nu) for nu in (-2.0, -1.0, 1.0, 2.0)]
    return Outcome(result)


def run_corpus_scenario(p: dict) -> Outcome:
    names = [n for n in p["members"].split(",") if n] or None
    res = run_corpus(names, threads=thread_cap())
    rows = [(r.name, r.verdict) for r in res]
    return Outcome({"members": {r.name: r.report.to_dict() for r in res}}, [r.verdict for r in res],
                   {"verdicts.csv": _csv_bytes(["member", "verdict"], rows)})


_TOL = {"mass_tol": (float, _audit.MASS_TOL), "norm_tol": (float, _audit.NORM_TOL),
        "envelope_threshold": (float, _audit.ENVELOPE_THRESHOLD)}

SCENARIOS: dict[str, tuple[Callable[[dict], Outcome], dict[str, tuple[type, Any]]]] = {
    "construct.ingham": (run_construct_ingham, {"theta": (str, "log_pow:2"), "l": (float, 1.0),
                                                "K": (int, 24), "grid": (str, "2^16x[-2,2]")}),
    "construct.pw": (run_construct_pw, {"psi": (str, "sqrt"), "x0": (float, 0.0),
                                        "grid": (str, "2^16x[-32,32]"), "taper": (float, 0.05)}),
    "radon.check": (run_radon_check, {"n": (int, 3), "input": (str, ""), "lambda": (str, "0:8:64")}),
    "torus.periodize": (run_torus_periodize, {"input": (str, ""), "shift": (str, ""), "band": (int, 16)}),
    "qa.audit": (run_qa_audit, {"input": (str, ""), "omega": (str, "1.2,1.8"), "x0": (str, "1.5"),
                                "theta": (str, "log_pow:2"), "kmax": (int, 12), **_TOL}),
    "audit.ingham": (run_audit_ingham, {"input": (str, ""), "region": (str, "ball:1.5:0.4"),
                                        "theta": (str, "log_pow:2"), **_TOL}),
    "audit.pw": (run_audit_pw, {"input": (str, ""), "halfspace": (str, "halfspace:1,0:0"),
                                "psi": (str, "sqrt"), **_TOL}),
    "audit.torus": (run_audit_torus, {"input": (str, ""), "region": (str, "ball:0.5:0.2"),
                                      "theta": (str, "log_pow:2"), "band": (int, 0), **_TOL}),
    "audit.corpus": (run_audit_corpus, {"dir": (str, ""), "region": (str, "ball:1.5:0.4"),
                                        "theta": (str, "log_pow:2"), **_TOL}),
    "schro.evolve": (run_schro_evolve, {"A": (str, "1"), "t": (float, 0.1), "input": (str, ""),
                                        "method": (str, "multiplier")}),
    "schro.uc-audit": (run_schro_uc_audit, {"A": (str, "1"), "t0": (float, 0.25), "psi": (str, "sqrt"),
                                            "input": (str, "")}),
    "group.pfaffian": (run_group_pfaffian, {"spec": (str, "heisenberg:1"), "nu": (str, "0:8:64"),
                                            "direction": (str, "")}),
    "group.plancherel": (run_group_plancherel, {"spec": (str, "heisenberg:1"), "input": (str, ""),
                                                "lo": (float, -8.0), "hi": (float, 8.0), "nodes": (int, 256)}),
    "corpus.run": (run_corpus_scenario, {"members": (str, "")}),
}


# config ----------------------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioConfig:
    """A fully resolved scenario: name, parameters (defaults filled in), output directory and seed."""

    scenario: str
    params: dict
    out: str = "ul_out"
    seed: int = 0

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        if not isinstance(raw, dict):
            raise ConfigurationError("config: top level must be a JSON object")
        unknown = set(raw) - {"scenario", "params", "out", "seed"}
        if unknown:
            raise ConfigurationError(f"config.{sorted(unknown)[0]}: unknown key")
        name = raw.get("scenario")
        if name not in SCENARIOS:
            raise ConfigurationError(f"config.scenario: unknown scenario {name!r}; "
                                     f"choose from {sorted(SCENARIOS)}")
        schema = SCENARIOS[name][1]
        given = raw.get("params")
        given = {} if given is None else given
        if not isinstance(given, dict):
            raise ConfigurationError("config.params: must be an object")
        params = {}
        for key, value in given.items():
            if key not in schema:
                raise ConfigurationError(f"config.params.{key}: not a parameter of {name}")
            typ = schema[key][0]
            try:
                if typ is int and (isinstance(value, bool) or float(value) != int(value)):
                    raise ValueError
                params[key] = typ(value)
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"config.params.{key}: expected {typ.__name__}, got {value!r}") from exc
        for key, (typ, default) in schema.items():
            params.setdefault(key, default)
        out = raw.get("out", "ul_out")
        if not isinstance(out, str) or not out:
            raise ConfigurationError("config.out: must be a non-empty path string")
        seed = raw.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigurationError("config.seed: must be an integer")
        return cls(name, params, out, seed)

    def canonical(self) -> dict:
        return {"scenario": self.scenario, "params": self.params, "seed": self.seed}

    @property
    def hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def run_scenario(config: ScenarioConfig, timestamp: str | None = None) -> tuple[int, dict]:
    """Execute the pipeline and write report.json plus data files; returns (exit code, report)."""
    np.random.seed(config.seed)
    runner = SCENARIOS[config.scenario][0]
    outcome = runner(dict(config.params))
    contradiction = CONTRADICTION in outcome.verdicts
    report = {
        "header": {"timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat()},
        "version": REPORT_VERSION,
        "config": config.canonical(),
        "config_hash": config.hash,
        "verdicts": outcome.verdicts,
        "status": "CONTRADICTION" if contradiction else "ok",
        "result": outcome.result,
        "files": sorted(outcome.files),
    }
    files = dict(outcome.files)
    files["report.json"] = (json.dumps(_clean(report), sort_keys=True, indent=1) + "\n").encode()
    _write_all(Path(config.out), files)
    return (2 if contradiction else 0), report


def _write_all(out: Path, files: dict[str, bytes]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, data in files.items():
            fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.")
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            staged.append((tmp, out / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)


# argparse ------------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which is reserved
        raise ConfigurationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uncertainty-lab", description="Uncertainty-principle constructions and audits.")
    parser.add_argument("--config", help="JSON scenario config (overrides every other flag)")
    parser.add_argument("--scenario", help="run a scenario by name with default parameters")
    parser.add_argument("--out", default="ul_out", help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command")
    groups: dict[str, argparse._SubParsersAction] = {}
    for name, (_, schema) in SCENARIOS.items():
        cmd, action = name.split(".")
        if cmd not in groups:
            groups[cmd] = sub.add_parser(cmd).add_subparsers(dest="action")
        p = groups[cmd].add_parser(action)
        p.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        for key, (typ, default) in schema.items():
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=typ, default=default)
    return parser


def _config_from_args(argv: list[str] | None) -> ScenarioConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigurationError(f"config: cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        return ScenarioConfig.from_dict(raw)
    if args.scenario:
        return ScenarioConfig.from_dict({"scenario": args.scenario, "out": args.out, "seed": args.seed})
    if not args.command or not getattr(args, "action", None):
        raise ConfigurationError("need a subcommand and action, --scenario or --config")
    name = f"{args.command}.{args.action}"
    params = {k: getattr(args, k) for k in SCENARIOS[name][1]}
    return ScenarioConfig.from_dict({"scenario": name, "params": params, "out": args.out, "seed": args.seed})


def main(argv: list[str] | None = None) -> int:
    try:
        config = _config_from_args(argv)
        code, report = run_scenario(config)
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"scenario": config.scenario, "status": report["status"],
                      "verdicts": report["verdicts"], "out": config.out}))
    return code


if __name__ == "__main__":
    sys.exit(main())

import csv
import json

import numpy as np
import pytest

from uncertainty_lab import cli
from uncertainty_lab.cli import (Outcome, ScenarioConfig, main, parse_floats, parse_grid, parse_omega, parse_range,
                                 run_scenario)
from uncertainty_lab.errors import ConfigurationError
from uncertainty_lab.io import load_sfn
from uncertainty_lab.quasianalytic import CONSISTENT, CONTRADICTION


@pytest.mark.parametrize("text,count,lo,hi", [("2^4x[-2,2]", 16, -2.0, 2.0), ("64x[0,1]", 64, 0.0, 1.0)])
def test_parse_grid(text, count, lo, hi):
    g = parse_grid(text)
    assert g.count == count and g.origin == lo and g.end == pytest.approx(hi)


@pytest.mark.parametrize("bad", ["2^4x[2,-2]", "abc", "2^4x[1]", "16x[0,0]"])
def test_parse_grid_errors(bad):
    with pytest.raises(ConfigurationError):
        parse_grid(bad)


def test_parse_range_floats_omega():
    assert np.array_equal(parse_range("0:1:5"), np.linspace(0, 1, 5))
    assert parse_floats("1, 2.5,") == [1.0, 2.5]
    assert parse_omega("-1,1x0,2") == [(-1.0, 1.0), (0.0, 2.0)]
    for fn, bad in ((parse_range, "0:1"), (parse_floats, "1,a"), (parse_omega, "1,2,3")):
        with pytest.raises(ConfigurationError):
            fn(bad)


@pytest.mark.parametrize("raw", [
    [],
    {"scenario": "nope"},
    {"scenario": "group.pfaffian", "extra": 1},
    {"scenario": "group.pfaffian", "params": {"bogus": 1}},
    {"scenario": "group.pfaffian", "params": []},
    {"scenario": "group.plancherel", "params": {"nodes": 2.5}},
    {"scenario": "group.plancherel", "params": {"nodes": True}},
    {"scenario": "group.plancherel", "params": {"lo": "x"}},
    {"scenario": "group.pfaffian", "out": ""},
    {"scenario": "group.pfaffian", "seed": "1"},
])
def test_config_validation(raw):
    with pytest.raises(ConfigurationError):
        ScenarioConfig.from_dict(raw)


def test_config_defaults_and_hash():
    a = ScenarioConfig.from_dict({"scenario": "group.pfaffian"})
    b = ScenarioConfig.from_dict({"scenario": "group.pfaffian", "params": {"spec": "heisenberg:1"}, "out": "x"})
    c = ScenarioConfig.from_dict({"scenario": "group.pfaffian", "params": {"spec": "heisenberg:2"}})
    assert a.params["nu"] == "0:8:64"
    assert a.hash == b.hash != c.hash
    assert ScenarioConfig.from_dict({"scenario": "group.pfaffian", "seed": 3}).hash != a.hash


def test_main_group_pfaffian(tmp_path, capsys):
    out = tmp_path / "o"
    code = main(["group", "pfaffian", "--spec", "h1xh1", "--nu", "0:2:5", "--direction", "1,2", "--out", str(out)])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["status"] == "ok"
    rows = list(csv.DictReader(open(out / "pfaffian.csv")))
    assert len(rows) == 5
    # along (1, 2)/sqrt5 the weights are s/sqrt5 and 2s/sqrt5, so pf = 2 s^2 / 5
    for r in rows:
        s = float(r["nu"])
        assert float(r["pf"]) == pytest.approx(2 * s * s / 5, abs=1e-12)
    rep = json.loads((out / "report.json").read_text())
    assert rep["files"] == ["pfaffian.csv"] and rep["config"]["params"]["spec"] == "h1xh1"
    assert not list(out.glob(".*"))


def test_main_construct_writes_function(tmp_path):
    out = tmp_path / "c"
    assert main(["construct", "ingham", "--K", "12", "--grid", "2^14x[-2,2]", "--out", str(out)]) == 0
    f = load_sfn(out / "function.sfn")
    assert f.grid.count == 2 ** 14
    rep = json.loads((out / "report.json").read_text())
    assert rep["result"]["sinc_rel_err_nodes"] < 1e-6


def test_config_file_and_determinism(tmp_path):
    cfg = {"scenario": "group.pfaffian", "params": {"nu": "0:1:3"}, "out": str(tmp_path / "r")}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert main(["--config", str(path)]) == 0
    first = json.loads((tmp_path / "r" / "report.json").read_text())
    csv1 = (tmp_path / "r" / "pfaffian.csv").read_bytes()
    assert main(["--config", str(path)]) == 0
    second = json.loads((tmp_path / "r" / "report.json").read_text())
    first["header"].pop("timestamp")
    second["header"].pop("timestamp")
    assert first == second
    assert (tmp_path / "r" / "pfaffian.csv").read_bytes() == csv1


@pytest.mark.parametrize("argv", [["group", "pfaffian", "--spec", "nope"], ["--scenario", "nope"], ["group"],
                                  ["group", "pfaffian", "--nu", "0:1"], ["--bogus-flag"]])
def test_bad_input_exits_one_without_outputs(tmp_path, argv):
    out = tmp_path / "bad"
    assert main(["--out", str(out)] + argv) == 1
    assert not out.exists()


def test_malformed_config_exits_one(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("{not json")
    assert main(["--config", str(path)]) == 1
    assert main(["--config", str(tmp_path / "missing.json")]) == 1


def test_contradiction_exit_code(tmp_path, monkeypatch):
    def fake(p):
        return Outcome({"fake": True}, [CONSISTENT, CONTRADICTION])
    monkeypatch.setitem(cli.SCENARIOS, "corpus.run", (fake, cli.SCENARIOS["corpus.run"][1]))
    out = tmp_path / "x"
    code, rep = run_scenario(ScenarioConfig.from_dict({"scenario": "corpus.run", "out": str(out)}))
    assert code == 2 and rep["status"] == "CONTRADICTION"
    assert main(["--scenario", "corpus.run", "--out", str(out)]) == 2


def test_clean_non_finite():
    assert cli._clean({"a": np.float64("inf"), "b": [np.int64(2), complex(1, -1)], "c": np.array([1.5])}) == \
        {"a": "inf", "b": [2, {"re": 1.0, "im": -1.0}], "c": [1.5]}

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uncertainty_lab.errors import ConfigurationError, PreconditionError
from uncertainty_lab.weights import (DECREASING, NONDECREASING, WeightFunction, carleman_divergence, dyadic_sum,
                                     ingham_integral_test, parse_weight, pw_integral_test, sphere_area,
                                     tabulated_arrays)


@pytest.mark.parametrize("spec,value_at_10", [
    ("log_pow:2", math.log(math.e + 10) ** -2),
    ("loglog_pow:1", None),
    ("inv_pow:0.5", None),
    ("const:3", 3.0),
    ("zero", 0.0),
    ("power:0.5", math.sqrt(10)),
    ("sqrt", math.sqrt(10)),
    ("linear", 10.0),
    ("half_log", 0.5 * math.log(101)),
])
def test_parse_presets(spec, value_at_10):
    w = parse_weight(spec)
    assert isinstance(w, WeightFunction)
    if value_at_10 is not None:
        assert float(w(10.0)) == pytest.approx(value_at_10, rel=1e-14)


def test_parse_mapping_and_scale():
    w = parse_weight({"kind": "log_pow", "alpha": 2, "scale": 3})
    assert float(w(5.0)) == pytest.approx(3 * float(parse_weight("log_pow:2")(5.0)))
    assert parse_weight(w) is w


@pytest.mark.parametrize("spec", ["nope", "log_pow", "log_pow:abc", {"kind": "nope"}, 3, "power:-1"])
def test_parse_errors(spec):
    with pytest.raises(ConfigurationError):
        parse_weight(spec)


def test_weight_evaluates_at_absolute_value():
    w = parse_weight("linear")
    assert float(w(-4.0)) == 4.0
    assert float(w.radial(np.array(3.0), np.array(4.0))) == pytest.approx(5.0)


def test_negative_weight_rejected():
    with pytest.raises(ConfigurationError):
        WeightFunction("neg", lambda r: -np.ones_like(r))


def test_wrong_monotonicity_rejected():
    with pytest.raises(PreconditionError):
        WeightFunction("up", lambda r: r, DECREASING)
    with pytest.raises(PreconditionError):
        WeightFunction("down", lambda r: 1 / (1 + r), NONDECREASING)


def test_scaled_rejects_nonpositive():
    with pytest.raises(ConfigurationError):
        parse_weight("const:1").scaled(0.0)


def test_sphere_area():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


@pytest.mark.parametrize("spec,convergent", [
    ("log_pow:1", False), ("log_pow:2", True), ("log_pow:1.5", True),
    ("loglog_pow:1", False), ("loglog_pow:2", True), ("inv_pow:0.5", True),
    ("const:1", False), ("theta1", True), ("zero", True),
])
def test_ingham_integral_test(spec, convergent):
    assert ingham_integral_test(parse_weight(spec)).convergent is convergent


@pytest.mark.parametrize("spec,convergent", [
    ("sqrt", True), ("power:0.9", True), ("half_log", True), ("linear", False),
    ("power:1", False), ("zero", True), ("const:1", True),
])
def test_pw_integral_test(spec, convergent):
    assert pw_integral_test(parse_weight(spec)).convergent is convergent


def test_ingham_value_closed_form():
    # integral_1^inf dt / (t log^2(e+t)) is close to, and below, 1/log(e+1) + small; compare to quad oracle
    from scipy.integrate import quad
    ref = quad(lambda u: 1.0 / (math.exp(u) * math.log(math.e + math.exp(u)) ** 2) * math.exp(u), 0, math.log(1e12),
               limit=400)[0]
    c = ingham_integral_test(parse_weight("log_pow:2"))
    assert c.value == pytest.approx(ref, rel=1e-8)


def test_ingham_dimension_factor():
    w = parse_weight("log_pow:2")
    one, three = ingham_integral_test(w), ingham_integral_test(w, n=3)
    assert three.value == pytest.approx(4 * math.pi * one.value, rel=1e-12)


def test_pw_value_for_sqrt():
    # integral over R of sqrt|x|/(1+x^2) = pi sqrt 2; truncation at 1e12 leaves ~4e-6
    c = pw_integral_test(parse_weight("sqrt"))
    assert c.value == pytest.approx(math.pi * math.sqrt(2), abs=1e-5)


def test_divergent_growth_measured():
    c = ingham_integral_test(parse_weight("log_pow:1"))
    assert c.growth_loglog == pytest.approx(1.0, rel=0.1)
    assert math.isinf(c.error)


def test_ingham_test_needs_decreasing():
    with pytest.raises(PreconditionError):
        ingham_integral_test(parse_weight("linear"))


@pytest.mark.parametrize("spec", ["log_pow:1", "log_pow:2", "loglog_pow:2", "const:1", "inv_pow:1"])
def test_carleman_agrees_with_integral_test(spec):
    w = parse_weight(spec)
    c = carleman_divergence(w, k_max=10 ** 5)
    assert c.details["consistent_with_integral_test"]
    assert c.convergent is ingham_integral_test(w).convergent


def test_carleman_k_max_floor():
    with pytest.raises(ConfigurationError):
        carleman_divergence(parse_weight("log_pow:2"), k_max=8)


@settings(max_examples=15)
@given(st.floats(0.5, 3.0))
def test_log_pow_dichotomy(alpha):
    w = parse_weight(f"log_pow:{alpha}")
    assert ingham_integral_test(w).convergent is (alpha > 1)


def test_dyadic_sum():
    assert dyadic_sum(parse_weight("const:2"), 5) == 10.0
    w = parse_weight("log_pow:2")
    assert dyadic_sum(w, 3) == pytest.approx(sum(float(w(2.0 ** j)) for j in (1, 2, 3)))


def test_tabulated_file(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("# r,value\n0,1\n1,0.5\n2,0.25\n4,0.125\n8,0.0625\n")
    w = parse_weight(f"tabulated:{p}")
    assert float(w(1.5)) == pytest.approx(0.375)
    assert w.monotonicity == DECREASING
    # constant tail makes the integral test diverge
    assert not ingham_integral_test(w).convergent
    pf = parse_weight(f"tabulated:{p}:power_fit")
    assert pf.params["tail_power"] == pytest.approx(-1.0)
    assert ingham_integral_test(pf).convergent


def test_tabulated_errors(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("0,1\n")
    with pytest.raises(ConfigurationError):
        parse_weight(f"tabulated:{p}")
    with pytest.raises(ConfigurationError):
        tabulated_arrays([0, 1], [1, -1])
    with pytest.raises(ConfigurationError):
        tabulated_arrays([0, 1], [1, 1], tail="spline")


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_tabulated_pw_tail():
    rs = np.linspace(0, 100, 101)
    w = tabulated_arrays(rs, np.sqrt(rs), tail="power_fit")
    assert w.params["tail_power"] == pytest.approx(0.5, abs=0.02)
    assert pw_integral_test(w).convergent

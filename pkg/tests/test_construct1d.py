import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from uncertainty_lab.construct1d import (conjugate_phase, counterexample_psi, ingham_construct, ingham_widths,
                                         poisson_counterexample, poisson_kernel, pw_halfline_construct,
                                         radialized_counterexample_psi, smooth_and_symmetrize, tukey_edge)
from uncertainty_lab.core import Grid1D, SampledFunction1D, fourier_1d, fourier_nd
from uncertainty_lab.corpus import bump
from uncertainty_lab.errors import ConfigurationError, DivergenceError, PreconditionError
from uncertainty_lab.weights import parse_weight

LOG2 = parse_weight("log_pow:2")


@settings(max_examples=20)
@given(st.floats(0.1, 5.0), st.integers(1, 40))
def test_widths_sum_and_order(l, K):
    plan = ingham_widths(LOG2, l, K)
    assert plan.K == K
    assert plan.widths.sum() == pytest.approx(l, rel=1e-12)
    assert np.all(np.diff(plan.widths) <= 0)
    assert plan.slack > 0


def test_widths_follow_weight():
    plan = ingham_widths(LOG2, 1.0, 8)
    theta = LOG2(2.0 ** np.arange(1, 9))
    assert np.allclose(plan.widths / plan.widths[0], theta / theta[0])


@pytest.mark.parametrize("spec", ["log_pow:1", "const:1", "loglog_pow:1"])
def test_divergent_weight_refused(spec):
    with pytest.raises(DivergenceError):
        ingham_widths(parse_weight(spec), 1.0, 8)


@pytest.mark.parametrize("l,K", [(0.0, 4), (-1.0, 4), (1.0, 0)])
def test_widths_config_errors(l, K):
    with pytest.raises(ConfigurationError):
        ingham_widths(LOG2, l, K)


def test_spectrum_at_zero_and_symmetry():
    plan = ingham_widths(LOG2, 1.0, 10)
    assert float(plan.spectrum(0.0)) == 1.0
    xi = np.linspace(0, 50, 101)
    assert np.array_equal(plan.spectrum(xi), plan.spectrum(-xi))
    assert np.all(np.abs(plan.spectrum(xi)) <= 1.0)


def test_nodal_two_widths_is_trapezoid():
    plan = ingham_widths(LOG2, 1.0, 2)
    a1, a2 = plan.widths
    g = Grid1D.centered(4.0, 2 ** 12)
    f = ingham_construct(plan, g, "nodal")
    x = np.abs(g.points())
    # uniform[-a1,a1] * uniform[-a2,a2]: flat top 1/(2 a1) on |x| <= a1-a2, linear to zero at a1+a2
    exact = np.clip((a1 + a2 - x) / (4 * a1 * a2), 0.0, 1.0 / (2 * a1))
    assert np.max(np.abs(f.values - exact)) < 1e-12


@pytest.mark.parametrize("K", [1, 3, 6])
def test_nodal_is_density(K):
    plan = ingham_widths(LOG2, 1.0, K)
    f = ingham_construct(plan, Grid1D.centered(4.0, 2 ** 14), "nodal")
    assert f.integral().real == pytest.approx(1.0, abs=1e-6)
    assert f.values.real.min() >= -1e-9
    assert f.mass_outside(-1.0, 1.0) < 1e-20


def test_nodal_limit():
    with pytest.raises(ConfigurationError):
        ingham_construct(ingham_widths(LOG2, 1.0, 7), Grid1D.centered(4.0, 2 ** 14), "nodal")


def test_spectral_exact_at_dual_nodes():
    plan = ingham_widths(LOG2, 1.0, 20)
    f = ingham_construct(plan, Grid1D.centered(4.0, 2 ** 16))
    assert f.meta["method"] == "spectral"
    F = fourier_1d(f)
    assert np.max(np.abs(F.values - plan.spectrum(F.points()))) < 1e-12
    assert f.mass_outside(-1.0, 1.0) < 1e-12


def test_construct_grid_checks():
    plan = ingham_widths(LOG2, 1.0, 20)
    with pytest.raises(ConfigurationError):
        ingham_construct(plan, Grid1D.centered(4.0, 2 ** 8))
    with pytest.raises(ConfigurationError):
        ingham_construct(plan, Grid1D.centered(1.0, 2 ** 16))
    with pytest.raises(ConfigurationError):
        ingham_construct(plan, Grid1D.centered(4.0, 2 ** 16), "magic")


def test_smooth_and_symmetrize():
    g = Grid1D(-0.25, 2.0 ** -10, 512)
    g1 = SampledFunction1D.from_callable(lambda x: bump(x - 0.05, 0.2) * (1 + x), g, (-0.15, 0.25))
    phi = SampledFunction1D.from_callable(lambda x: bump(x, 0.25), g, (-0.25, 0.25))
    out = smooth_and_symmetrize(g1, phi, 1.0)
    x = out.points()
    v = np.interp(x, x, out.values.real)
    assert np.allclose(v[1:], v[:0:-1], atol=1e-15)
    assert out.mass_outside(-0.5, 0.5) == 0.0
    assert out.support_hint == (-0.5, 0.5)


def test_smooth_and_symmetrize_support_check():
    g = Grid1D(-0.5, 2.0 ** -10, 1024)
    wide = SampledFunction1D.from_callable(lambda x: bump(x, 0.4), g, (-0.4, 0.4))
    with pytest.raises(PreconditionError):
        smooth_and_symmetrize(wide, wide, 1.0)


def test_conjugate_phase_half_log():
    # exp(-half_log) = 1/|1 - i xi|; the outer function 1/(1 - i xi) has phase arctan(xi)
    xi = np.array([0.1, 0.5, 1.0, 3.0, 10.0, 100.0])
    assert np.max(np.abs(conjugate_phase(parse_weight("half_log"), xi) - np.arctan(xi))) < 1e-9


def test_conjugate_phase_constant_weight_vanishes():
    assert np.max(np.abs(conjugate_phase(parse_weight("const:2"), np.array([0.5, 7.0])))) < 1e-12


def test_tukey_edge():
    a = np.array([0.0, 0.5, 0.95, 0.975, 1.0])
    w = tukey_edge(a, 0.05)
    assert w[0] == w[1] == w[2] == 1.0
    assert w[3] == pytest.approx(0.5)
    assert w[4] == pytest.approx(0.0, abs=1e-15)
    assert np.all(tukey_edge(a, 0.0) == 1.0)


def test_pw_divergent_refused():
    with pytest.raises(DivergenceError):
        pw_halfline_construct(parse_weight("linear"), Grid1D.centered(64.0, 2 ** 12))


def test_pw_decay_budget():
    with pytest.raises(ConfigurationError):
        pw_halfline_construct(parse_weight("sqrt"), Grid1D.centered(1.0, 2 ** 22))


def test_pw_x0_outside_grid():
    with pytest.raises(ConfigurationError):
        pw_halfline_construct(parse_weight("sqrt"), Grid1D.centered(64.0, 2 ** 12), x0=40.0)


def test_pw_half_log_closed_form_modulus():
    g = Grid1D.centered(64.0, 2 ** 14)
    f = pw_halfline_construct(parse_weight("half_log"), g)
    F = fourier_1d(f)
    band = np.abs(F.points()) <= 0.95 * g.nyquist
    xi = F.points()[band]
    assert np.max(np.abs(F.values[band] - 1.0 / (1.0 - 1j * xi))) < 1e-9


def test_pw_translation():
    g = Grid1D.centered(64.0, 2 ** 14)
    psi = parse_weight("sqrt")
    a, b = pw_halfline_construct(psi, g, 0.0), pw_halfline_construct(psi, g, 4.0)
    k = int(round(4.0 / g.step))
    assert np.max(np.abs(np.roll(a.values, k) - b.values)) < 1e-10 * np.max(np.abs(a.values))
    assert b.support_hint == (g.origin, 4.0)
    assert b.meta["mass_right_of_x0"] < 1e-3


def test_poisson_kernel_periodized_sums():
    y = np.linspace(-4, 4, 9)
    direct = sum(poisson_kernel(y + 8 * k) for k in range(-20000, 20001))
    assert np.max(np.abs(poisson_kernel(y, period=8.0) - direct)) < 1e-6


def test_poisson_counterexample_spectrum_in_v():
    gx, gy = Grid1D.centered(64.0, 2 ** 12), Grid1D.centered(8.0, 2 ** 7)
    F = poisson_counterexample(0.0, gx, gy)
    G = fourier_nd(F, axes=[1])
    row = G.values[gx.count // 2 - 40]
    v = G.axes[1].points()
    ratio = row / row[gy.count // 2]
    assert np.max(np.abs(ratio - np.exp(-2 * np.pi * np.abs(v)))) < 1e-10


def test_poisson_counterexample_errors():
    gx = Grid1D.centered(64.0, 2 ** 12)
    with pytest.raises(ConfigurationError):
        poisson_counterexample(0.0, gx, Grid1D.centered(8.0, 2 ** 7), mode="truncate")
    with pytest.raises(ConfigurationError):
        poisson_counterexample(0.0, gx, Grid1D.centered(8.0, 2 ** 7), mode="other")
    with pytest.raises(ConfigurationError):
        poisson_counterexample(0.0, gx, Grid1D.centered(8.0, 2 ** 7),
                               f=SampledFunction1D(Grid1D.centered(32.0, 2 ** 12), np.zeros(2 ** 12)))


def test_poisson_truncate_mode_with_loose_budget():
    gx, gy = Grid1D.centered(64.0, 2 ** 12), Grid1D.centered(8.0, 2 ** 7)
    F = poisson_counterexample(0.0, gx, gy, mode="truncate", budget=0.2)
    assert F.meta["tail_mass"] == pytest.approx(1 - 2 / math.pi * math.atan(4.0))


@pytest.mark.parametrize("r", [0.3, 2.0, 17.5])
def test_radialized_psi_is_angular_mean(r):
    mean = quad(lambda t: float(counterexample_psi(r * math.cos(t), r * math.sin(t))), 0, 2 * math.pi,
                limit=200)[0] / (2 * math.pi)
    assert float(radialized_counterexample_psi()(r)) == pytest.approx(mean, rel=1e-9)

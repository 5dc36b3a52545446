import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uncertainty_lab.core import Grid1D, SampledFunctionND
from uncertainty_lab.corpus import bump
from uncertainty_lab.errors import ConfigurationError
from uncertainty_lab.torus import (TorusFunction, coefficient_rows, decay_bound_lattice, integer_spectrum_direct,
                                   lattice_norms, modulate, periodize, torus_coefficients, translate_torus,
                                   weight_on_lattice)
from uncertainty_lab.weights import parse_weight

G = Grid1D(-0.25, 2.0 ** -8, 128)


def _bump2d():
    return SampledFunctionND.from_callable(lambda x, y: bump(x, 0.25) * bump(y, 0.25) * (1 + x - 2 * y), (G, G))


@settings(max_examples=15)
@given(st.integers(-300, 300), st.integers(-300, 300))
def test_poisson_summation_with_phase(i, j):
    g = _bump2d()
    shift = np.array([i, j]) * G.step
    c = torus_coefficients(periodize(g, shift), 8)
    ref = integer_spectrum_direct(g, 8)
    m = np.arange(-8, 9)
    phase = np.exp(2j * np.pi * (m[:, None] * shift[0] + m[None, :] * shift[1]))
    assert np.max(np.abs(c - ref * phase)) < 1e-12


def test_wider_than_period_folds():
    # support of length 2 wraps twice; the mean is still the integral
    g1 = Grid1D(-1.0, 2.0 ** -6, 128)
    g = SampledFunctionND.from_callable(lambda x: bump(x), (g1,))
    T = periodize(g)
    assert T.integral() == pytest.approx(g.values.sum() * g1.step)
    assert np.max(np.abs(torus_coefficients(T, 10) - integer_spectrum_direct(g, 10))) < 1e-13


@pytest.mark.parametrize("grid,shift", [
    (Grid1D(0.0, 0.3, 8), [0.0]),
    (Grid1D(0.0, 2.0 ** -4, 8), [0.01]),
    (Grid1D(0.0, 2.0 ** -4, 8), [0.0, 0.0]),
])
def test_periodize_errors(grid, shift):
    with pytest.raises(ConfigurationError):
        periodize(SampledFunctionND((grid,), np.ones(8)), shift)


def test_band_limit():
    T = TorusFunction(np.ones(16))
    torus_coefficients(T, 7)
    with pytest.raises(ConfigurationError):
        torus_coefficients(T, 8)


def test_torus_function_needs_power_of_two():
    with pytest.raises(ConfigurationError):
        TorusFunction(np.ones(12))


def test_trigonometric_polynomial_coefficients():
    N = 64
    x = np.arange(N) / N
    T = TorusFunction(2 + 3 * np.exp(2j * np.pi * 5 * x) - 1j * np.exp(-2j * np.pi * 3 * x))
    c = torus_coefficients(T, 8)
    expected = np.zeros(17, complex)
    expected[8], expected[13], expected[5] = 2, 3, -1j
    assert np.allclose(c, expected, atol=1e-14)


def test_modulate_shifts_coefficients():
    T = periodize(_bump2d())
    m, m0 = (3, -1), (1, 1)
    band = 8
    big = torus_coefficients(T, 16)
    cm = torus_coefficients(modulate(T, m, m0), band)
    d = np.array(m0) - np.array(m)
    sel = np.arange(-band, band + 1) + 16
    ref = big[np.ix_(sel + d[0], sel + d[1])]
    assert np.max(np.abs(cm - ref)) < 1e-14
    assert np.max(np.abs(np.abs(modulate(T, m, m0).values) - np.abs(T.values))) < 1e-15
    with pytest.raises(ConfigurationError):
        modulate(T, (1,), (0,))


def test_translate_torus_phase():
    T = periodize(_bump2d())
    s = (0.125, -0.25)
    c0, c1 = torus_coefficients(T, 6), torus_coefficients(translate_torus(T, s), 6)
    m = np.arange(-6, 7)
    assert np.allclose(c1, c0 * np.exp(2j * np.pi * (m[:, None] * s[0] + m[None, :] * s[1])), atol=1e-15)
    with pytest.raises(ConfigurationError):
        translate_torus(T, (0.001, 0.0))


def test_coefficient_rows():
    rows = list(coefficient_rows(np.arange(9).reshape(3, 3).astype(complex), 1))
    assert len(rows) == 9
    assert rows[0][:2] == (-1, -1) and rows[-1] == (1, 1, 8.0, 0.0)


def test_lattice_helpers():
    r = lattice_norms(2, 2)
    assert r.shape == (5, 5) and r[2, 2] == 0 and r[0, 0] == pytest.approx(np.sqrt(8))
    w = weight_on_lattice(parse_weight("const:1"), 2, 2)
    assert np.all(w == 1)
    b = decay_bound_lattice(parse_weight("const:1"), 3.0, 2, 2)
    assert b[2, 2] == 3.0
    assert b[2, 3] == pytest.approx(3.0 * np.exp(-3.0))


def test_norm_and_sampled_view():
    T = TorusFunction(np.ones((4, 8)))
    assert T.norm() == 1.0 and T.n == 2
    S = T.as_sampled()
    assert S.axes[1].step == 0.125
    assert len(T.mesh()) == 2

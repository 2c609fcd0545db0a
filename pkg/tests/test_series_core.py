import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad as scipy_quad

from summa.catalog import catalog_signal
from summa.errors import ConfigurationError, EvaluationError
from summa.series_core import (DEFAULT_QUADRATURE, FourierCoefficients, GridFunction,
                               PeriodicSignal, QuadratureConfig, cesaro_via_fejer,
                               default_grid, dirichlet_kernel, fejer_kernel,
                               fourier_coefficients, l2_norm, partial_sum, partial_sums)

TOL = DEFAULT_QUADRATURE.abs_tol


def sign_wave(L=math.pi):
    return PeriodicSignal(L, evaluator=np.sign, name="sign")


def test_quadrature_config_validates():
    with pytest.raises(ConfigurationError):
        QuadratureConfig(panels=0)
    with pytest.raises(ConfigurationError):
        QuadratureConfig(points_per_panel=1)
    with pytest.raises(ConfigurationError):
        QuadratureConfig(abs_tol=0)


def test_signal_needs_a_representation():
    with pytest.raises(ConfigurationError):
        PeriodicSignal(math.pi)
    with pytest.raises(ConfigurationError):
        PeriodicSignal(-1.0, evaluator=np.sin)


def test_coefficients_of_constant():
    c = fourier_coefficients(PeriodicSignal(math.pi, evaluator=lambda x: 3 + 0 * x), 2)
    assert abs(c.a0 - 6) <= TOL
    assert np.all(np.abs(c.a) <= TOL) and np.all(np.abs(c.b) <= TOL)


def test_coefficients_of_square_wave():
    c = fourier_coefficients(sign_wave(), 5)
    # closed-form integrals of sign(x) sin(kx) over [-pi, pi]
    expected_b = [4 / (k * math.pi) if k % 2 else 0.0 for k in range(1, 6)]
    assert abs(c.a0) <= TOL
    assert np.all(np.abs(c.a) <= TOL)
    np.testing.assert_allclose(c.b, expected_b, atol=TOL)
    assert c.b[0] == pytest.approx(1.27324, abs=1e-5)


def test_coefficients_match_adaptive_quadrature():
    L = 2.0
    sig = PeriodicSignal(L, evaluator=lambda x: np.exp(np.sin(np.pi * x / L)) + x ** 2 / 4)
    got = fourier_coefficients(sig, 4)
    for k in range(1, 5):
        ak = scipy_quad(lambda x: sig(x) * math.cos(k * math.pi * x / L), -L, L, limit=200)[0] / L
        bk = scipy_quad(lambda x: sig(x) * math.sin(k * math.pi * x / L), -L, L, limit=200)[0] / L
        assert got.a[k - 1] == pytest.approx(ak, abs=1e-10)
        assert got.b[k - 1] == pytest.approx(bk, abs=1e-10)


def test_coefficients_of_single_cosine():
    L = 1.5
    c = fourier_coefficients(PeriodicSignal(L, evaluator=lambda x: np.cos(np.pi * x / L)), 1)
    assert c.a[0] == pytest.approx(1.0, abs=TOL)
    assert abs(c.a0) <= TOL and abs(c.b[0]) <= TOL


def test_non_finite_evaluator_names_node():
    sig = PeriodicSignal(math.pi, evaluator=lambda x: np.where(x > 1, np.nan, 0.0))
    with pytest.raises(EvaluationError) as info:
        fourier_coefficients(sig, 1)
    assert info.value.node > 1
    assert "node" in str(info.value)


@pytest.mark.parametrize("n, x, expected", [(3, 0.0, 7.0), (0, 1.234, 1.0), (0, -2.5, 1.0),
                                            (2, math.pi / 2, -1.0)])
def test_dirichlet_values(n, x, expected):
    assert dirichlet_kernel(n, x, math.pi) == pytest.approx(expected, abs=1e-12)


def test_fejer_values():
    assert fejer_kernel(4, 0.0) == 5.0
    assert fejer_kernel(1, math.pi, math.pi) == pytest.approx(0.0, abs=1e-30)


def test_kernel_limits_are_exact():
    for n in range(21):
        assert dirichlet_kernel(n, 0.0) == 2 * n + 1
        assert fejer_kernel(n, 0.0) == n + 1
        # pole repeats every 2L
        assert dirichlet_kernel(n, 2 * math.pi) == 2 * n + 1


def test_fejer_is_mean_of_dirichlet():
    rng = np.random.default_rng(3)
    x = rng.uniform(-math.pi, math.pi, 100)
    for n in range(21):
        brute = sum(dirichlet_kernel(k, x) for k in range(n + 1)) / (n + 1)
        assert np.max(np.abs(fejer_kernel(n, x) - brute)) <= 1e-9


def test_kernel_signs():
    x = default_grid(math.pi, 2001)
    for n in range(0, 15):
        assert np.all(fejer_kernel(n, x) >= 0)
        if n >= 1:
            assert np.any(dirichlet_kernel(n, x) < 0)


def test_partial_sum_of_constant_series():
    sig = PeriodicSignal(math.pi, FourierCoefficients(5.0, np.zeros(6), np.zeros(6)))
    for n in range(7):
        assert partial_sum(sig, n, 0.37) == 2.5


def test_partial_sum_square_wave_coeffs_route():
    sig = catalog_signal("seismic-square", kmax=5)
    assert partial_sum(sig, 1, math.pi / 2) == pytest.approx(4 / math.pi, abs=1e-14)


def test_route_equivalence_band_limited():
    L = math.pi
    sig = PeriodicSignal.from_coefficients(
        FourierCoefficients(0.0, np.array([1.0, 0, 0]), np.zeros(3)), L)
    x = np.linspace(-L, L, 32)
    for n in range(4):
        a = partial_sums(sig, n, x, "coeffs")[n]
        b = partial_sums(sig, n, x, "dirichlet")[n]
        assert np.max(np.abs(a - b)) <= 1e-6
    assert partial_sum(sig, 3, x, "dirichlet") == pytest.approx(np.cos(x), abs=1e-10)


def test_partial_sum_requires_representation():
    with pytest.raises(ConfigurationError):
        partial_sum(sign_wave(), 2, 0.1, "coeffs")
    coeffs_only = PeriodicSignal(math.pi, FourierCoefficients(1.0, [0.0], [0.0]))
    with pytest.raises(ConfigurationError):
        partial_sum(coeffs_only, 1, 0.1, "dirichlet")
    with pytest.raises(ConfigurationError):
        partial_sum(coeffs_only, 3, 0.1, "coeffs")


def test_fejer_mean_of_constant():
    sig = PeriodicSignal(2.0, evaluator=lambda x: np.full(np.shape(x), -1.5))
    for n in (0, 3, 10):
        assert cesaro_via_fejer(sig, n, 0.3) == pytest.approx(-1.5, abs=TOL)


def test_fejer_midpoint_at_jump():
    assert abs(cesaro_via_fejer(sign_wave(), 50, 0.0)) <= 0.05


def test_fejer_equals_mean_of_dirichlet_sums():
    sig = catalog_signal("triangle", kmax=12)
    x = np.linspace(-math.pi, math.pi, 16)
    S = partial_sums(sig, 10, x, "dirichlet")
    assert np.max(np.abs(cesaro_via_fejer(sig, 10, x) - S.mean(axis=0))) <= 2e-6


def test_periodicity():
    sig = catalog_signal("sawtooth", kmax=8)
    x = np.array([-2.0, -0.4, 0.9, 2.7])
    L = sig.L
    np.testing.assert_allclose(sig(x + 2 * L), sig(x), rtol=0, atol=1e-13)
    np.testing.assert_allclose(partial_sum(sig, 5, x + 2 * L, "dirichlet"),
                               partial_sum(sig, 5, x, "dirichlet"), atol=1e-12)
    np.testing.assert_allclose(cesaro_via_fejer(sig, 5, x + 2 * L),
                               cesaro_via_fejer(sig, 5, x), atol=1e-12)


def test_l2_norm_values():
    L = math.pi
    x = default_grid(L)
    assert l2_norm(GridFunction(x, np.full_like(x, 2.5))) == pytest.approx(2.5 * math.sqrt(2 * L))
    assert l2_norm(GridFunction(x, np.sin(x))) == pytest.approx(math.sqrt(math.pi), rel=1e-9)
    assert l2_norm(GridFunction(x, np.zeros_like(x))) == 0.0


def test_grid_function_validation():
    with pytest.raises(ConfigurationError):
        GridFunction([-1.0, 1.0], [0.0, 0.0])
    with pytest.raises(ConfigurationError):
        GridFunction([-1.0, 0.5, 0.2, 1.0], [0.0] * 4)
    with pytest.raises(ConfigurationError):
        GridFunction([0.0, 0.5, 1.0], [0.0] * 3)


@settings(max_examples=50, deadline=None)
@given(st.floats(-1e3, 1e3, allow_nan=False), st.integers(0, 2 ** 32 - 1))
def test_l2_norm_homogeneous(c, seed):
    x = default_grid(2.0, 257)
    gf = GridFunction(x, np.random.default_rng(seed).normal(size=x.size))
    assert l2_norm(c * gf) == pytest.approx(abs(c) * l2_norm(gf), rel=1e-12, abs=1e-300)


def test_consistency_check():
    sig = catalog_signal("square", kmax=6)
    assert sig.check_consistency() <= TOL
    bad = PeriodicSignal(sig.L, FourierCoefficients(3.0, sig.coeffs.a, sig.coeffs.b),
                         sig.evaluator)
    with pytest.raises(ConfigurationError):
        bad.check_consistency()

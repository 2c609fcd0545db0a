import numpy as np
import pytest

from summa.catalog import catalog_signal, jumps_of
from summa.errors import ConfigurationError, DomainError
from summa.means import rho_values, sigma_values, theta_values
from summa.regularization import (RegularizedTrace, ShiftConfig, default_beta, interior_mask,
                                  recover, regularized_rho, regularized_theta,
                                  rho_closed_form, shift_signal)
from summa.series_core import partial_sums

X = np.linspace(-np.pi, np.pi, 256)


@pytest.fixture(scope="module")
def seismic():
    return catalog_signal("seismic-square", kmax=200)


def test_shift_config_validation():
    with pytest.raises(ConfigurationError):
        ShiftConfig(0.0, 10)
    with pytest.raises(ConfigurationError):
        ShiftConfig(1.0, 0)
    with pytest.raises(ConfigurationError):
        ShiftConfig(1.0, 5, recovery_tolerance=0)


def test_shift_signal_moves_constant_term(seismic):
    shifted = shift_signal(seismic, 3.0)
    assert shifted.coeffs.a0 == pytest.approx(6.0)
    np.testing.assert_allclose(shifted(X), seismic(X) + 3.0)
    np.testing.assert_allclose(partial_sums(shifted, 5, X), partial_sums(seismic, 5, X) + 3.0)
    with pytest.raises(ConfigurationError):
        shift_signal(seismic, 0.0)


def test_zero_mean_kills_unshifted_harmonic_mean(seismic):
    S = partial_sums(seismic, 5, X)
    assert np.all(S[0] == 0)
    with pytest.raises(DomainError):
        theta_values(S)


def test_default_beta(seismic):
    assert default_beta(seismic, X) == pytest.approx(10.0)
    zero = catalog_signal("constant", value=0.0)
    assert default_beta(zero, X) == 1.0


def test_regularized_theta_is_theta_of_shifted_sums(seismic):
    tr = regularized_theta(seismic, 10.0, 30, X)
    Z = partial_sums(seismic, 30, X) + 10.0
    np.testing.assert_allclose(tr.shifted_sums, Z, atol=1e-12)
    np.testing.assert_allclose(tr.values, theta_values(Z), rtol=1e-12)
    np.testing.assert_allclose(recover(tr), tr.values - 10.0)
    assert tr.start == 0


def test_regularized_rho_first_principles(seismic):
    tr = regularized_rho(seismic, 10.0, 30, X)
    assert tr.start == 1
    np.testing.assert_allclose(tr.values, rho_values(tr.shifted_sums), rtol=1e-12)
    assert tr.discrepancy.shape == tr.values.shape


def test_rho_closed_form_oracle():
    S = np.array([0.5, -0.2, 0.3, 0.1])
    beta = 4.0
    sig = sigma_values(S)
    expected = []
    for n in range(1, 4):
        prod = 1.0
        for k in range(1, n + 1):
            prod *= (S[k] + beta) / ((k + 1) * sig[k] + beta)
        expected.append((n + 1) * beta * prod)
    np.testing.assert_allclose(rho_closed_form(S, beta), expected)


def test_rho_closed_form_differs_from_product():
    # the closed form and the defining product disagree once S_0 != 0
    S = np.array([1.0, 2.0, 3.0])
    beta = 5.0
    assert not np.allclose(rho_closed_form(S, beta), rho_values(S + beta))


@pytest.mark.parametrize("beta", [10.0, 20.0])
def test_theta_recovery_interior(seismic, beta):
    x = np.linspace(-np.pi, np.pi, 1024)
    mask = interior_mask(x, np.pi, jumps_of(seismic))
    rec = recover(regularized_theta(seismic, beta, 200, x))
    assert np.max(np.abs(rec[-1] - seismic(x))[mask]) < 5e-2


def test_theta_recovery_insensitive_to_beta(seismic):
    x = np.linspace(-np.pi, np.pi, 1024)
    mask = interior_mask(x, np.pi, jumps_of(seismic), band=0.1)
    a = recover(regularized_theta(seismic, 10.0, 200, x))[-1]
    b = recover(regularized_theta(seismic, 20.0, 200, x))[-1]
    assert np.max(np.abs(a - b)[mask]) < 1e-3


def test_rho_recovery_is_biased_away_from_signal(seismic):
    # the product keeps the factor Z_0 / sigma*_1, so rho* drifts when Z_0 is off the limit
    x = np.linspace(-np.pi, np.pi, 512)
    mask = interior_mask(x, np.pi, jumps_of(seismic))
    rho = recover(regularized_rho(seismic, 10.0, 200, x))[-1]
    theta = recover(regularized_theta(seismic, 10.0, 200, x))[-1]
    assert np.max(np.abs(rho - theta)[mask]) > 1.0


def test_vanishing_shifted_sum():
    sig = catalog_signal("constant", value=-2.0)
    with pytest.raises(DomainError):
        regularized_theta(sig, 2.0, 5, X)


def test_recover_bare_array():
    np.testing.assert_allclose(recover(np.array([3.0, 4.0]), beta=3.0), [0.0, 1.0])
    with pytest.raises(ConfigurationError):
        recover(np.array([1.0]))


def test_trace_final():
    tr = RegularizedTrace("theta", 1.0, X[:2], np.array([[1.0, 2.0], [3.0, 4.0]]),
                          np.zeros((2, 2)))
    assert tr.final().tolist() == [3.0, 4.0]
    assert tr.discrepancy is None


def test_interior_mask():
    x = np.array([-np.pi, -2.9, -0.1, 0.0, 0.1, 1.0, 2.9])
    keep = interior_mask(x, np.pi, jumps=(0.0, np.pi), band=0.05)
    assert keep.tolist() == [False, True, False, False, False, True, True]
    assert interior_mask(x, np.pi, jumps=()).all()

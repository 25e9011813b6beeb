import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellschub.errors import InvalidArgumentError, InvalidParamsError
from ellschub.theta import ModularParams, theta, theta_series_oracle, truncation_for

coord = st.floats(-0.5, 0.5, allow_nan=False)


def test_degenerate_modulus_gives_sine(params):
    # q ~ 2e-14: every product factor is 1 to double precision
    p = ModularParams.build(tau=5j)
    x = np.array([0.1, 0.3 + 0.2j, -0.4 - 0.1j])
    assert np.allclose(theta(x, p), np.sin(np.pi * x) / np.pi, rtol=1e-12, atol=0)


def test_half_period_closed_form(params):
    # u^{1/2} = i at x = 1/2, so theta(1/2) = prod((1+q^s)/(1-q^s))^2 / pi
    q = params.q
    s = np.arange(1, params.truncation + 1)
    expected = np.prod(((1 + q**s) / (1 - q**s)) ** 2) / np.pi
    assert abs(theta(0.5, params) - expected) < 1e-14 * abs(expected)


def test_truncation_default():
    # |q| = exp(-1.6 pi) ~ 6.6e-3, so ten factors reach 1e-20
    assert truncation_for(0.8j) == 10
    assert truncation_for(0.01j, cap=200) == 200
    assert ModularParams.build().truncation == 10


def test_zero_at_lattice(params):
    for x in (0.0, 1.0, params.tau, 1 + params.tau):
        assert abs(theta(x, params)) < 1e-12


def test_unit_derivative(params):
    n, eps = 16, 0.1
    om = np.exp(2j * np.pi * np.arange(n) / n)
    assert abs(np.mean(theta(eps * om, params) / om) / eps - 1) < 1e-12


def test_oracle_agreement_grid(params):
    rng = np.random.default_rng(7)
    x = rng.uniform(-0.5, 0.5, 200) + 1j * rng.uniform(-0.5, 0.5, 200)
    a, b = theta(x, params), theta_series_oracle(x, params)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-12


def test_scalar_and_array_forms(params):
    assert isinstance(theta(0.1, params), complex)
    assert theta(np.zeros((2, 3)) + 0.1, params).shape == (2, 3)


def test_rejects_non_finite(params):
    with pytest.raises(InvalidArgumentError):
        theta(np.nan, params)
    with pytest.raises(InvalidArgumentError):
        theta_series_oracle(np.array([0.1, np.inf]), params)


@pytest.mark.parametrize("tau", [-0.5j, 0.3, 0j])
def test_rejects_lower_half_plane(tau):
    with pytest.raises(InvalidParamsError):
        ModularParams.build(tau=tau)


@pytest.mark.parametrize("hbar", [0, 1, 0.8j, 0.5, 0.4j])
def test_rejects_degenerate_hbar(hbar):
    # lattice points and half periods
    with pytest.raises(InvalidParamsError):
        ModularParams.build(hbar=hbar)


@settings(max_examples=60, deadline=None)
@given(coord, coord)
def test_quasi_periodicity(re, im):
    p = ModularParams.build()
    x = complex(re, im)
    t = theta(x, p)
    scale = max(1.0, abs(t))
    assert abs(theta(x + 1, p) + t) < 1e-12 * scale
    shifted = -np.exp(-1j * np.pi * p.tau - 2j * np.pi * x) * t
    assert abs(theta(x + p.tau, p) - shifted) < 1e-12 * max(1.0, abs(shifted))
    assert abs(theta(-x, p) + t) < 1e-14 * scale


@settings(max_examples=40, deadline=None)
@given(coord, coord, st.floats(0.4, 2.0), st.floats(-0.5, 0.5))
def test_product_matches_series(re, im, tau_im, tau_re):
    p = ModularParams.build(tau=complex(tau_re, tau_im))
    x = complex(re, im)
    a, b = theta(x, p), theta_series_oracle(x, p)
    assert abs(a - b) <= 1e-11 * max(abs(b), 1e-3)

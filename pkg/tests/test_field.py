import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellschub.errors import InvalidArgumentError, PanelConstructionError, PoleError
from ellschub.field import (
    FunctionField,
    bfg,
    bfh,
    equals,
    random_theta_quotient,
    sample_panel,
    theta_lin,
    theta_pi,
)
from ellschub.roots import act_on_lambda, act_on_z, build_root_system
from ellschub.theta import theta

from conftest import get_field


def test_panel_is_deterministic(params):
    d = build_root_system("A", 2)
    a = sample_panel(5, 10, d, params)
    b = sample_panel(5, 10, d, params)
    assert a == b
    assert sample_panel(6, 10, d, params) != a
    assert len(a) == 10


def test_panel_respects_guard(B2):
    d, p = B2.datum, B2.params
    roots = np.array(d.positive_roots, dtype=float)
    coroots = np.array(d.positive_coroots, dtype=float)
    zr = B2.Z @ roots.T
    lr = B2.L @ coroots.T
    for arg in (zr, lr):
        for shift in (0, p.hbar, -p.hbar):
            assert np.min(np.abs(theta(arg + shift, p))) > B2.panel.pole_guard
    assert np.all(np.abs(B2.panel.z.real) < 0.45) and np.all(np.abs(B2.panel.lam.imag) < 0.45)


def test_panel_errors(params):
    d = build_root_system("A", 1)
    with pytest.raises(PanelConstructionError):
        sample_panel(0, 3, d, params, pole_guard=1e6, max_draws=50)
    with pytest.raises(InvalidArgumentError):
        sample_panel(0, 0, d, params)


def test_atom_values_match_direct_evaluation(A2):
    # theta(hbar - z_alpha) at the translate u.z must equal theta(hbar - alpha(u.z))
    d, W = A2.datum, A2.datum.weyl
    alpha = d.positive_roots[2]
    f = theta_lin(A2, 1, -1, "z", alpha)
    for u in range(W.size):
        for k in range(A2.P):
            uz = act_on_z(W[u], A2.panel.z[k])
            assert np.isclose(f.at(k, u, 0), theta(A2.params.hbar - uz @ np.array(alpha), A2.params))
    g = theta_lin(A2, 0, 1, "lambda", 0)
    for v in range(W.size):
        vl = act_on_lambda(W[v], A2.panel.lam[3])
        assert np.isclose(g.at(3, 0, v), theta(vl[0], A2.params))


def test_actions_are_translations(A2):
    # (^w f)(z) = f(w^{-1} z): evaluated directly for a non-invariant atom
    W = A2.datum.weyl
    f = theta_lin(A2, 0, 1, "z", 0)
    for w in range(W.size):
        winv = W[W.inverse[w]]
        direct = [theta(act_on_z(winv, z)[0], A2.params) for z in A2.panel.z]
        assert np.allclose(f.weyl(w).on_panel(), direct)
        # dynamical action leaves a z-only function alone
        assert equals(f.dyn(w), f)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 2**16))
def test_action_composition(u, v, seed):
    F = get_field("A", 2)
    W = F.datum.weyl
    f = random_theta_quotient(F, np.random.default_rng(seed))
    uv = W.mult(u, v)
    assert equals(f.weyl(v).weyl(u), f.weyl(uv), tol=1e-14)
    assert equals(f.dyn(v).dyn(u), f.dyn(uv), tol=1e-14)
    assert equals(f.weyl(u).dyn(v), f.dyn(v).weyl(u), tol=1e-14)


def test_g_and_h_transform_by_longest_element(A2):
    # ^{w0} theta_Pi(z) = (-1)^{|Pi|} theta_Pi(z), so g picks up theta(hbar + z) factors
    W = A2.datum.weyl
    g, h = bfg(A2), bfh(A2)
    w0 = W.longest
    assert equals(g.weyl(w0), theta_pi(A2, "hbar+z") / theta_pi(A2, "z") * (-1) ** 3)
    assert equals(h.dyn(w0), theta_pi(A2, "hbar+lambda") / theta_pi(A2, "lambda") * (-1) ** 3)


def test_equals_reports_witness(A2):
    f = theta_lin(A2, 0, 1, "z", 0)
    c = equals(f, -f)
    assert not c
    p, u, v = c.witness
    val = f.at(p, u, v)
    assert np.isclose(c.residual, 2 * abs(val) / max(1, abs(val)))
    assert equals(f, f)


def test_pole_error_names_point(A2):
    z0 = A2.zero()
    with pytest.raises(PoleError) as err:
        A2.one() / z0
    assert err.value.point == (0, 0, 0)
    with pytest.raises(PoleError):
        1 / (theta_lin(A2, 0, 1, "z", 0) * 0)


def test_mixed_contexts_rejected(A2, B2):
    with pytest.raises(InvalidArgumentError):
        A2.one() + B2.one()


def test_size_limit(params):
    d = build_root_system("A", 5)
    panel = sample_panel(0, 20, d, params)
    with pytest.raises(InvalidArgumentError):
        FunctionField(d, params, panel)


def test_arithmetic_with_scalars(A2):
    f = theta_lin(A2, 1, 1, "z", 1)
    assert equals(2 * f - f, f)
    assert equals((f + 1) - 1, f)
    assert equals(f / f, 1)
    assert equals(1 / (1 / f), f, tol=1e-13)

"""Acceptance criteria 1-11, one PASS/FAIL line each.

Every criterion runs on seed 0 with 20-point panels. The status lines are
printed with capture disabled so they show up in plain ``pytest -v`` runs.
"""
import time

import numpy as np
import pytest

from ellschub.algebra import (
    MUTATION_SITES,
    DemazureLusztig,
    alg_identity,
    alg_mul,
    algebra_equals,
    anti_involution,
    bernstein_sides,
    bernstein_test_functions,
)
from ellschub.duals import (
    bullet_q,
    elliptic_class,
    opposite_class,
    pairing,
    poincare_scalar,
    q_equals,
    q_unit,
    right_dl_action,
)
from ellschub.field import build_field, residual
from ellschub.theta import ModularParams, theta, theta_series_oracle
from ellschub.verify import VerifyContext, suite_dual, suite_transition

SEED, PANEL = 0, 20
_FIELDS = {}


def field(label, rank):
    key = (label, rank)
    if key not in _FIELDS:
        _FIELDS[key] = build_field(label, rank, seed=SEED, count=PANEL)
    return _FIELDS[key]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
        return ok
    return emit


def _named(results, prefixes):
    return [r for r in results if r.name.split("[")[0] in prefixes]


def test_c01_theta_oracle(report):
    p = ModularParams.build()
    rng = np.random.default_rng(SEED)
    x = rng.uniform(-0.5, 0.5, 100) + 1j * rng.uniform(-0.5, 0.5, 100)
    t0 = time.perf_counter()
    a = theta(x, p)
    b = theta_series_oracle(x, p)
    elapsed = time.perf_counter() - t0
    res = float(np.max(np.abs(a - b) / np.abs(b)))
    ok = res < 1e-12 and elapsed < 1.0
    assert report(1, ok, f"theta product vs series, 100 points: max rel {res:.2e}, {elapsed:.3f}s"), res


QUAD_TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("G", 2)]


def test_c02_quadratic(report):
    t0 = time.perf_counter()
    worst, where = 0.0, ""
    for key in QUAD_TYPES:
        F = field(*key)
        dl = DemazureLusztig(F)
        for sign in (1, -1):
            for i in range(F.datum.rank):
                T = dl.simple(i, sign)
                cmp = algebra_equals(alg_mul(T, T), alg_identity(F), tol=1e-8)
                if cmp.residual >= worst:
                    worst, where = cmp.residual, f"{F.datum.name} i={i + 1} sign={sign:+d}"
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 5.0
    assert report(2, ok, f"(T_i)^2 = 1 in A1 A2 A3 B2 G2: max {worst:.2e} ({where}), {elapsed:.2f}s")


def test_c03_braid(report):
    worst, where, count = 0.0, "", 0
    for key in [("A", 2), ("A", 3), ("B", 2), ("G", 2)]:
        F = field(*key)
        dl = DemazureLusztig(F)
        W = F.datum.weyl
        for sign in (1, -1):
            for i in range(F.datum.rank):
                for j in range(i + 1, F.datum.rank):
                    m = W.braid_order(i, j)
                    lhs = dl.word_from([(i, j)[k % 2] for k in range(m)], sign)
                    rhs = dl.word_from([(j, i)[k % 2] for k in range(m)], sign)
                    cmp = algebra_equals(lhs, rhs, tol=1e-8)
                    count += 1
                    if cmp.residual >= worst:
                        worst, where = cmp.residual, f"{F.datum.name} ({i + 1},{j + 1}) m={m} sign={sign:+d}"
    assert report(3, worst < 1e-8, f"{count} braid relations: max {worst:.2e} ({where})")


def test_c04_orthogonality(report):
    lines, ok = [], True
    for key in [("A", 2), ("A", 3), ("B", 2)]:
        F = field(*key)
        res = _named(suite_transition(VerifyContext(F, 1e-7, SEED)), {"orthogonality_ab", "orthogonality_ba"})
        worst = max(r.residual for r in res)
        ok &= all(r.ok for r in res) and len(res) == 4
        lines.append(f"{F.datum.name} {worst:.1e}")
    assert report(4, ok, "a/b orthogonality, both orders and signs: " + ", ".join(lines))


def test_c05_diagonal(report):
    F = field("A", 3)
    res = _named(suite_transition(VerifyContext(F, 1e-8, SEED)), {"diagonal_a", "diagonal_b", "longest_element"})
    ok = all(r.ok for r in res) and len(res) == 5
    worst = max(r.residual for r in res)
    assert report(5, ok, f"leading coefficients for all 24 elements of A3 and w0 cases: max {worst:.2e}")


def test_c06_anti_involution(report):
    ok, parts = True, []
    for key in [("A", 2), ("B", 2)]:
        F = field(*key)
        dl = DemazureLusztig(F)
        W = F.datum.weyl
        worst = 0.0
        for w in range(W.size):
            cmp = algebra_equals(anti_involution(dl.word(w, 1)), dl.word(W.inverse[w], -1), tol=1e-7)
            worst = max(worst, cmp.residual)
        rev = _named(suite_transition(VerifyContext(F, 1e-7, SEED)), {"coefficient_reversal"})
        ok &= worst < 1e-7 and rev[0].ok
        parts.append(f"{F.datum.name} iota {worst:.1e} reversal {rev[0].residual:.1e}")
    assert report(6, ok, "; ".join(parts))


def test_c07_bernstein(report):
    F = field("A", 2)
    dl = DemazureLusztig(F)
    worst, count = 0.0, 0
    for i in range(F.datum.rank):
        funcs = bernstein_test_functions(F, i)
        assert len(funcs) == 5
        for a in funcs:
            for sign in (1, -1):
                cmp = algebra_equals(*bernstein_sides(dl, i, a, sign), tol=1e-7)
                worst = max(worst, cmp.residual)
                count += 1
    assert report(7, worst < 1e-7, f"Bernstein relation, {count} cases in A2: max {worst:.2e}")


DUAL_LAWS = {
    "star_module_law", "q_module_law", "projection_equivariant", "star_scalar_compat",
    "star_delta_compat", "star_unit", "q_unit", "projection_section", "embedding_multiplicative",
    "top_basis_dual", "top_basis_expansion",
}


def test_c08_dual_laws(report):
    res = _named(suite_dual(VerifyContext(field("A", 2), 1e-7, SEED)), DUAL_LAWS)
    assert len(res) == len(DUAL_LAWS)
    bad = [r.name for r in res if not r.ok]
    worst = max(r.residual for r in res)
    assert report(8, not bad, f"{len(res)} dual-module laws in A2: max {worst:.2e} {bad or ''}")


def test_c09_schubert_structure(report):
    ok, parts = True, []
    for key in [("A", 2), ("A", 3)]:
        F = field(*key)
        W = F.datum.weyl
        dl = DemazureLusztig(F)
        E = [elliptic_class(dl, w) for w in range(W.size)]
        e_exact = set(E[0].terms) == {0} and np.array_equal(E[0].terms[0].values, F.one().values)
        worst = 0.0
        for w in range(W.size):
            for i in range(F.datum.rank):
                s = W.simple_reflection(i)
                worst = max(worst, q_equals(bullet_q(dl.simple(i), E[w]), E[W.mult(w, s)]).residual)
                worst = max(worst, q_equals(right_dl_action(dl, w, i), E[W.mult(s, w)]).residual)
        # supports with pruning disabled
        raw = DemazureLusztig(F, prune=False)
        sup = 0.0
        for w in range(W.size):
            cls = elliptic_class(raw, w)
            scale = max(1.0, max(float(np.max(np.abs(c.values))) for c in cls.terms.values()))
            for v, c in cls.terms.items():
                if not W.bruhat_leq(v, w):
                    sup = max(sup, float(np.max(np.abs(c.values))) / scale)
            missing = {v for v in range(W.size) if W.bruhat_leq(v, w)} - set(cls.terms)
            ok &= not missing
        ok &= e_exact and worst < 1e-8 and sup < 1e-10
        parts.append(f"{F.datum.name} E_e exact={e_exact} recursions {worst:.1e} off-support {sup:.1e}")
    assert report(9, ok, "; ".join(parts))


def _poincare(key):
    F = field(*key)
    dl = DemazureLusztig(F)
    N = F.N
    c = poincare_scalar(F)
    E = [elliptic_class(dl, w, 1) for w in range(N)]
    O = [opposite_class(dl, v, -1) for v in range(N)]
    worst, pairs = 0.0, 0
    for w in range(N):
        for v in range(N):
            got = pairing(E[w], O[v])
            target = q_unit(F) * c if w == v else q_unit(F) * 0.0
            for u in range(N):
                res, _ = residual(got.coefficient(u), target.coefficient(u))
                worst = max(worst, res)
            pairs += 1
    return worst, pairs


def test_c10_poincare_duality(report):
    ok, parts = True, []
    for key, expected in [(("A", 2), 36), (("A", 3), 576), (("B", 2), 64)]:
        t0 = time.perf_counter()
        worst, pairs = _poincare(key)
        elapsed = time.perf_counter() - t0
        ok &= worst < 1e-6 and pairs == expected
        if key == ("A", 3):
            ok &= elapsed < 300
        parts.append(f"{key[0]}{key[1]} {pairs} pairs {worst:.1e} ({elapsed:.1f}s)")
    assert report(10, ok, "pairing(E_w, opposite_v) = delta * scalar: " + "; ".join(parts))


def test_c11_mutation_sensitivity(report):
    F = field("A", 2)
    caught = []
    for site in MUTATION_SITES:
        dl = DemazureLusztig(F, mutation=site, mutated_root=0)
        failed = False
        for sign in (1, -1):
            for i in range(2):
                T = dl.simple(i, sign)
                failed |= not algebra_equals(alg_mul(T, T), alg_identity(F), tol=1e-8)
            failed |= not algebra_equals(dl.word_from([0, 1, 0], sign), dl.word_from([1, 0, 1], sign), tol=1e-8)
        caught.append(failed)
    missed = [s for s, c in zip(MUTATION_SITES, caught) if not c]
    assert report(11, not missed, f"{sum(caught)}/{len(MUTATION_SITES)} sign mutations detected {missed or ''}")


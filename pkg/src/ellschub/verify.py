"""Verification suites: every identity is checked on the sample panel.

Each suite returns a list of :class:`CheckResult`. Residuals are the worst
relative pointwise discrepancy over all instances of the identity (all
Weyl elements, simple roots, random inputs), and the witness names the
instance and panel point where it occurred.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import (
    AlgebraElement,
    DemazureLusztig,
    algebra_equals,
    alg_identity,
    alg_mul,
    alg_zero,
    anti_involution,
    bernstein_sides,
    bernstein_test_functions,
    delta,
    delta_dyn,
    field_g,
    monomial,
    scalar,
    two_reflection_sides,
)
from .duals import (
    QDualElement,
    StarDualElement,
    aux_dual_class,
    bullet_q,
    bullet_star,
    dyn_sum,
    elliptic_class,
    embed_phi,
    f_basis,
    opposite_class,
    pairing,
    poincare_scalar,
    project_pi,
    push_forward,
    q_equals,
    q_product,
    q_unit,
    right_dl_action,
    star_basis,
    star_equals,
    star_evaluate,
    star_product,
    star_right_mul,
    star_unit,
    t_star_dual,
    y_full,
    y_prime,
)
from .errors import InvalidArgumentError
from .field import Comparison, FunctionField, bfh, equals
from .theta import theta, theta_series_oracle

ORACLE_TOL = 1e-12
SUPPORT_REL = 1e-10
SUITES = ("algebra", "dual", "pairing", "theta", "transition")
SIGNS = ((1, "+lambda"), (-1, "-lambda"))


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    description: str
    residual: float
    tol: float
    witness: str = ""

    @property
    def ok(self) -> bool:
        return bool(self.residual < self.tol)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{status}  {self.suite:<10s} {self.name:<34s} residual={self.residual:.3e} tol={self.tol:.1e}"
        if not self.ok and self.witness:
            text += f"  witness: {self.witness}"
        return text

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "description": self.description,
            "residual": self.residual,
            "tol": self.tol,
            "ok": self.ok,
            "witness": self.witness,
        }


class _Worst:
    """Running maximum of residuals with the instance that produced it."""

    def __init__(self, field: FunctionField):
        self.field = field
        self.residual = 0.0
        self.witness = ""
        self._seen = False

    def add(self, cmp: Comparison | float, instance: str = ""):
        if isinstance(cmp, Comparison):
            res = cmp.residual
            where = describe_witness(self.field, cmp)
        else:
            res, where = float(cmp), ""
        if math.isnan(res):
            res = math.inf
        if res > self.residual or not self._seen:
            self.residual = res
            self.witness = ", ".join(t for t in (instance, where) if t)
            self._seen = True
        return self


def describe_witness(field: FunctionField, cmp: Comparison) -> str:
    parts = []
    if cmp.label:
        parts.append(str(cmp.label))
    if cmp.witness is not None:
        W = field.datum.weyl
        if len(cmp.witness) == 3:
            p, u, v = cmp.witness
            parts.append(f"point {p} (z by {W[u].label}, lambda by {W[v].label})")
        else:
            parts.append(f"at {cmp.witness}")
    return " ".join(parts)


class VerifyContext:
    """Field, DL operators and seeded randomness shared by the suites."""

    def __init__(self, field: FunctionField, tol: float = 1e-8, seed: int = 0,
                 mutation=None, mutated_root: int = 0):
        self.field = field
        self.tol = float(tol)
        self.seed = int(seed)
        self.dl = DemazureLusztig(field, mutation=mutation, mutated_root=mutated_root)
        self._classes = {}

    @property
    def W(self):
        return self.field.datum.weyl

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, salt])

    def result(self, suite, name, description, worst: _Worst, tol=None) -> CheckResult:
        return CheckResult(suite, name, description, float(worst.residual),
                           self.tol if tol is None else tol, worst.witness)

    def lab(self, w) -> str:
        return self.W[w].label

    def classes(self, kind: str):
        if kind not in self._classes:
            N = self.W.size
            if kind == "E":
                self._classes[kind] = [elliptic_class(self.dl, w, 1) for w in range(N)]
            elif kind == "opp":
                self._classes[kind] = [opposite_class(self.dl, w, -1) for w in range(N)]
            elif kind == "aux":
                self._classes[kind] = [aux_dual_class(self.dl, w, -1) for w in range(N)]
        return self._classes[kind]


# ---------------------------------------------------------------------------
# random inputs


def random_coefficient(field: FunctionField, rng) -> "FieldElement":  # noqa: F821
    """Random constant times a product of one z-atom and one lambda-atom.

    No denominators, so values stay moderate on the guarded panel.
    """
    n = field.datum.rank
    d = field.datum
    root = d.positive_roots[rng.integers(len(d.positive_roots))]
    coroot = d.positive_coroots[rng.integers(len(d.positive_coroots))]
    c = complex(rng.normal(), rng.normal())
    zc = [int(rng.choice([-1, 1])) * v for v in root]
    lc = [int(rng.choice([-1, 1])) * v for v in coroot]
    out = field.const(c) * field.theta_affine(int(rng.integers(0, 2)), zc) \
        * field.theta_affine(int(rng.integers(0, 2)), None, lc)
    out.description = f"random coefficient (rank {n})"
    return out


def random_algebra_element(field, rng, terms=3, dyn=True, fin=True) -> AlgebraElement:
    N = field.N
    out = {}
    for _ in range(terms):
        key = (int(rng.integers(N)) if dyn else 0, int(rng.integers(N)) if fin else 0)
        c = random_coefficient(field, rng)
        out[key] = out[key] + c if key in out else c
    return AlgebraElement(field, out)


def random_q_dual(field, rng, terms=3) -> QDualElement:
    out = {}
    for _ in range(terms):
        w = int(rng.integers(field.N))
        c = random_coefficient(field, rng)
        out[w] = out[w] + c if w in out else c
    return QDualElement(field, out)


def random_star_dual(field, rng, terms=3) -> StarDualElement:
    out = {}
    for _ in range(terms):
        w, u = int(rng.integers(field.N)), int(rng.integers(field.N))
        c = random_coefficient(field, rng)
        row = out.setdefault(w, {})
        row[u] = row[u] + c if u in row else c
    return StarDualElement(field, out)


# ---------------------------------------------------------------------------
# theta


def suite_theta(ctx: VerifyContext) -> list:
    F = ctx.field
    p = F.params
    rng = ctx.rng(1)
    x = rng.uniform(-0.5, 0.5, 100) + 1j * rng.uniform(-0.5, 0.5, 100)
    out = []

    prod = theta(x, p)
    series = theta_series_oracle(x, p)
    rel = np.abs(prod - series) / np.maximum(np.abs(series), 1e-300)
    k = int(np.argmax(rel))
    w = _Worst(F).add(float(rel[k]))
    w.witness = f"x = {x[k]:.6g}"
    out.append(ctx.result("theta", "product_vs_series",
                          "truncated product against the triple-product series at 100 seeded points",
                          w, tol=min(ORACLE_TOL, ctx.tol)))

    def scaled(a, b):
        r = np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        k = int(np.argmax(r))
        w = _Worst(F).add(float(r[k]))
        w.witness = f"x = {x[k]:.6g}"
        return w

    out.append(ctx.result("theta", "odd", "theta(-x) = -theta(x)", scaled(theta(-x, p), -prod)))
    out.append(ctx.result("theta", "period_one", "theta(x + 1) = -theta(x)", scaled(theta(x + 1, p), -prod)))
    factor = -np.exp(-1j * np.pi * p.tau - 2j * np.pi * x)
    out.append(ctx.result("theta", "period_tau", "theta(x + tau) = -exp(-pi i tau - 2 pi i x) theta(x)",
                          scaled(theta(x + p.tau, p), factor * prod)))
    # Cauchy average on a small circle: exponentially accurate derivative at 0
    n, eps = 16, 0.1
    om = np.exp(2j * np.pi * np.arange(n) / n)
    deriv = np.mean(theta(eps * om, p) / om) / eps
    out.append(ctx.result("theta", "unit_derivative", "theta'(0) = 1",
                          _Worst(F).add(abs(deriv - 1.0))))
    return out


# ---------------------------------------------------------------------------
# algebra


def suite_algebra(ctx: VerifyContext) -> list:
    F, dl, W = ctx.field, ctx.dl, ctx.W
    n = F.datum.rank
    out = []
    one = alg_identity(F)
    for sign, sl in SIGNS:
        w = _Worst(F)
        for i in range(n):
            T = dl.simple(i, sign)
            w.add(algebra_equals(alg_mul(T, T), one), f"s{i + 1}")
        out.append(ctx.result("algebra", f"quadratic[{sl}]", "T_i T_i = 1 for every simple root", w))

        w = _Worst(F)
        for i in range(n):
            for j in range(i + 1, n):
                m = W.braid_order(i, j)
                if m is None:
                    continue
                word_i = tuple((i, j)[k % 2] for k in range(m))
                word_j = tuple((j, i)[k % 2] for k in range(m))
                w.add(algebra_equals(dl.word_from(word_i, sign), dl.word_from(word_j, sign)),
                      f"s{i + 1},s{j + 1} (m={m})")
        out.append(ctx.result("algebra", f"braid[{sl}]", "braid relations on every rank-two subsystem", w))

        w = _Worst(F)
        for i in range(n):
            for k, a in enumerate(bernstein_test_functions(F, i)):
                lhs, rhs = bernstein_sides(dl, i, a, sign)
                w.add(algebra_equals(lhs, rhs), f"s{i + 1}, test function {k}")
        out.append(ctx.result("algebra", f"bernstein[{sl}]",
                              "T_i a = ^(s s^dyn)a T_i + B ^(s^dyn)(a - ^s a) delta_i^dyn", w))

    w = _Worst(F)
    for x in range(W.size):
        w.add(algebra_equals(anti_involution(dl.word(x, 1)), dl.word(W.inverse[x], -1)), ctx.lab(x))
    out.append(ctx.result("algebra", "anti_involution_on_T", "iota(T_w^lambda) = T^{-lambda}_{w^-1}", w))

    rng = ctx.rng(2)
    w_inv, w_anti = _Worst(F), _Worst(F)
    for trial in range(3):
        x = random_algebra_element(F, rng)
        y = random_algebra_element(F, rng)
        w_inv.add(algebra_equals(anti_involution(anti_involution(x)), x), f"trial {trial}")
        w_anti.add(algebra_equals(anti_involution(alg_mul(x, y, prune=False)),
                                  alg_mul(anti_involution(y), anti_involution(x), prune=False)),
                   f"trial {trial}")
    out.append(ctx.result("algebra", "anti_involution_involutive", "iota(iota(x)) = x", w_inv))
    out.append(ctx.result("algebra", "anti_involution_reverses", "iota(xy) = iota(y) iota(x)", w_anti))

    w_conj, w_solve, w_two = _Worst(F), _Worst(F), _Worst(F)
    for i in range(n):
        s = W.simple_reflection(i)
        dd = delta_dyn(F, s)
        w_conj.add(algebra_equals(alg_mul(alg_mul(dd, dl.simple(i, -1)), dd), dl.simple(i, 1)), f"s{i + 1}")
        e = [0] * n
        e[i] = 1
        ne = [-c for c in e]
        x_ = F.theta_affine(0, e)
        hx = F.theta_affine(1, ne)
        y_ = F.theta_affine(0, None, e)
        hpy = F.theta_affine(1, None, e)
        rhs = (alg_mul(monomial(-x_ * hpy / (hx * y_), w_dyn=s), dl.simple(i))
               + scalar(F.theta_affine(1) * F.theta_affine(0, e, e) / (hx * y_)))
        w_solve.add(algebra_equals(rhs, delta(F, s)), f"s{i + 1}")
        for j in range(n):
            lhs, rhs = two_reflection_sides(dl, i, j)
            w_two.add(algebra_equals(lhs, rhs), f"s{i + 1},s{j + 1}")
    out.append(ctx.result("algebra", "dynamical_conjugation", "delta_i^dyn T_i^{-lambda} delta_i^dyn = T_i^lambda", w_conj))
    out.append(ctx.result("algebra", "delta_in_terms_of_T", "delta_i expressed through T_i^lambda and delta_i^dyn", w_solve))
    out.append(ctx.result("algebra", "two_reflection_rule",
                          "delta_i^dyn T_i delta_j^dyn T_j rewritten through T_i T_j and T_j", w_two))
    return out


# ---------------------------------------------------------------------------
# transition matrices


def _inversion_products(F, W, w, sign):
    """Closed products for the diagonal transition coefficients of ``w``."""
    pa, pb = F.one(), F.one()
    for al in W.inversion_set(w):
        ac = F.datum.coroot_of(al)
        x = F.theta_affine(0, al)
        hx = F.theta_affine(1, [-c for c in al])
        y = F.theta_affine(0, None, [sign * c for c in ac])
        hy = F.theta_affine(1, None, [-sign * c for c in ac])
        pa = pa * hx * y / (x * hy)
        pb = pb * x / hx * F.dyn_act(W.inverse[w], hy / y)
    return pa, pb


def suite_transition(ctx: VerifyContext) -> list:
    F, dl, W = ctx.field, ctx.dl, ctx.W
    N = W.size
    zero, one = F.zero(), F.one()
    g, h = field_g(F), bfh(F)
    w0 = W.longest
    out = []
    for sign, sl in SIGNS:
        a = {w: dl.transition_a(w, sign) for w in range(N)}
        b = dl.transition_b(sign)

        def A(w, v):
            return a[w].get(v, zero)

        def B(w, v):
            return b.get((w, v), zero)
        w_ab, w_ba = _Worst(F), _Worst(F)
        for w in range(N):
            for u in range(N):
                target = one if w == u else zero
                acc = np.zeros(F.shape, dtype=np.complex128)
                for v, av in a[w].items():
                    if (v, u) in b:
                        kernels.twisted_fma(acc, av.values, F.ident, F.ident, b[(v, u)].values, F.ident, F.act[w])
                w_ab.add(equals(F.wrap(acc), target), f"(w, u) = ({ctx.lab(w)}, {ctx.lab(u)})")
                acc = np.zeros(F.shape, dtype=np.complex128)
                for v in range(N):
                    if (w, v) in b and u in a[v]:
                        kernels.twisted_fma(acc, b[(w, v)].values, F.ident, F.ident,
                                            a[v][u].values, F.ident, F.act[W.inverse[v]])
                w_ba.add(equals(F.wrap(acc), target), f"(w, u) = ({ctx.lab(w)}, {ctx.lab(u)})")
        out.append(ctx.result("transition", f"orthogonality_ab[{sl}]",
                              "sum_v a_{w,v} ^{w dyn}b_{v,u} = Kronecker delta", w_ab))
        out.append(ctx.result("transition", f"orthogonality_ba[{sl}]",
                              "sum_v b_{w,v} ^{v^-1 dyn}a_{v,u} = Kronecker delta", w_ba))

        w_da, w_db = _Worst(F), _Worst(F)
        for w in range(N):
            pa, pb = _inversion_products(F, W, w, sign)
            w_da.add(equals(A(w, w), pa), ctx.lab(w))
            w_db.add(equals(B(w, w), pb), ctx.lab(w))
        out.append(ctx.result("transition", f"diagonal_a[{sl}]",
                              "leading coefficient a_{w,w} as a product over the inversion set", w_da))
        out.append(ctx.result("transition", f"diagonal_b[{sl}]",
                              "leading coefficient b_{w,w} as a product over the inversion set", w_db))

        w_tri = _Worst(F)
        for w in range(N):
            for v in a[w]:
                if not W.bruhat_leq(v, w):
                    w_tri.add(float(np.max(np.abs(a[w][v].values))), f"a_({ctx.lab(w)},{ctx.lab(v)})")
        out.append(ctx.result("transition", f"triangular[{sl}]",
                              "a_{w,v} vanishes unless v <= w in Bruhat order", w_tri))

        w_rec = _Worst(F)
        for w in range(N):
            tot = alg_zero(F)
            for v in range(N):
                if (w, v) in b:
                    tot = tot + alg_mul(monomial(b[(w, v)], w_dyn=W.inverse[v]), dl.word(v, sign))
            w_rec.add(algebra_equals(tot, delta(F, w)), ctx.lab(w))
        out.append(ctx.result("transition", f"delta_expansion[{sl}]",
                              "delta_w = sum_v b_{w,v} delta^dyn_{v^-1} T_v", w_rec))

    ap, am = dl.transition_a(w0, 1), dl.transition_a(w0, -1)
    bp, bm = dl.transition_b(1), dl.transition_b(-1)
    w_long = _Worst(F)
    w_long.add(equals(ap[w0], g / h), "a^lambda_{w0,w0} = g/h")
    w_long.add(equals(bp[(w0, w0)], F.dyn_act(w0, h) / g), "b^lambda_{w0,w0} = ^{w0 dyn}h/g")
    w_long.add(equals(bm[(w0, w0)], h / g), "b^{-lambda}_{w0,w0} = h/g")
    w_long.add(equals(am[w0], g / F.dyn_act(w0, h)), "a^{-lambda}_{w0,w0} = g/^{w0 dyn}h")
    out.append(ctx.result("transition", "longest_element", "diagonal coefficients at w0 in terms of g and h", w_long))

    w_rev = _Worst(F)
    for w in range(N):
        apw = dl.transition_a(W.inverse[w], 1)
        amw = dl.transition_a(w, -1)
        for v in range(N):
            lhs = F.weyl_act(v, apw.get(W.inverse[v], zero) / g)
            rhs = F.dyn_act(W.inverse[w], amw.get(v, zero)) / g
            w_rev.add(equals(lhs, rhs), f"(w, v) = ({ctx.lab(w)}, {ctx.lab(v)})")
    out.append(ctx.result("transition", "coefficient_reversal",
                          "^v(a^lambda_{w^-1,v^-1}/g) = ^{w^-1 dyn}a^{-lambda}_{w,v}/g", w_rev))
    return out


# ---------------------------------------------------------------------------
# dual modules


def suite_dual(ctx: VerifyContext) -> list:
    F, dl, W = ctx.field, ctx.dl, ctx.W
    N = W.size
    n = F.datum.rank
    w0 = W.longest
    g, h = field_g(F), bfh(F)
    rng = ctx.rng(3)
    out = []

    def res(name, desc, worst):
        out.append(ctx.result("dual", name, desc, worst))

    # module laws and compatibilities on random inputs
    ws = {k: _Worst(F) for k in ("star_assoc", "star_unit", "star_p", "star_delta", "q_assoc",
                                 "q_unit", "q_linear", "pi_phi", "pi_equiv", "phi_mult", "q_comm")}
    for trial in range(3):
        t = f"trial {trial}"
        x = random_algebra_element(F, rng)
        y = random_algebra_element(F, rng)
        sg = random_star_dual(F, rng)
        sg2 = random_star_dual(F, rng)
        f = random_q_dual(F, rng)
        f2 = random_q_dual(F, rng)
        c = random_coefficient(F, rng)
        xy = alg_mul(x, y, prune=False)
        ws["star_assoc"].add(star_equals(bullet_star(xy, sg), bullet_star(x, bullet_star(y, sg))), t)
        ws["star_unit"].add(star_equals(bullet_star(alg_identity(F), sg), sg), t + ", identity acts")
        ws["star_unit"].add(star_equals(star_product(star_unit(F), sg), sg), t + ", left unit")
        ws["star_unit"].add(star_equals(star_product(sg, star_unit(F)), sg), t + ", right unit")
        p = random_algebra_element(F, rng, fin=False)
        ws["star_p"].add(star_equals(bullet_star(p, star_product(sg, sg2)),
                                     star_product(bullet_star(p, sg), sg2)), t)
        s = int(rng.integers(N))
        ds = delta(F, s)
        ws["star_delta"].add(star_equals(bullet_star(ds, star_product(sg, sg2)),
                                         star_product(bullet_star(ds, sg), bullet_star(ds, sg2))),
                             f"{t}, w = {ctx.lab(s)}")
        ws["q_assoc"].add(q_equals(bullet_q(xy, f), bullet_q(x, bullet_q(y, f))), t)
        ws["q_unit"].add(q_equals(bullet_q(alg_identity(F), f), f), t + ", identity acts")
        ws["q_unit"].add(q_equals(q_product(q_unit(F), f), f), t + ", unit")
        xw = random_algebra_element(F, rng, dyn=False)
        ws["q_linear"].add(q_equals(bullet_q(xw, f * c), bullet_q(xw, f) * c), t)
        ws["q_comm"].add(q_equals(q_product(f, f2), q_product(f2, f)), t)
        ws["pi_phi"].add(q_equals(project_pi(embed_phi(f)), f), t)
        ws["pi_equiv"].add(q_equals(project_pi(bullet_star(x, sg)), bullet_q(x, project_pi(sg))), t)
        ws["phi_mult"].add(star_equals(embed_phi(q_product(f, f2)),
                                       star_product(embed_phi(f), embed_phi(f2))), t)
    res("star_module_law", "(xy).g = x.(y.g) on the Q_{W^dyn}-dual", ws["star_assoc"])
    res("star_unit", "identity acts trivially and sum_w g_w is the unit", ws["star_unit"])
    res("star_scalar_compat", "p.(g g') = (p.g) g' for p in Q_{W^dyn}", ws["star_p"])
    res("star_delta_compat", "delta_w.(g g') = (delta_w.g)(delta_w.g')", ws["star_delta"])
    res("q_module_law", "(xy).f = x.(y.f) on the Q-dual", ws["q_assoc"])
    res("q_unit", "identity acts trivially and sum_w f_w is the unit", ws["q_unit"])
    res("q_linearity", "Q_W acts Q-linearly: x.(f c) = (x.f) c", ws["q_linear"])
    res("q_commutative", "the Q-dual product is commutative", ws["q_comm"])
    res("projection_section", "pi(phi(f)) = f", ws["pi_phi"])
    res("projection_equivariant", "pi(x.g) = x.pi(g)", ws["pi_equiv"])
    res("embedding_multiplicative", "phi(f f') = phi(f) phi(f')", ws["phi_mult"])

    # generator formulas
    w_gen = _Worst(F)
    for v in range(N):
        for u in range(N):
            w_gen.add(star_equals(bullet_star(delta(F, u), star_basis(F, v)),
                                  star_basis(F, W.mult(v, W.inverse[u]))), f"delta_{ctx.lab(u)} on g_{ctx.lab(v)}")
    res("star_delta_on_basis", "delta_w . g_v = g_{v w^-1}", w_gen)

    # dual basis
    w_ev = _Worst(F)
    for w in range(N):
        st = t_star_dual(dl, w, 1)
        for u in range(N):
            target = alg_identity(F) if u == w else alg_zero(F)
            w_ev.add(algebra_equals(star_evaluate(st, dl.word(u, 1)), target),
                     f"(T_{ctx.lab(w)})^star(T_{ctx.lab(u)})")
    res("dual_basis_evaluation", "(T_w)^star(T_u) = Kronecker delta", w_ev)

    w_lem, w_chain = _Worst(F), _Worst(F)
    for w in range(N):
        x = W.mult(W.inverse[w], w0)
        for sign, sl in SIGNS:
            lhs = bullet_star(dl.word(x, sign), star_basis(F, w0))
            hh = h if sign == 1 else F.dyn_act(w0, h)
            rhs = star_right_mul(t_star_dual(dl, w, sign), monomial(g / hh, w_dyn=w0))
            w_lem.add(star_equals(lhs, rhs), f"w = {ctx.lab(w)}, {sl}")
            if sign == -1:
                b = dl.transition_b(-1)
                c = g / F.dyn_act(x, h)
                chain = StarDualElement(F, {v: {x: b[(v, w)] * c} for v in range(N) if (v, w) in b})
                w_chain.add(star_equals(lhs, chain), f"w = {ctx.lab(w)}")
    res("top_basis_dual", "T_{w^-1 w0} . g_{w0} = (T_w)^star (g/h) delta^dyn_{w0}", w_lem)
    res("top_basis_expansion", "T^{-lambda}_{w^-1 w0} . g_{w0} expanded through b^{-lambda}", w_chain)

    # Schubert classes
    E, O, X = ctx.classes("E"), ctx.classes("opp"), ctx.classes("aux")
    w_e = _Worst(F).add(q_equals(E[0], f_basis(F, 0)), "E_e")
    w_e.add(q_equals(O[w0], f_basis(F, w0)), "opposite class at w0")
    res("base_classes", "E_e = f_e and the opposite class at w0 is f_{w0}", w_e)

    w_bs, w_bso, w_r = _Worst(F), _Worst(F), _Worst(F)
    for w in range(N):
        for i in range(n):
            s = W.simple_reflection(i)
            tag = f"w = {ctx.lab(w)}, i = {i + 1}"
            w_bs.add(q_equals(bullet_q(dl.simple(i, 1), E[w]), E[W.mult(w, s)]), tag)
            w_bso.add(q_equals(bullet_q(dl.simple(i, -1), O[w]), O[W.mult(w, s)]), tag)
            w_r.add(q_equals(right_dl_action(dl, w, i, 1), E[W.mult(s, w)]), tag)
    res("bott_samelson", "T_i . E_w = E_{w s_i}", w_bs)
    res("bott_samelson_opposite", "T_i^{-lambda} . opposite class at w = opposite class at w s_i", w_bso)
    res("r_matrix", "T_{w^-1} T_i . E_e = E_{s_i w}", w_r)

    w_res = _Worst(F)
    for w in range(N):
        aw = dl.transition_a(W.inverse[w], 1)
        for v in range(N):
            coeff = F.weyl_act(v, aw[W.inverse[v]]) if W.inverse[v] in aw else F.zero()
            w_res.add(equals(E[w].coefficient(v), coeff), f"(w, v) = ({ctx.lab(w)}, {ctx.lab(v)})")
    res("restriction_formula", "E_w = sum_{v <= w} f_v ^v a_{w^-1, v^-1}", w_res)

    w_sup = _Worst(F)
    for w in range(N):
        for v in range(N):
            below, above = W.bruhat_leq(v, w), W.bruhat_leq(w, v)
            for cls, inside, tag in ((E, below, "E"), (O, above, "opposite")):
                coeff = cls[w].terms.get(v)
                if coeff is None:
                    rel = 0.0
                else:
                    scale = max(1.0, max(float(np.max(np.abs(c.values))) for c in cls[w].terms.values()))
                    rel = float(np.max(np.abs(coeff.values))) / scale
                if not inside:
                    w_sup.add(rel, f"{tag} class {ctx.lab(w)} at f_{ctx.lab(v)}")
                elif tag == "E" and rel == 0.0:
                    w_sup.add(math.inf, f"E class {ctx.lab(w)} missing f_{ctx.lab(v)}")
    out.append(ctx.result("dual", "class_supports",
                          "supports are the Bruhat down-set (E) and inside the up-set (opposite)",
                          w_sup, tol=SUPPORT_REL))

    w_pe, w_br = _Worst(F), _Worst(F)
    am = {x: dl.transition_a(x, -1) for x in range(N)}
    bm = dl.transition_b(-1)
    for w in range(N):
        x = W.mult(W.inverse[w], w0)
        c = g / F.dyn_act(x, h)
        w_pe.add(q_equals(O[w], X[w] * c), ctx.lab(w))
        for u in range(N):
            y = W.mult(W.inverse[u], w0)
            lhs = F.weyl_act(u, am[x][y]) if y in am[x] else F.zero()
            rhs = bm[(u, w)] * c if (u, w) in bm else F.zero()
            w_br.add(equals(lhs, rhs), f"(u, w) = ({ctx.lab(u)}, {ctx.lab(w)})")
    res("opposite_via_auxiliary", "opposite class = (T_w^{-lambda})^* g / ^{(w^-1 w0) dyn}h", w_pe)
    res("a_b_bridge", "^u a^{-lambda}_{w^-1 w0, u^-1 w0} = b^{-lambda}_{u,w} g / ^{(w^-1 w0) dyn}h", w_br)
    return out


# ---------------------------------------------------------------------------
# pairing


def suite_pairing(ctx: VerifyContext) -> list:
    F, dl, W = ctx.field, ctx.dl, ctx.W
    N = W.size
    n = F.datum.rank
    w0 = W.longest
    g, h = field_g(F), bfh(F)
    E, O, X = ctx.classes("E"), ctx.classes("opp"), ctx.classes("aux")
    unit = q_unit(F)
    empty = QDualElement(F, {})
    inv_g = 1 / g
    out = []

    def res(name, desc, worst):
        out.append(ctx.result("pairing", name, desc, worst))

    w_fact = _Worst(F)
    w_fact.add(algebra_equals(y_full(F), alg_mul(dyn_sum(F), y_prime(F), prune=False)), "Y_Pi")
    yp = y_prime(F)
    w_fact.add(algebra_equals(yp, AlgebraElement(F, {(0, w): F.weyl_act(w, inv_g) for w in range(N)})), "Y'_Pi")
    rng = ctx.rng(4)
    f = random_q_dual(F, rng)
    w_fact.add(q_equals(bullet_q(y_full(F), f), push_forward(f)), "factorised action")
    res("push_forward_element", "Y_Pi = (sum_v delta^dyn_v) Y'_Pi with Y'_Pi = sum_w ^w(1/g) delta_w", w_fact)

    w_yd, w_aux, w_star = _Worst(F), _Worst(F), _Worst(F)
    for v in range(N):
        for w in range(N):
            tag = f"(v, w) = ({ctx.lab(v)}, {ctx.lab(w)})"
            prod = q_product(E[v], X[w])
            w_yd.add(q_equals(bullet_q(yp, prod), unit * inv_g if v == w else empty), tag)
            w_aux.add(q_equals(pairing(E[v], X[w]), unit * (N * inv_g) if v == w else empty), tag)
            # corrected intermediate step of the first proof (carries 1/g)
            c = g / F.dyn_act(W.mult(W.inverse[v], w0), h)
            w_star.add(q_equals(bullet_q(yp, prod * c), unit * (c * inv_g) if v == w else empty), tag)
    res("y_prime_duality", "Y'_Pi . (E_v (T_w^{-lambda})^*) = unit Kronecker(v, w) / g", w_yd)
    res("auxiliary_pairing", "pairing(E_w, (T_v^{-lambda})^*) = unit Kronecker(w, v) |W| / g", w_aux)
    res("y_prime_linear_step", "Y'_Pi . (E_v (T_w^{-lambda})^* c) = unit Kronecker(v, w) c / g", w_star)

    scal = poincare_scalar(F)
    w_pd = _Worst(F)
    for w in range(N):
        for v in range(N):
            w_pd.add(q_equals(pairing(E[w], O[v]), unit * scal if w == v else empty),
                     f"(w, v) = ({ctx.lab(w)}, {ctx.lab(v)})")
    res("poincare_duality", "pairing(E_w, opposite class at v) = unit Kronecker(w, v) sum_u ^{u dyn}(1/h)", w_pd)

    w_p2, w_top = _Worst(F), _Worst(F)
    for w in range(N):
        for v in range(N):
            x = W.mult(W.mult(w, W.inverse[v]), w0)
            moved = bullet_q(dl.word(x, -1), f_basis(F, w0))
            w_p2.add(q_equals(pairing(E[w], O[v]), pairing(f_basis(F, 0), moved)),
                     f"(w, v) = ({ctx.lab(w)}, {ctx.lab(v)})")
            target = g / F.dyn_act(w0, h) if w == v else F.zero()
            w_top.add(equals(moved.coefficient(0), target), f"(w, v) = ({ctx.lab(w)}, {ctx.lab(v)})")
    res("adjoint_reduction", "pairing(E_w, opposite class at v) = pairing(f_e, T^{-lambda}_{w v^-1 w0} . f_{w0})", w_p2)
    res("top_coefficient", "f_e-coefficient of T^{-lambda}_{w v^-1 w0} . f_{w0} is Kronecker(w, v) g / ^{w0 dyn}h", w_top)

    w_adj, w_adjx = _Worst(F), _Worst(F)
    for trial in range(2):
        f = random_q_dual(F, rng)
        f2 = random_q_dual(F, rng)
        for i in range(n):
            w_adj.add(q_equals(pairing(bullet_q(dl.simple(i, 1), f), f2),
                               pairing(f, bullet_q(dl.simple(i, -1), f2))), f"trial {trial}, i = {i + 1}")
        x = random_algebra_element(F, rng)
        w_adjx.add(q_equals(pairing(bullet_q(x, f), f2), pairing(f, bullet_q(anti_involution(x), f2))),
                   f"trial {trial}")
    res("adjoint_T", "pairing(T_i . f, f') = pairing(f, T_i^{-lambda} . f')", w_adj)
    res("adjoint_general", "pairing(x . f, f') = pairing(f, iota(x) . f')", w_adjx)
    return out


SUITE_FUNCTIONS = {
    "algebra": suite_algebra,
    "dual": suite_dual,
    "pairing": suite_pairing,
    "theta": suite_theta,
    "transition": suite_transition,
}


def run_suites(ctx: VerifyContext, suites=None) -> list:
    """Run the named suites (all by default); results sorted by suite then name."""
    names = SUITES if not suites else tuple(suites)
    for s in names:
        if s not in SUITE_FUNCTIONS:
            raise InvalidArgumentError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
    results = []
    for s in sorted(set(names)):
        results.extend(SUITE_FUNCTIONS[s](ctx))
    return sorted(results, key=lambda r: (r.suite, r.name))


__all__ = [
    "CheckResult",
    "SUITES",
    "VerifyContext",
    "random_algebra_element",
    "random_coefficient",
    "random_q_dual",
    "random_star_dual",
    "run_suites",
    "suite_algebra",
    "suite_dual",
    "suite_pairing",
    "suite_theta",
    "suite_transition",
]

"""The twisted group algebra ``Q_{W^dyn x W}`` and the elliptic DL operators.

Elements are finite sums ``sum a_{w,v} delta^dyn_w delta_v`` with the
coefficient on the left, stored as ``{(w_dyn, w_fin): FieldElement}`` keyed
by Weyl group indices. The product is

    (a delta^dyn_w delta_v)(a' delta^dyn_w' delta_v') = a * ^{v w^dyn}a' delta^dyn_{ww'} delta_{vv'}
"""
from __future__ import annotations

from numbers import Number

import numpy as np

from . import kernels
from .errors import ConsistencyError, InvalidArgumentError
from .field import Comparison, FieldElement, FunctionField, bfg, residual

PRUNE_FACTOR = 1e-2

MUTATION_SITES = (
    "t1_sign",
    "t1_hbar_minus_z",
    "t1_lambda",
    "t1_den_z",
    "t1_den_hbar_minus_lambda",
    "t2_sign",
    "t2_hbar",
    "t2_z_minus_lambda",
    "t2_z_in_z_minus_lambda",
    "t2_den_z",
    "t2_den_hbar_minus_lambda",
)


class AlgebraElement:
    """Element of the twisted group algebra in normal form."""

    __array_priority__ = 1000

    def __init__(self, field: FunctionField, terms=None):
        self.field = field
        self.terms = dict(terms or {})

    def __repr__(self):
        W = self.field.datum.weyl
        keys = ", ".join(f"({W[d].label}, {W[v].label})" for d, v in sorted(self.terms))
        return f"AlgebraElement[{keys}]"

    def keys(self):
        return set(self.terms)

    def coefficient(self, w_dyn=0, w_fin=0) -> FieldElement:
        key = (self.field.index(w_dyn), self.field.index(w_fin))
        if key in self.terms:
            return self.terms[key]
        return self.field.zero()

    def __add__(self, other):
        return alg_add(self, _as_algebra(self.field, other))

    def __radd__(self, other):
        return alg_add(_as_algebra(self.field, other), self)

    def __neg__(self):
        return AlgebraElement(self.field, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return alg_add(self, -_as_algebra(self.field, other))

    def __rsub__(self, other):
        return alg_add(_as_algebra(self.field, other), -self)

    def __mul__(self, other):
        return alg_mul(self, _as_algebra(self.field, other))

    def __rmul__(self, other):
        return alg_mul(_as_algebra(self.field, other), self)

    def pruned(self, rel=None) -> "AlgebraElement":
        """Drop coefficients negligible at every point next to the largest one there."""
        rel = self.field.tol * PRUNE_FACTOR if rel is None else rel
        if not self.terms:
            return self
        scale = np.maximum(np.max([np.abs(c.values) for c in self.terms.values()], axis=0), 1.0)
        return AlgebraElement(
            self.field,
            {k: c for k, c in self.terms.items() if not np.all(np.abs(c.values) < rel * scale)},
        )


def _as_algebra(field, x):
    if isinstance(x, AlgebraElement):
        if x.field is not field:
            raise InvalidArgumentError("algebra elements from different contexts")
        return x
    if isinstance(x, FieldElement):
        return scalar(x)
    if isinstance(x, Number):
        return scalar(field.const(x))
    raise InvalidArgumentError(f"cannot interpret {type(x).__name__} as an algebra element")


def alg_identity(field: FunctionField) -> AlgebraElement:
    return AlgebraElement(field, {(0, 0): field.one()})


def alg_zero(field: FunctionField) -> AlgebraElement:
    return AlgebraElement(field, {})


def scalar(f: FieldElement) -> AlgebraElement:
    return AlgebraElement(f.field, {(0, 0): f})


def delta(field: FunctionField, w) -> AlgebraElement:
    return AlgebraElement(field, {(0, field.index(w)): field.one()})


def delta_dyn(field: FunctionField, w) -> AlgebraElement:
    return AlgebraElement(field, {(field.index(w), 0): field.one()})


def monomial(f: FieldElement, w_dyn=0, w_fin=0) -> AlgebraElement:
    """``f delta^dyn_{w_dyn} delta_{w_fin}``."""
    fld = f.field
    return AlgebraElement(fld, {(fld.index(w_dyn), fld.index(w_fin)): f})


def alg_add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    terms = dict(x.terms)
    for k, c in y.terms.items():
        terms[k] = terms[k] + c if k in terms else c
    return AlgebraElement(x.field, terms)


def alg_mul(x: AlgebraElement, y: AlgebraElement, prune=True) -> AlgebraElement:
    """Twisted product; coefficients that cancel to rounding are dropped when ``prune``."""
    field = x.field
    if y.field is not field:
        raise InvalidArgumentError("algebra elements from different contexts")
    W = field.datum.weyl
    act = field.act
    ident = field.ident
    acc = {}
    scale = {}
    absy = {k: np.abs(b.values).astype(np.complex128) for k, b in y.terms.items()} if prune else {}
    for (w, v), a in x.terms.items():
        absa = np.abs(a.values).astype(np.complex128) if prune else None
        for (w2, v2), b in y.terms.items():
            key = (W.mult(w, w2), W.mult(v, v2))
            out = acc.get(key)
            if out is None:
                out = acc[key] = np.zeros(field.shape, dtype=np.complex128)
                if prune:
                    scale[key] = np.zeros(field.shape, dtype=np.complex128)
            kernels.twisted_fma(out, a.values, ident, ident, b.values, act[v], act[w])
            if prune:
                # pointwise size of the summands, to recognise cancellation
                kernels.twisted_fma(scale[key], absa, ident, ident, absy[(w2, v2)], act[v], act[w])
    rel = field.tol * PRUNE_FACTOR
    terms = {}
    for key, vals in acc.items():
        if prune and np.all(np.abs(vals) < rel * scale[key].real):
            continue
        terms[key] = FieldElement(field, vals, "product coefficient")
    return AlgebraElement(field, terms)


def algebra_equals(x: AlgebraElement, y: AlgebraElement, tol=None) -> Comparison:
    """Coefficientwise probabilistic equality; missing keys count as zero."""
    field = x.field
    tol = field.tol if tol is None else tol
    worst = Comparison(True, 0.0, None)
    zero = np.zeros(field.shape, dtype=np.complex128)
    for key in sorted(set(x.terms) | set(y.terms)):
        a = x.terms[key].values if key in x.terms else zero
        b = y.terms[key].values if key in y.terms else zero
        res, where = residual(a, b)
        if res >= worst.residual:
            worst = Comparison(True, res, where, _key_label(field, key))
    return Comparison(worst.residual < tol, worst.residual, worst.witness, worst.label)


def _key_label(field, key):
    W = field.datum.weyl
    return f"delta^dyn_{W[key[0]].label} delta_{W[key[1]].label}"


# ---------------------------------------------------------------------------
# elliptic Demazure-Lusztig operators


class DemazureLusztig:
    """Simple and composite DL operators over one evaluation context.

    ``sign=+1`` selects ``T^lambda``, ``sign=-1`` selects ``T^{-lambda}``.
    ``mutation`` names one sign flip inside ``T_{alpha_i}`` for
    ``i = mutated_root``; it exists only to check that the relation tests
    can fail.
    """

    def __init__(self, field: FunctionField, mutation=None, mutated_root=0, prune=True):
        if mutation is not None and mutation not in MUTATION_SITES:
            raise InvalidArgumentError(f"unknown mutation site {mutation!r}")
        self.field = field
        self.mutation = mutation
        self.mutated_root = mutated_root
        self.prune = prune
        self._words = {}
        self._b = {}

    @property
    def group(self):
        return self.field.datum.weyl

    def _flip(self, site, i):
        return -1 if (self.mutation == site and i == self.mutated_root) else 1

    def coefficients(self, i: int, sign: int = 1):
        """``(A, B)`` with ``T_i = A delta_i delta_i^dyn + B delta_i^dyn``."""
        _check_sign(sign)
        F = self.field
        n = F.datum.rank
        if not 0 <= i < n:
            raise InvalidArgumentError(f"simple index {i} out of range")
        e = [0] * n
        e[i] = 1
        z = np.array(e)
        lam = sign * np.array(e)
        fl = lambda site: self._flip(site, i)  # noqa: E731
        A = (F.theta_affine(1, -fl("t1_hbar_minus_z") * z)
             * F.theta_affine(0, None, fl("t1_lambda") * lam)
             / (F.theta_affine(0, fl("t1_den_z") * z)
                * F.theta_affine(1, None, -fl("t1_den_hbar_minus_lambda") * lam)))
        B = (F.theta_affine(fl("t2_hbar"))
             * F.theta_affine(0, fl("t2_z_in_z_minus_lambda") * z, -fl("t2_z_minus_lambda") * lam)
             / (F.theta_affine(0, fl("t2_den_z") * z)
                * F.theta_affine(1, None, -fl("t2_den_hbar_minus_lambda") * lam)))
        A = A * fl("t1_sign")
        B = B * fl("t2_sign")
        return A, B

    def simple(self, i: int, sign: int = 1) -> AlgebraElement:
        A, B = self.coefficients(i, sign)
        s = self.group.simple_reflection(i)
        return AlgebraElement(self.field, {(s, s): A, (s, 0): B})

    def word(self, w, sign: int = 1) -> AlgebraElement:
        """``T_w`` along the canonical reduced word of ``w``."""
        _check_sign(sign)
        w = self.field.index(w)
        key = (w, sign)
        if key not in self._words:
            if w == 0:
                self._words[key] = alg_identity(self.field)
            else:
                W = self.group
                i = W.words[w][0]
                rest = W.mult(W.simple_reflection(i), w)
                self._words[key] = alg_mul(self.simple(i, sign), self.word(rest, sign), prune=self.prune)
        return self._words[key]

    def word_from(self, word, sign: int = 1) -> AlgebraElement:
        """Product of simple operators along an arbitrary word."""
        out = alg_identity(self.field)
        for i in word:
            out = alg_mul(out, self.simple(i, sign), prune=self.prune)
        return out

    def p_q(self, i: int):
        """``(p_i, q_i)`` with ``delta_i^dyn T_i^lambda = p_i delta_i + q_i``."""
        s = self.group.simple_reflection(i)
        prod = alg_mul(delta_dyn(self.field, s), self.simple(i, 1), prune=False)
        return prod.coefficient(0, s), prod.coefficient(0, 0)

    def transition_a(self, w, sign: int = 1) -> dict:
        """``{v: a_{w,v}}`` read off ``T_w = sum_v a_{w,v} delta^dyn_w delta_v``."""
        w = self.field.index(w)
        out = {}
        for (d, v), c in self.word(w, sign).terms.items():
            if d != w:
                raise ConsistencyError(f"T_w has a term with dynamical index {d} != {w}")
            out[v] = c
        return out

    def transition_b(self, sign: int = 1) -> dict:
        """``{(w, v): b_{w,v}}`` from the triangular system
        ``sum_v a_{w,v} ^{w dyn} b_{v,u} = delta_{w,u}``."""
        _check_sign(sign)
        if sign in self._b:
            return self._b[sign]
        F = self.field
        W = self.group
        B = W.bruhat_matrix
        b = {}
        for w in range(W.size):  # enumeration is ordered by length
            a = self.transition_a(w, sign)
            diag = a.get(w)
            if diag is None:
                raise ConsistencyError("diagonal transition coefficient vanished")
            inv = W.inverse[w]
            for u in range(W.size):
                if not B[u, w]:
                    continue
                rhs = np.full(F.shape, 1.0 + 0j) if u == w else np.zeros(F.shape, dtype=np.complex128)
                for v, av in a.items():
                    if v == w or (v, u) not in b:
                        continue
                    kernels.twisted_fma(rhs, av.values, F.ident, F.ident,
                                        -b[(v, u)].values, F.ident, F.act[w])
                sol = FieldElement(F, rhs, "rhs") / diag
                b[(w, u)] = F.dyn_act(inv, sol)
        self._b[sign] = b
        return b


def _check_sign(sign):
    if sign not in (1, -1):
        raise InvalidArgumentError("sign must be +1 (lambda) or -1 (-lambda)")


def _dl(field) -> DemazureLusztig:
    dl = getattr(field, "_default_dl", None)
    if dl is None:
        dl = field._default_dl = DemazureLusztig(field)
    return dl


def dl_simple(field: FunctionField, i: int, sign: int = 1) -> AlgebraElement:
    return _dl(field).simple(i, sign)


def dl_word(field: FunctionField, w, sign: int = 1) -> AlgebraElement:
    return _dl(field).word(w, sign)


def transition_a(field: FunctionField, w, sign: int = 1) -> dict:
    return _dl(field).transition_a(w, sign)


def transition_b(field: FunctionField, sign: int = 1) -> dict:
    return _dl(field).transition_b(sign)


def field_g(field: FunctionField) -> FieldElement:
    g = getattr(field, "_g", None)
    if g is None:
        g = field._g = bfg(field)
    return g


def anti_involution(x: AlgebraElement) -> AlgebraElement:
    """``a delta^dyn_v delta_w -> ^{(v^{-1})^dyn w^{-1}}a * g / ^{w^{-1}}g * delta^dyn_{v^{-1}} delta_{w^{-1}}``."""
    F = x.field
    W = F.datum.weyl
    g = field_g(F)
    terms = {}
    for (v, w), a in x.terms.items():
        vi, wi = int(W.inverse[v]), int(W.inverse[w])
        coeff = F.weyl_act(wi, F.dyn_act(vi, a)) * (g / F.weyl_act(wi, g))
        key = (vi, wi)
        terms[key] = terms[key] + coeff if key in terms else coeff
    return AlgebraElement(F, terms)


def bernstein_sides(dl: DemazureLusztig, i: int, a: FieldElement, sign: int = 1):
    """``(T_i a, ^{s s^dyn}a T_i + B ^{s^dyn}(a - ^s a) delta_i^dyn)`` with ``B`` the
    coefficient of ``delta_i^dyn`` in ``T_i``."""
    F = dl.field
    s = dl.group.simple_reflection(i)
    T = dl.simple(i, sign)
    _, Bcoef = dl.coefficients(i, sign)
    lhs = alg_mul(T, scalar(a), prune=False)
    moved = alg_mul(scalar(F.weyl_act(s, F.dyn_act(s, a))), T, prune=False)
    corr = monomial(Bcoef * F.dyn_act(s, a - F.weyl_act(s, a)), w_dyn=s)
    return lhs, moved + corr


def bernstein_residual(dl: DemazureLusztig, i: int, a: FieldElement, sign: int = 1) -> AlgebraElement:
    """Difference of the two sides of the Bernstein relation; vanishes identically."""
    lhs, rhs = bernstein_sides(dl, i, a, sign)
    return lhs - rhs


def two_reflection_sides(dl: DemazureLusztig, i: int, j: int):
    """Both sides of the composition rule for ``delta_i^dyn T_i delta_j^dyn T_j``."""
    F = dl.field
    W = dl.group
    si, sj = W.simple_reflection(i), W.simple_reflection(j)
    p_i, q_i = dl.p_q(i)
    lhs = alg_mul(alg_mul(delta_dyn(F, si), dl.simple(i)),
                  alg_mul(delta_dyn(F, sj), dl.simple(j)))
    p_i_j = F.dyn_act(sj, p_i)
    q_i_j = F.dyn_act(sj, q_i)
    T_ij = alg_mul(dl.simple(i), dl.simple(j))
    rhs = (alg_mul(monomial(p_i / p_i_j, w_dyn=W.mult(sj, si)), T_ij)
           + alg_mul(monomial(q_i - p_i * q_i_j / p_i_j, w_dyn=sj), dl.simple(j)))
    return lhs, rhs


def bernstein_test_functions(field: FunctionField, i: int) -> list:
    """Five well-conditioned coefficients for the Bernstein check at root ``i``:
    a constant, two atoms, a product and two guarded quotients."""
    n = field.datum.rank
    j = (i + 1) % n
    ei = [0] * n
    ej = [0] * n
    ei[i] = 1
    ej[j] = 1
    return [
        field.const(1.5 - 0.5j),
        field.theta_affine(0, ei),
        field.theta_affine(1, [-c for c in ej]) * field.theta_affine(0, None, ei),
        field.theta_affine(0, ei, ej) / field.theta_affine(1, ej),
        field.theta_affine(1, None, [-c for c in ej]) / field.theta_affine(0, ei),
    ]

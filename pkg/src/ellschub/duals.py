"""Dual modules, elliptic Schubert classes and the Poincare pairing.

Two duals of the twisted group algebra are modelled:

* ``StarDualElement``: the dual over ``Q_{W^dyn}``, written
  ``sum_w g_w (sum_u c_{w,u} delta^dyn_u)`` with coefficients on the right.
* ``QDualElement``: the dual over ``Q``, written ``sum_w f_w c_w``.

Both carry a left action of the algebra (``bullet_star`` and ``bullet_q``).
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .algebra import AlgebraElement, DemazureLusztig, alg_mul, field_g
from .errors import InvalidArgumentError
from .field import Comparison, FieldElement, FunctionField, bfh, residual


def _worst(field, pairs, tol):
    worst = Comparison(True, 0.0, None)
    for label, a, b in pairs:
        res, where = residual(a, b)
        if res >= worst.residual:
            worst = Comparison(True, res, where, label)
    return Comparison(worst.residual < tol, worst.residual, worst.witness, worst.label)


# ---------------------------------------------------------------------------
# the Q_{W^dyn}-dual


class StarDualElement:
    """``terms[w][u]`` is the coefficient of ``g_w . delta^dyn_u``."""

    def __init__(self, field: FunctionField, terms=None):
        self.field = field
        self.terms = {w: dict(row) for w, row in (terms or {}).items() if row}

    def __repr__(self):
        return f"StarDualElement({sum(len(r) for r in self.terms.values())} terms)"

    def row(self, w) -> AlgebraElement:
        """Value on ``delta_w`` as an element of ``Q_{W^dyn}``."""
        w = self.field.index(w)
        return AlgebraElement(self.field, {(u, 0): c for u, c in self.terms.get(w, {}).items()})

    def __add__(self, other):
        terms = {w: dict(r) for w, r in self.terms.items()}
        for w, row in other.terms.items():
            tgt = terms.setdefault(w, {})
            for u, c in row.items():
                tgt[u] = tgt[u] + c if u in tgt else c
        return StarDualElement(self.field, terms)

    def __mul__(self, other):
        return star_product(self, other)


def star_basis(field: FunctionField, w, coeff: FieldElement | None = None, dyn=0) -> StarDualElement:
    """``g_w . coeff . delta^dyn_{dyn}``."""
    coeff = field.one() if coeff is None else coeff
    return StarDualElement(field, {field.index(w): {field.index(dyn): coeff}})


def star_unit(field: FunctionField) -> StarDualElement:
    return StarDualElement(field, {w: {0: field.one()} for w in range(field.N)})


def bullet_star(x: AlgebraElement, g: StarDualElement) -> StarDualElement:
    """``a delta^dyn_w delta_v . g_y c delta^dyn_u = g_{y v^{-1}} ^{y v^{-1}}a ^{w dyn}c delta^dyn_{wu}``."""
    F = x.field
    W = F.datum.weyl
    acc = {}
    for (w, v), a in x.terms.items():
        vinv = W.inverse[v]
        for y, row in g.terms.items():
            t = W.mult(y, vinv)
            tgt = acc.setdefault(t, {})
            for u, c in row.items():
                k = W.mult(w, u)
                out = tgt.get(k)
                if out is None:
                    out = tgt[k] = np.zeros(F.shape, dtype=np.complex128)
                kernels.twisted_fma(out, a.values, F.act[t], F.ident, c.values, F.ident, F.act[w])
    return StarDualElement(F, {t: {k: FieldElement(F, v) for k, v in row.items()} for t, row in acc.items()})


def _qwdyn_mul(F, p: dict, q: dict) -> dict:
    """Product in ``Q_{W^dyn}`` of ``{u: c}`` maps: ``c delta^dyn_u . d delta^dyn_x = c ^{u dyn}d delta^dyn_{ux}``."""
    W = F.datum.weyl
    out = {}
    for u, c in p.items():
        for x, d in q.items():
            k = W.mult(u, x)
            acc = out.get(k)
            if acc is None:
                acc = out[k] = np.zeros(F.shape, dtype=np.complex128)
            kernels.twisted_fma(acc, c.values, F.ident, F.ident, d.values, F.ident, F.act[u])
    return {k: FieldElement(F, v) for k, v in out.items()}


def star_product(g: StarDualElement, h: StarDualElement) -> StarDualElement:
    """``(g_w p)(g_v q) = g_v delta_{w,v} p q``."""
    F = g.field
    return StarDualElement(F, {w: _qwdyn_mul(F, g.terms[w], h.terms[w]) for w in g.terms if w in h.terms})


def star_right_mul(g: StarDualElement, p: AlgebraElement) -> StarDualElement:
    """Right multiplication by ``p`` in ``Q_{W^dyn}`` (keys ``(u, e)`` only)."""
    F = g.field
    if any(v != 0 for _, v in p.terms):
        raise InvalidArgumentError("right multiplication needs an element of Q_{W^dyn}")
    q = {u: c for (u, _), c in p.terms.items()}
    return StarDualElement(F, {w: _qwdyn_mul(F, row, q) for w, row in g.terms.items()})


def star_evaluate(g: StarDualElement, x: AlgebraElement) -> AlgebraElement:
    """``g(x)`` for ``x = sum c delta^dyn_w delta_v``: ``sum (c delta^dyn_w) g(delta_v)``."""
    F = g.field
    out = {}
    for (w, v), c in x.terms.items():
        row = g.terms.get(v)
        if not row:
            continue
        for k, val in _qwdyn_mul(F, {w: c}, row).items():
            out[k] = out[k] + val if k in out else val
    return AlgebraElement(F, {(k, 0): c for k, c in out.items()})


def star_equals(g: StarDualElement, h: StarDualElement, tol=None) -> Comparison:
    F = g.field
    tol = F.tol if tol is None else tol
    zero = np.zeros(F.shape, dtype=np.complex128)
    pairs = []
    W = F.datum.weyl
    for w in sorted(set(g.terms) | set(h.terms)):
        rg, rh = g.terms.get(w, {}), h.terms.get(w, {})
        for u in sorted(set(rg) | set(rh)):
            a = rg[u].values if u in rg else zero
            b = rh[u].values if u in rh else zero
            pairs.append((f"g_{W[w].label} delta^dyn_{W[u].label}", a, b))
    return _worst(F, pairs, tol)


def t_star_dual(dl: DemazureLusztig, w, sign: int = 1) -> StarDualElement:
    """Dual basis element ``(T_w)^star = sum_v g_v b_{v,w} delta^dyn_{w^{-1}}``."""
    F = dl.field
    W = F.datum.weyl
    w = F.index(w)
    b = dl.transition_b(sign)
    winv = int(W.inverse[w])
    return StarDualElement(F, {v: {winv: b[(v, w)]} for v in range(W.size) if (v, w) in b})


def project_pi(g: StarDualElement) -> "QDualElement":
    """``g_w a delta^dyn_v -> f_w a``."""
    F = g.field
    terms = {}
    for w, row in g.terms.items():
        vals = [c for _, c in sorted(row.items())]
        tot = vals[0]
        for c in vals[1:]:
            tot = tot + c
        terms[w] = tot
    return QDualElement(F, terms)


def embed_phi(f: "QDualElement") -> StarDualElement:
    """``f_w a -> g_w a delta^dyn_e``."""
    return StarDualElement(f.field, {w: {0: c} for w, c in f.terms.items()})


# ---------------------------------------------------------------------------
# the Q-dual


class QDualElement:
    """``terms[w]`` is the coefficient of ``f_w``."""

    def __init__(self, field: FunctionField, terms=None):
        self.field = field
        self.terms = dict(terms or {})

    def __repr__(self):
        W = self.field.datum.weyl
        return "QDualElement(" + ", ".join(f"f_{W[w].label}" for w in sorted(self.terms)) + ")"

    def coefficient(self, w) -> FieldElement:
        w = self.field.index(w)
        return self.terms[w] if w in self.terms else self.field.zero()

    def __add__(self, other):
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] + c if w in terms else c
        return QDualElement(self.field, terms)

    def __sub__(self, other):
        return self + QDualElement(other.field, {w: -c for w, c in other.terms.items()})

    def __mul__(self, other):
        if isinstance(other, QDualElement):
            return q_product(self, other)
        return QDualElement(self.field, {w: c * other for w, c in self.terms.items()})

    def support(self, rel: float | None = None) -> set:
        """Keys whose coefficient is not negligible at some panel point."""
        F = self.field
        rel = F.tol * 1e-2 if rel is None else rel
        if not self.terms:
            return set()
        scale = np.maximum(np.max([np.abs(c.values) for c in self.terms.values()], axis=0), 1.0)
        return {w for w, c in self.terms.items() if not np.all(np.abs(c.values) < rel * scale)}


def f_basis(field: FunctionField, w, coeff: FieldElement | None = None) -> QDualElement:
    return QDualElement(field, {field.index(w): field.one() if coeff is None else coeff})


def q_unit(field: FunctionField) -> QDualElement:
    return QDualElement(field, {w: field.one() for w in range(field.N)})


def q_product(f: QDualElement, h: QDualElement) -> QDualElement:
    """``(f_w a)(f_v b) = delta_{w,v} f_w ab``."""
    return QDualElement(f.field, {w: c * h.terms[w] for w, c in f.terms.items() if w in h.terms})


def bullet_q(x: AlgebraElement, f: QDualElement) -> QDualElement:
    """``a delta^dyn_w delta_v . f_u b = f_{u v^{-1}} ^{u v^{-1}}a ^{w dyn}b``."""
    F = x.field
    W = F.datum.weyl
    acc = {}
    for (w, v), a in x.terms.items():
        vinv = W.inverse[v]
        for u, b in f.terms.items():
            t = W.mult(u, vinv)
            out = acc.get(t)
            if out is None:
                out = acc[t] = np.zeros(F.shape, dtype=np.complex128)
            kernels.twisted_fma(out, a.values, F.act[t], F.ident, b.values, F.ident, F.act[w])
    return QDualElement(F, {t: FieldElement(F, v) for t, v in acc.items()})


def q_equals(f: QDualElement, h: QDualElement, tol=None) -> Comparison:
    F = f.field
    tol = F.tol if tol is None else tol
    zero = np.zeros(F.shape, dtype=np.complex128)
    W = F.datum.weyl
    pairs = []
    for w in sorted(set(f.terms) | set(h.terms)):
        a = f.terms[w].values if w in f.terms else zero
        b = h.terms[w].values if w in h.terms else zero
        pairs.append((f"f_{W[w].label}", a, b))
    return _worst(F, pairs, tol)


# ---------------------------------------------------------------------------
# Schubert classes


def elliptic_class(dl: DemazureLusztig, w, sign: int = 1) -> QDualElement:
    """``E_w = T_{w^{-1}} . f_e``."""
    F = dl.field
    w = F.index(w)
    return bullet_q(dl.word(F.datum.weyl.inverse[w], sign), f_basis(F, 0))


def opposite_class(dl: DemazureLusztig, w, sign: int = -1) -> QDualElement:
    """Opposite class ``T_{w^{-1} w_0} . f_{w_0}``; ``sign=-1`` gives the ``-lambda`` family."""
    F = dl.field
    W = F.datum.weyl
    w = F.index(w)
    x = W.mult(W.inverse[w], W.longest)
    return bullet_q(dl.word(x, sign), f_basis(F, W.longest))


def aux_dual_class(dl: DemazureLusztig, w, sign: int = -1) -> QDualElement:
    """``(T_w)^* = pi((T_w)^star) = sum_v f_v b_{v,w}``."""
    return project_pi(t_star_dual(dl, w, sign))


def right_dl_action(dl: DemazureLusztig, w, i: int, sign: int = 1) -> QDualElement:
    """``E_w (.) T_i := T_{w^{-1}} T_i . E_e``."""
    F = dl.field
    w = F.index(w)
    x = alg_mul(dl.word(F.datum.weyl.inverse[w], sign), dl.simple(i, sign), prune=dl.prune)
    return bullet_q(x, f_basis(F, 0))


def restriction_table(dl: DemazureLusztig, sign: int = 1, point: int = 0) -> np.ndarray:
    """``M[w, v]`` = coefficient of ``f_v`` in ``E_w`` at panel point ``point``."""
    F = dl.field
    if not 0 <= point < F.P:
        raise InvalidArgumentError(f"panel point {point} out of range")
    N = F.N
    M = np.zeros((N, N), dtype=np.complex128)
    for w in range(N):
        for v, c in elliptic_class(dl, w, sign).terms.items():
            M[w, v] = c.values[0, 0, point]
    return M


# ---------------------------------------------------------------------------
# push-forward and pairing


def y_prime(field: FunctionField) -> AlgebraElement:
    """``Y'_Pi = sum_w delta_w (1/g) = sum_w ^w(1/g) delta_w``."""
    inv_g = 1 / field_g(field)
    return AlgebraElement(field, {(0, w): field.weyl_act(w, inv_g) for w in range(field.N)})


def dyn_sum(field: FunctionField) -> AlgebraElement:
    return AlgebraElement(field, {(v, 0): field.one() for v in range(field.N)})


def y_full(field: FunctionField) -> AlgebraElement:
    """``Y_Pi = (sum_v delta^dyn_v) Y'_Pi``."""
    return alg_mul(dyn_sum(field), y_prime(field), prune=False)


def push_forward(f: QDualElement) -> QDualElement:
    """``Y_Pi . f``, evaluated as ``(sum_v delta^dyn_v) . (Y'_Pi . f)``."""
    F = f.field
    return bullet_q(dyn_sum(F), bullet_q(y_prime(F), f))


def pairing(f: QDualElement, h: QDualElement) -> QDualElement:
    """Poincare pairing ``Y_Pi . (f h)``."""
    return push_forward(q_product(f, h))


def unit_multiple(f: QDualElement, tol=None):
    """Check that ``f`` is ``unit * c``; return ``(c, comparison)``."""
    F = f.field
    c = f.coefficient(0)
    return c, q_equals(f, q_unit(F) * c, tol)


def poincare_scalar(field: FunctionField) -> FieldElement:
    """``sum_u ^{u dyn}(theta_Pi(lambda) / theta_Pi(hbar - lambda))``."""
    inv_h = 1 / bfh(field)
    tot = field.dyn_act(0, inv_h)
    for u in range(1, field.N):
        tot = tot + field.dyn_act(u, inv_h)
    return tot


__all__ = [
    "QDualElement",
    "StarDualElement",
    "aux_dual_class",
    "bullet_q",
    "bullet_star",
    "dyn_sum",
    "elliptic_class",
    "embed_phi",
    "f_basis",
    "opposite_class",
    "pairing",
    "poincare_scalar",
    "project_pi",
    "push_forward",
    "q_equals",
    "q_product",
    "q_unit",
    "restriction_table",
    "right_dl_action",
    "star_basis",
    "star_equals",
    "star_evaluate",
    "star_product",
    "star_right_mul",
    "star_unit",
    "t_star_dual",
    "unit_multiple",
    "y_full",
    "y_prime",
]

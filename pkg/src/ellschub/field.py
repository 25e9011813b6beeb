"""Coefficient field of theta-function quotients, evaluated on a sample panel.

A :class:`FieldElement` is stored by its values on the orbit of the panel
under ``W x W^dyn``: ``values[u, v, p] = f(u.z_p, v.lambda_p)``. Both Weyl
actions are then exact index permutations,

    (^w f)(z, lam)       = f(w^{-1} z, lam)   ->  values[w^{-1} u, v, p]
    (^{w dyn} f)(z, lam) = f(z, w^{-1} lam)   ->  values[u, w^{-1} v, p]

and field arithmetic is pointwise. Equality is probabilistic: two elements
are equal when they agree at every orbit point to the relative tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import InvalidArgumentError, PanelConstructionError, PoleError
from .roots import CartanDatum, WeylElement
from .theta import ModularParams, theta

DENOM_FLOOR = 1e-30
MAX_ELEMENT_BYTES = 64 * 2**20
Z_KINDS = ("z", "root-of-z")
LAMBDA_KINDS = ("lambda", "coroot-of-lambda")


@dataclass(frozen=True)
class SamplePanel:
    seed: int
    points: tuple
    pole_guard: float
    draws: int

    def __len__(self):
        return len(self.points)

    @property
    def z(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def lam(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


def _orbit(mats, x):
    return np.einsum("uij,j->ui", mats, x)


def _guard_margin(datum, params, z, lam, Zm, Lm, roots, coroots):
    """Smallest guarded theta magnitude over the W-orbits of ``(z, lam)``."""
    zr = _orbit(Zm, z) @ roots.T
    lr = _orbit(Lm, lam) @ coroots.T
    h = params.hbar
    args = np.concatenate([zr.ravel(), lr.ravel()])
    vals = theta(np.concatenate([args, h + args, h - args]), params)
    return float(np.min(np.abs(vals)))


def sample_panel(seed: int, count: int, datum: CartanDatum, params: ModularParams,
                 pole_guard: float = 1e-4, max_draws: int = 10**6) -> SamplePanel:
    """Draw ``count`` generic points ``(z, lambda)`` by rejection.

    Real and imaginary parts are uniform in (-0.45, 0.45). A point is kept
    only if every guarded theta value (at ``z_alpha``, ``lambda_{alpha^vee}``,
    ``hbar +- z_alpha``, ``hbar +- lambda_{alpha^vee}``) exceeds ``pole_guard``
    in magnitude at every Weyl translate of ``z`` and of ``lambda``.
    """
    if count < 1:
        raise InvalidArgumentError("panel size must be at least 1")
    rng = np.random.default_rng(seed)
    n = datum.rank
    W = datum.weyl
    Zm = np.stack(W.z_mats).astype(np.float64)
    Lm = np.stack(W.lam_mats).astype(np.float64)
    roots = np.array(datum.positive_roots, dtype=np.float64)
    coroots = np.array(datum.positive_coroots, dtype=np.float64)
    points = []
    draws = 0
    while len(points) < count:
        if draws >= max_draws:
            raise PanelConstructionError(
                f"found only {len(points)} of {count} guarded points in {max_draws} draws"
            )
        draws += 1
        raw = rng.uniform(-0.45, 0.45, size=(2, 2, n))
        z = raw[0, 0] + 1j * raw[0, 1]
        lam = raw[1, 0] + 1j * raw[1, 1]
        if _guard_margin(datum, params, z, lam, Zm, Lm, roots, coroots) > pole_guard:
            points.append((tuple(complex(c) for c in z), tuple(complex(c) for c in lam)))
    return SamplePanel(seed=int(seed), points=tuple(points), pole_guard=float(pole_guard), draws=draws)


@dataclass(frozen=True)
class Comparison:
    """Outcome of a probabilistic equality test.

    ``witness`` is ``(panel_index, weyl_index, dyn_index)`` of the worst point.
    """

    ok: bool
    residual: float
    witness: tuple | None = None
    label: str = ""

    def __bool__(self):
        return self.ok

    def __and__(self, other):
        worst = self if self.residual >= other.residual else other
        return Comparison(self.ok and other.ok, worst.residual, worst.witness, worst.label)


class FunctionField:
    """Evaluation context: root datum, modular parameters and a sample panel."""

    def __init__(self, datum: CartanDatum, params: ModularParams, panel: SamplePanel):
        self.datum = datum
        self.params = params
        self.panel = panel
        W = datum.weyl
        if W.table is None:
            raise InvalidArgumentError(f"{datum.name} is too large for orbit evaluation")
        self.N = W.size
        self.P = len(panel)
        if self.N * self.N * self.P * 16 > MAX_ELEMENT_BYTES:
            raise InvalidArgumentError(
                f"{datum.name} with {self.P} panel points needs more than "
                f"{MAX_ELEMENT_BYTES >> 20} MiB per coefficient"
            )
        self.shape = (self.N, self.N, self.P)
        Zm = np.stack(W.z_mats).astype(np.float64)
        Lm = np.stack(W.lam_mats).astype(np.float64)
        # Z[u, p] = u.z_p, L[v, p] = v.lambda_p
        self.Z = np.einsum("uij,pj->upi", Zm, panel.z)
        self.L = np.einsum("uij,pj->upi", Lm, panel.lam)
        # act[w][u] = index of w^{-1} u
        self.act = np.stack([W.table[W.inverse[w]] for w in range(self.N)])
        self.ident = np.arange(self.N, dtype=np.intp)
        self._atoms = {}

    @property
    def tol(self) -> float:
        return self.params.tol

    def index(self, w) -> int:
        return self.datum.weyl.index(w)

    def wrap(self, values, description="") -> "FieldElement":
        return FieldElement(self, values, description)

    def const(self, c) -> "FieldElement":
        return FieldElement(self, np.full(self.shape, complex(c)), repr(complex(c)))

    def zero(self) -> "FieldElement":
        return self.const(0)

    def one(self) -> "FieldElement":
        return self.const(1)

    def z_pairing(self, coeffs) -> np.ndarray:
        """``z_mu`` on the orbit, shape (N, P)."""
        return self.Z @ np.asarray(coeffs, dtype=np.float64)

    def lam_pairing(self, coeffs) -> np.ndarray:
        """``lambda_{mu^vee}`` on the orbit, shape (N, P)."""
        return self.L @ np.asarray(coeffs, dtype=np.float64)

    def theta_affine(self, c_h=0, z_coeffs=None, lam_coeffs=None) -> "FieldElement":
        """``theta(c_h hbar + z_mu + lambda_nu)`` for integer coefficient vectors."""
        n = self.datum.rank
        zc = tuple(int(v) for v in (z_coeffs if z_coeffs is not None else (0,) * n))
        lc = tuple(int(v) for v in (lam_coeffs if lam_coeffs is not None else (0,) * n))
        if len(zc) != n or len(lc) != n:
            raise InvalidArgumentError(f"coefficient vectors must have length {n}")
        key = (int(c_h), zc, lc)
        if key not in self._atoms:
            arg = (c_h * self.params.hbar
                   + self.z_pairing(zc)[:, None, :]
                   + self.lam_pairing(lc)[None, :, :])
            vals = theta(arg, self.params)
            vals.setflags(write=False)
            self._atoms[key] = vals
        return FieldElement(self, self._atoms[key], _atom_label(c_h, zc, lc))

    def weyl_act(self, w, f: "FieldElement") -> "FieldElement":
        m = self.act[self.index(w)]
        return FieldElement(self, f.values[m], f"^{_wl(self, w)}({f.description})")

    def dyn_act(self, w, f: "FieldElement") -> "FieldElement":
        m = self.act[self.index(w)]
        return FieldElement(self, f.values[:, m], f"^{_wl(self, w)}dyn({f.description})")

    def equals(self, f, g, tol=None) -> Comparison:
        return equals(f, g, tol)


def _wl(field, w):
    return field.datum.weyl[field.index(w)].label


def _atom_label(c_h, zc, lc):
    parts = []
    if c_h:
        parts.append("hbar" if c_h == 1 else f"{c_h}hbar")
    for name, coeffs in (("z", zc), ("lam", lc)):
        if any(coeffs):
            parts.append(f"{name}{list(coeffs)}")
    return "theta(" + " + ".join(parts or ["0"]) + ")"


def _short(desc, limit=120):
    return desc if len(desc) <= limit else desc[: limit - 3] + "..."


class FieldElement:
    """A theta-function quotient known through its values on the panel orbit."""

    __slots__ = ("field", "values", "description")
    __array_priority__ = 1000

    def __init__(self, field: FunctionField, values, description=""):
        self.field = field
        self.values = values
        self.description = description

    def __repr__(self):
        return f"FieldElement({_short(self.description)})"

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise InvalidArgumentError("field elements from different contexts")
            return other.values, other.description
        if isinstance(other, Number):
            return complex(other), repr(other)
        return NotImplemented, None

    def _binary(self, other, op, sym, reflected=False):
        vals, desc = self._coerce(other)
        if vals is NotImplemented:
            return NotImplemented
        a, b = (vals, self.values) if reflected else (self.values, vals)
        da, db = (desc, self.description) if reflected else (self.description, desc)
        return FieldElement(self.field, op(a, b), _short(f"({da}{sym}{db})"))

    def __add__(self, other):
        return self._binary(other, np.add, "+")

    def __radd__(self, other):
        return self._binary(other, np.add, "+", True)

    def __sub__(self, other):
        return self._binary(other, np.subtract, "-")

    def __rsub__(self, other):
        return self._binary(other, np.subtract, "-", True)

    def __mul__(self, other):
        return self._binary(other, np.multiply, "*")

    def __rmul__(self, other):
        return self._binary(other, np.multiply, "*", True)

    def __truediv__(self, other):
        vals, _ = self._coerce(other)
        if vals is NotImplemented:
            return NotImplemented
        _check_denominator(self.field, vals)
        return self._binary(other, np.divide, "/")

    def __rtruediv__(self, other):
        _check_denominator(self.field, self.values)
        return self._binary(other, np.divide, "/", True)

    def __neg__(self):
        return FieldElement(self.field, -self.values, f"-{self.description}")

    def weyl(self, w) -> "FieldElement":
        return self.field.weyl_act(w, self)

    def dyn(self, w) -> "FieldElement":
        return self.field.dyn_act(w, self)

    def at(self, k: int = 0, u=0, v=0) -> complex:
        """Value at panel point ``k`` translated by ``(u, v)``; default is the point itself."""
        return complex(self.values[self.field.index(u), self.field.index(v), k])

    def on_panel(self) -> np.ndarray:
        """Values at the untranslated panel points."""
        return self.values[0, 0].copy()

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def _check_denominator(field, vals):
    if isinstance(vals, complex):
        if abs(vals) < DENOM_FLOOR:
            raise PoleError("division by zero constant")
        return
    mag = np.abs(vals)
    bad = ~np.isfinite(mag) | (mag < DENOM_FLOOR)
    if np.any(bad):
        u, v, p = (int(i) for i in np.argwhere(bad)[0])
        raise PoleError(
            f"denominator vanishes at panel point {p} translated by "
            f"({field.datum.weyl[u].label}, {field.datum.weyl[v].label}^dyn)",
            point=(p, u, v),
        )


def residual(f, g) -> tuple:
    """Max over the orbit of ``|f-g| / max(1, |f|, |g|)`` and the worst point."""
    a = f.values if isinstance(f, FieldElement) else f
    b = g.values if isinstance(g, FieldElement) else g
    a, b = np.broadcast_arrays(a, b)
    rel = np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    k = int(np.argmax(rel))
    u, v, p = np.unravel_index(k, rel.shape)
    return float(rel.flat[k]), (int(p), int(u), int(v))


def equals(f, g, tol=None) -> Comparison:
    """Probabilistic equality on the panel orbit."""
    field = f.field if isinstance(f, FieldElement) else g.field
    tol = field.tol if tol is None else tol
    if isinstance(f, Number):
        f = field.const(f)
    if isinstance(g, Number):
        g = field.const(g)
    res, where = residual(f, g)
    return Comparison(res < tol, res, where)


# ---------------------------------------------------------------------------
# named constructors


def const_fn(field: FunctionField, c) -> FieldElement:
    return field.const(c)


def _mu_coeffs(field, mu, kind):
    n = field.datum.rank
    if isinstance(mu, (int, np.integer)):
        vec = [0] * n
        vec[int(mu)] = 1
        return vec
    mu = tuple(int(v) for v in mu)
    if len(mu) != n:
        raise InvalidArgumentError(f"{kind} coordinates must have length {n}")
    return list(mu)


def theta_lin(field: FunctionField, c_h: int, sign: int, kind: str, mu) -> FieldElement:
    """``theta(c_h hbar + sign * z_mu)`` or ``theta(c_h hbar + sign * lambda_{mu^vee})``.

    ``mu`` is a simple index or coordinates (root coordinates for the z kind,
    coroot coordinates for the lambda kind).
    """
    if sign not in (1, -1):
        raise InvalidArgumentError("sign must be +1 or -1")
    coeffs = [sign * c for c in _mu_coeffs(field, mu, kind)]
    if kind in Z_KINDS:
        return field.theta_affine(c_h, z_coeffs=coeffs)
    if kind in LAMBDA_KINDS:
        return field.theta_affine(c_h, lam_coeffs=coeffs)
    raise InvalidArgumentError(f"unknown atom kind {kind!r}")


def weyl_act(w, f: FieldElement) -> FieldElement:
    return f.field.weyl_act(w, f)


def dyn_act(w, f: FieldElement) -> FieldElement:
    return f.field.dyn_act(w, f)


def theta_pi(field: FunctionField, kind: str) -> FieldElement:
    """Product over positive roots: kinds ``z``, ``lambda``, ``hbar+z``, ``hbar-z``,
    ``hbar+lambda``, ``hbar-lambda``."""
    table = {
        "z": (0, 1, "z"),
        "lambda": (0, 1, "lambda"),
        "hbar+z": (1, 1, "z"),
        "hbar-z": (1, -1, "z"),
        "hbar+lambda": (1, 1, "lambda"),
        "hbar-lambda": (1, -1, "lambda"),
    }
    if kind not in table:
        raise InvalidArgumentError(f"unknown theta_pi kind {kind!r}")
    c_h, sign, which = table[kind]
    d = field.datum
    mus = d.positive_roots if which == "z" else d.positive_coroots
    out = field.one()
    for mu in mus:
        out = out * theta_lin(field, c_h, sign, which, mu)
    out.description = f"theta_Pi({kind})"
    return out


def bfg(field: FunctionField) -> FieldElement:
    """``prod_{alpha>0} theta(hbar - z_alpha) / theta(z_alpha)``."""
    out = theta_pi(field, "hbar-z") / theta_pi(field, "z")
    out.description = "g"
    return out


def bfh(field: FunctionField) -> FieldElement:
    """``prod_{alpha>0} theta(hbar - lambda_{alpha^vee}) / theta(lambda_{alpha^vee})``."""
    out = theta_pi(field, "hbar-lambda") / theta_pi(field, "lambda")
    out.description = "h"
    return out


def random_theta_quotient(field: FunctionField, rng, factors: int = 2) -> FieldElement:
    """Random quotient of products of theta atoms, for exercising identities."""
    n = field.datum.rank
    d = field.datum
    out = field.const(complex(rng.normal(), rng.normal()))
    for _ in range(factors):
        root = d.positive_roots[rng.integers(len(d.positive_roots))]
        coroot = d.positive_coroots[rng.integers(len(d.positive_coroots))]
        zc = [int(rng.choice([-1, 1])) * c for c in root]
        lc = [int(rng.choice([-1, 0, 1])) * c for c in coroot]
        out = out * field.theta_affine(int(rng.integers(0, 2)), zc, lc)
        # denominators only use guarded atoms
        if rng.integers(2):
            den = theta_lin(field, int(rng.integers(0, 2)), int(rng.choice([-1, 1])), "z", root)
        else:
            den = theta_lin(field, int(rng.integers(0, 2)), int(rng.choice([-1, 1])), "lambda", coroot)
        out = out / den
    out.description = f"random quotient ({factors} factors, rank {n})"
    return out


def build_field(type_label="A", rank=2, seed=0, count=20, params=None, pole_guard=1e-4):
    """Convenience constructor: datum, default params and a guarded panel."""
    from .roots import build_root_system

    datum = build_root_system(type_label, rank)
    params = params or ModularParams.build()
    panel = sample_panel(seed, count, datum, params, pole_guard)
    return FunctionField(datum, params, panel)


__all__ = [
    "Comparison",
    "FieldElement",
    "FunctionField",
    "SamplePanel",
    "WeylElement",
    "bfg",
    "bfh",
    "build_field",
    "const_fn",
    "dyn_act",
    "equals",
    "random_theta_quotient",
    "residual",
    "sample_panel",
    "theta_lin",
    "theta_pi",
    "weyl_act",
]

"""Root data, Weyl group enumeration and Bruhat order.

Coordinates: a root is an integer vector in the simple-root basis, a coroot
an integer vector in the simple-coroot basis. The torus variable ``z`` is
written in fundamental-coweight coordinates, so ``z_k = alpha_k(z)``; the
dynamical variable ``lambda`` in fundamental-weight coordinates, so
``lambda_k = lambda(alpha_k^vee)``. With these choices every pairing
``z_alpha`` and ``lambda_{alpha^vee}`` is an integer linear functional.

Convention: ``cartan_matrix[i][j] = <alpha_j, alpha_i^vee>``.
"""
from __future__ import annotations

from collections import deque
from functools import cached_property, lru_cache
from math import factorial
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, InvalidArgumentError

MAX_GROUP_ORDER = 40320
# full multiplication tables above this order would not fit comfortably
TABLE_LIMIT = 1500


def cartan_matrix(type_label: str, rank: int) -> np.ndarray:
    """Cartan matrix with ``A[i, j] = <alpha_j, alpha_i^vee>`` (Bourbaki numbering)."""
    n = rank
    A = 2 * np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        A[i, i + 1] = A[i + 1, i] = -1
    if type_label == "A":
        pass
    elif type_label == "B":
        # alpha_n short
        A[n - 1, n - 2] = -2
    elif type_label == "C":
        # alpha_n long
        A[n - 2, n - 1] = -2
    elif type_label == "D":
        A[n - 2, n - 1] = A[n - 1, n - 2] = 0
        A[n - 3, n - 1] = A[n - 1, n - 3] = -1
    elif type_label == "G2":
        # alpha_1 short, alpha_2 long
        A[0, 1] = -3
    else:
        raise ConfigurationError(f"unsupported root system type {type_label!r}")
    return A


def weyl_order(type_label: str, rank: int) -> int:
    if type_label == "A":
        return factorial(rank + 1)
    if type_label in ("B", "C"):
        return 2**rank * factorial(rank)
    if type_label == "D":
        return 2 ** (rank - 1) * factorial(rank)
    if type_label == "G2":
        return 12
    raise ConfigurationError(f"unsupported root system type {type_label!r}")


def _normalise_label(type_label, rank):
    label = str(type_label).upper()
    if label == "G":
        label = "G2"
    rank = int(rank)
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4, "G2": 2}
    if label not in minimum:
        raise ConfigurationError(f"unsupported root system type {type_label!r}")
    if rank < minimum[label] or (label == "G2" and rank != 2):
        raise ConfigurationError(f"unsupported rank {rank} for type {label}")
    return label, rank


class CartanDatum:
    """Root system of one Cartan type together with its Weyl group.

    ``positive_roots[k]`` and ``positive_coroots[k]`` are partners. The
    Weyl group is enumerated lazily on first access to :attr:`weyl`.
    """

    def __init__(self, type_label: str, rank: int):
        self.type_label, self.rank = _normalise_label(type_label, rank)
        self.cartan_matrix = cartan_matrix(self.type_label, self.rank)
        n = self.rank
        self.simple_roots = [tuple(int(v) for v in row) for row in np.eye(n, dtype=np.int64)]
        self.simple_coroots = list(self.simple_roots)
        self.order = weyl_order(self.type_label, self.rank)
        if self.order > MAX_GROUP_ORDER:
            raise ConfigurationError(
                f"|W| = {self.order} for {self.name} exceeds the supported bound {MAX_GROUP_ORDER}"
            )
        self.positive_roots, self.positive_coroots = self._generate_roots()
        self.root_index = {r: k for k, r in enumerate(self.positive_roots)}

    def __repr__(self):
        return f"CartanDatum({self.name})"

    @property
    def name(self):
        return self.type_label if self.type_label == "G2" else f"{self.type_label}{self.rank}"

    def reflect_root(self, i: int, root: Sequence[int]) -> tuple:
        c = np.asarray(root, dtype=np.int64)
        pairing = int(self.cartan_matrix[i] @ c)
        c = c.copy()
        c[i] -= pairing
        return tuple(int(v) for v in c)

    def reflect_coroot(self, i: int, coroot: Sequence[int]) -> tuple:
        d = np.asarray(coroot, dtype=np.int64)
        pairing = int(d @ self.cartan_matrix[:, i])
        d = d.copy()
        d[i] -= pairing
        return tuple(int(v) for v in d)

    def _generate_roots(self):
        partner = {}
        queue = deque()
        for i in range(self.rank):
            partner[self.simple_roots[i]] = self.simple_coroots[i]
            queue.append(self.simple_roots[i])
        while queue:
            r = queue.popleft()
            cr = partner[r]
            for i in range(self.rank):
                r2 = self.reflect_root(i, r)
                if r2 not in partner:
                    partner[r2] = self.reflect_coroot(i, cr)
                    queue.append(r2)
        positive = sorted((r for r in partner if all(v >= 0 for v in r)), key=lambda r: (sum(r), r))
        return positive, [partner[r] for r in positive]

    def is_positive(self, root) -> bool:
        return all(v >= 0 for v in root) and any(v > 0 for v in root)

    def coroot_of(self, root) -> tuple:
        root = tuple(int(v) for v in root)
        if root in self.root_index:
            return self.positive_coroots[self.root_index[root]]
        neg = tuple(-v for v in root)
        if neg in self.root_index:
            return tuple(-v for v in self.positive_coroots[self.root_index[neg]])
        raise InvalidArgumentError(f"{root} is not a root of {self.name}")

    @cached_property
    def weyl(self) -> "WeylGroup":
        return WeylGroup(self)


class WeylElement:
    """An element of a Weyl group, identified by its index in the enumeration.

    ``word`` is the lexicographically least reduced word; ``action_matrix``
    acts on coweight coordinates of ``z``.
    """

    __slots__ = ("group", "index")

    def __init__(self, group: "WeylGroup", index: int):
        self.group = group
        self.index = int(index)

    @property
    def word(self) -> tuple:
        return self.group.words[self.index]

    @property
    def length(self) -> int:
        return len(self.group.words[self.index])

    @property
    def action_matrix(self) -> np.ndarray:
        return self.group.z_mats[self.index]

    @property
    def sign(self) -> int:
        return -1 if self.length % 2 else 1

    def __eq__(self, other):
        return isinstance(other, WeylElement) and other.group is self.group and other.index == self.index

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __mul__(self, other):
        return weyl_multiply(self, other)

    def __repr__(self):
        return f"WeylElement({self.label})"

    @property
    def label(self) -> str:
        return word_label(self.word)


def word_label(word) -> str:
    return "e" if not word else "".join(f"s{i + 1}" for i in word)


class WeylGroup:
    """Enumerated Weyl group with index-based tables.

    Element 0 is the identity; elements are ordered by (length, word).
    ``mult(i, j)`` is the index of ``w_i w_j``.
    """

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        n = datum.rank
        A = datum.cartan_matrix
        eye = np.eye(n, dtype=np.int64)
        self.gen_z = []
        self.gen_lam = []
        self.gen_root = []
        for i in range(n):
            mz = eye.copy()
            mz[:, i] -= A[i, :]
            ml = eye.copy()
            ml[:, i] -= A[:, i]
            mr = eye.copy()
            mr[i, :] -= A[i, :]
            self.gen_z.append(mz)
            self.gen_lam.append(ml)
            self.gen_root.append(mr)
        self._enumerate()

    def _enumerate(self):
        n = self.datum.rank
        eye = np.eye(n, dtype=np.int64)
        keys = {eye.tobytes(): 0}
        mats = [eye]
        levels = [[0]]
        lengths = [0]
        # BFS by left multiplication s_i w
        while levels[-1]:
            nxt = []
            for w in levels[-1]:
                for i in range(n):
                    m = self.gen_z[i] @ mats[w]
                    k = m.tobytes()
                    if k not in keys:
                        keys[k] = len(mats)
                        mats.append(m)
                        lengths.append(len(levels))
                        nxt.append(keys[k])
            levels.append(nxt)
        if len(mats) != self.datum.order:
            raise ConfigurationError(
                f"enumerated {len(mats)} elements, expected {self.datum.order} for {self.datum.name}"
            )
        # lexicographically least reduced words: first letter = smallest left descent
        words = [None] * len(mats)
        words[0] = ()
        for level in levels[1:]:
            for w in level:
                for i in range(n):
                    k = keys[(self.gen_z[i] @ mats[w]).tobytes()]
                    if lengths[k] < lengths[w]:
                        words[w] = (i,) + words[k]
                        break
        order = sorted(range(len(mats)), key=lambda w: (lengths[w], words[w]))
        self.words = [words[w] for w in order]
        self.z_mats = [mats[w] for w in order]
        for m in self.z_mats:
            m.setflags(write=False)
        self._key = {m.tobytes(): k for k, m in enumerate(self.z_mats)}
        self.lengths = np.array([len(w) for w in self.words], dtype=np.int64)
        self.size = len(self.words)
        self.lam_mats = [self._word_matrix(self.gen_lam, w) for w in self.words]
        self.root_mats = [self._word_matrix(self.gen_root, w) for w in self.words]
        self.inverse = np.array([self._key[np.round(np.linalg.inv(m)).astype(np.int64).tobytes()]
                                 for m in self.z_mats], dtype=np.intp)
        self.generators = [self._key[m.tobytes()] for m in self.gen_z]
        self.longest = int(np.argmax(self.lengths))
        self.table = None
        if self.size <= TABLE_LIMIT:
            Z = np.stack(self.z_mats)
            table = np.empty((self.size, self.size), dtype=np.intp)
            for a in range(self.size):
                prods = np.einsum("ij,bjk->bik", Z[a], Z)
                table[a] = [self._key[p.tobytes()] for p in prods]
            self.table = table

    @staticmethod
    def _word_matrix(gens, word):
        m = np.eye(gens[0].shape[0], dtype=np.int64)
        for i in word:
            m = m @ gens[i]
        m.setflags(write=False)
        return m

    def __len__(self):
        return self.size

    def __iter__(self):
        return (WeylElement(self, k) for k in range(self.size))

    def __getitem__(self, k) -> WeylElement:
        return WeylElement(self, self.index(k))

    def index(self, w) -> int:
        """Index of ``w``: a WeylElement, an int, or a word (sequence of simple indices)."""
        if isinstance(w, WeylElement):
            if w.group is not self:
                raise InvalidArgumentError("Weyl element belongs to a different root datum")
            return w.index
        if isinstance(w, (int, np.integer)):
            if not 0 <= w < self.size:
                raise InvalidArgumentError(f"index {w} out of range")
            return int(w)
        return self.from_word(w)

    def from_word(self, word) -> int:
        m = np.eye(self.datum.rank, dtype=np.int64)
        for i in word:
            if not 0 <= i < self.datum.rank:
                raise InvalidArgumentError(f"simple index {i} out of range")
            m = m @ self.gen_z[i]
        return self._key[m.tobytes()]

    def mult(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        return self._key[(self.z_mats[a] @ self.z_mats[b]).tobytes()]

    def left_translation(self, w: int) -> np.ndarray:
        """Index map ``u -> w u`` over the whole group."""
        if self.table is not None:
            return self.table[w]
        return np.array([self.mult(w, u) for u in range(self.size)], dtype=np.intp)

    def inversion_set(self, w: int) -> list:
        inv = self.root_mats[self.inverse[w]]
        out = []
        for r in self.datum.positive_roots:
            image = inv @ np.asarray(r, dtype=np.int64)
            if np.all(image <= 0):
                out.append(r)
        return out

    def simple_reflection(self, i: int) -> int:
        return self.generators[i]

    def bruhat_leq(self, v: int, w: int) -> bool:
        return _bruhat(self, v, w)

    @cached_property
    def bruhat_matrix(self) -> np.ndarray:
        """Boolean matrix ``B[v, w] = (v <= w)``."""
        B = np.zeros((self.size, self.size), dtype=bool)
        for w in range(self.size):
            for v in range(self.size):
                B[v, w] = self.bruhat_leq(v, w)
        return B

    def braid_order(self, i: int, j: int) -> int:
        """Order ``m_ij`` of ``s_i s_j``."""
        x = self.mult(self.generators[i], self.generators[j])
        y, m = x, 1
        while y != 0:
            y = self.mult(y, x)
            m += 1
        return m


@lru_cache(maxsize=None)
def _bruhat_cached(group, v, w):
    if v == w or v == 0:
        return True
    if w == 0 or group.lengths[v] >= group.lengths[w]:
        return False
    s = group.generators[group.words[w][0]]
    sw = group.mult(s, w)
    sv = group.mult(s, v)
    if group.lengths[sv] < group.lengths[v]:
        return _bruhat_cached(group, sv, sw)
    return _bruhat_cached(group, v, sw)


def _bruhat(group, v, w):
    return _bruhat_cached(group, int(v), int(w))


# ---------------------------------------------------------------------------
# functional interface


def build_root_system(type_label: str, rank: int) -> CartanDatum:
    return CartanDatum(type_label, rank)


def weyl_enumerate(datum: CartanDatum) -> list:
    return list(datum.weyl)


def _same_group(u: WeylElement, v: WeylElement):
    if not (isinstance(u, WeylElement) and isinstance(v, WeylElement)) or u.group is not v.group:
        raise InvalidArgumentError("Weyl elements from different root data")
    return u.group


def weyl_multiply(u: WeylElement, v: WeylElement) -> WeylElement:
    g = _same_group(u, v)
    return WeylElement(g, g.mult(u.index, v.index))


def weyl_invert(w: WeylElement) -> WeylElement:
    return WeylElement(w.group, w.group.inverse[w.index])


def longest_element(datum: CartanDatum) -> WeylElement:
    return WeylElement(datum.weyl, datum.weyl.longest)


def inversion_set(w: WeylElement) -> set:
    """``{alpha > 0 : w^{-1} alpha < 0}`` as a set of root coordinate tuples."""
    return set(w.group.inversion_set(w.index))


def bruhat_leq(v: WeylElement, w: WeylElement) -> bool:
    g = _same_group(v, w)
    return g.bruhat_leq(v.index, w.index)


def _as_vector(w, x):
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[-1:] != (w.group.datum.rank,):
        raise InvalidArgumentError(f"expected vectors of length {w.group.datum.rank}, got shape {x.shape}")
    return x


def act_on_z(w: WeylElement, z) -> np.ndarray:
    """``w . z`` on coweight coordinates; ``s_i z = z - alpha_i(z) alpha_i^vee``."""
    z = _as_vector(w, z)
    return z @ w.group.z_mats[w.index].T


def act_on_lambda(w: WeylElement, lam) -> np.ndarray:
    """``w . lambda`` on weight coordinates; ``s_i lambda = lambda - lambda(alpha_i^vee) alpha_i``."""
    lam = _as_vector(w, lam)
    return lam @ w.group.lam_mats[w.index].T


def act_on_root(w: WeylElement, root) -> tuple:
    image = w.group.root_mats[w.index] @ np.asarray(root, dtype=np.int64)
    return tuple(int(v) for v in image)


def root_pairing(root, z) -> complex:
    """``z_alpha`` for a root given in simple-root coordinates."""
    return np.asarray(z, dtype=np.complex128) @ np.asarray(root, dtype=np.float64)


def coroot_pairing(coroot, lam) -> complex:
    """``lambda_{alpha^vee}`` for a coroot given in simple-coroot coordinates."""
    return np.asarray(lam, dtype=np.complex128) @ np.asarray(coroot, dtype=np.float64)

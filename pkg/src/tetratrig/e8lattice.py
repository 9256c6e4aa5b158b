"""The E8 root lattice on the even subsets of {1, 2, 3, 4}.

Coordinates are indexed by the eight even subsets (``AFF_POINTS``) and stored
doubled, so a lattice vector ``sum x_s e_s`` with ``x_s`` in ``Z/2`` is the
integer 8-tuple ``d_s = 2 x_s``.  The form is ``B(v, w) = -2 sum x_s y_s``;
roots have ``B(r, r) = -2``.  Everything here is exact integer arithmetic.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotARoot, NotInLattice

# canonical order: empty set, the six pairs, the full set
AFF_POINTS: tuple[frozenset, ...] = (
    frozenset(),
    frozenset({1, 2}),
    frozenset({1, 3}),
    frozenset({1, 4}),
    frozenset({2, 3}),
    frozenset({2, 4}),
    frozenset({3, 4}),
    frozenset({1, 2, 3, 4}),
)
LABELS: tuple[str, ...] = ("0", "12", "13", "14", "23", "24", "34", "I")
EMPTY, FULL = 0, 7
PAIR_LABELS = LABELS[1:7]
_ALIASES = {"∅": "0", "empty": "0", "1234": "I"}


def point_index(label) -> int:
    """Index of an even subset given as a label ("0", "12", ..., "I"), a
    pair of vertices or a set."""
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
        if 0 <= label < 8:
            return int(label)
        raise KeyError(label)
    if isinstance(label, (tuple, list, set, frozenset)):
        return AFF_POINTS.index(frozenset(label))
    label = str(label)
    label = _ALIASES.get(label, label)
    if label in LABELS:
        return LABELS.index(label)
    if len(label) == 2 and label.isdigit():
        return LABELS.index("".join(sorted(label)))
    raise KeyError(f"unknown even subset {label!r}")


def _code() -> frozenset:
    """Binary code of mod-2 patterns allowed for doubled coordinates."""
    words = {(0,) * 8, (1,) * 8}
    for plane in affine_planes():
        w = tuple(1 if i in plane else 0 for i in range(8))
        words.add(w)
    return frozenset(words)


@lru_cache(maxsize=None)
def affine_planes() -> tuple[tuple[int, ...], ...]:
    """The 14 four-point subsets closed under triple symmetric difference."""
    planes = []
    for quad in itertools.combinations(range(8), 4):
        sets = [AFF_POINTS[i] for i in quad]
        if all((a ^ b ^ c) in sets for a, b, c in itertools.combinations(sets, 3)):
            planes.append(quad)
    return tuple(planes)


@lru_cache(maxsize=None)
def code_words() -> frozenset:
    return _code()


@dataclass(frozen=True)
class LatticeVec:
    """Vector of the E8 lattice in doubled integer coordinates."""

    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if len(d) != 8:
            raise NotInLattice("need 8 coordinates")
        if tuple(x % 2 for x in d) not in code_words():
            raise NotInLattice(f"{d} is not in the lattice")
        object.__setattr__(self, "d", d)

    # construction
    @classmethod
    def basis(cls, label) -> "LatticeVec":
        d = [0] * 8
        d[point_index(label)] = 2
        return cls(tuple(d))

    @classmethod
    def from_halves(cls, coeffs: dict) -> "LatticeVec":
        """From a mapping label -> coefficient, coefficients in Z/2 (e.g. 0.5, -1)."""
        d = [0] * 8
        for k, c in coeffs.items():
            twice = 2 * c
            if int(round(twice)) != twice:
                raise NotInLattice(f"coefficient {c} is not a half-integer")
            d[point_index(k)] += int(round(twice))
        return cls(tuple(d))

    @classmethod
    def zero(cls) -> "LatticeVec":
        return cls((0,) * 8)

    # arithmetic
    def __add__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(tuple(a + b for a, b in zip(self.d, other.d)))

    def __sub__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(tuple(a - b for a, b in zip(self.d, other.d)))

    def __neg__(self) -> "LatticeVec":
        return LatticeVec(tuple(-a for a in self.d))

    def __mul__(self, k: int) -> "LatticeVec":
        return LatticeVec(tuple(k * a for a in self.d))

    __rmul__ = __mul__

    def halve(self) -> "LatticeVec":
        """``v / 2``; raises :class:`NotInLattice` if that leaves the lattice."""
        if any(a % 2 for a in self.d):
            raise NotInLattice("vector is not divisible by 2 in coordinates")
        return LatticeVec(tuple(a // 2 for a in self.d))

    def coeff(self, label):
        """Coefficient ``x_s`` (a float; exact because it is a half-integer)."""
        return self.d[point_index(label)] / 2

    def __iter__(self):
        return iter(self.d)

    def __repr__(self):
        terms = []
        for lab, x in zip(LABELS, self.d):
            if x:
                coef = f"{x // 2:+d}" if x % 2 == 0 else f"{x:+d}/2"
                terms.append(f"{coef} e{lab}")
        return "LatticeVec(" + (" ".join(terms) or "0") + ")"

    def array(self) -> np.ndarray:
        return np.array(self.d, dtype=np.int64)


def e(label) -> LatticeVec:
    """The basis root ``e_s``."""
    return LatticeVec.basis(label)


def half(*terms) -> LatticeVec:
    """``(sum of signed basis vectors) / 2``; terms are labels, prefix '-' to negate."""
    d = [0] * 8
    for t in terms:
        t = str(t)
        sign = -1 if t.startswith("-") else 1
        d[point_index(t.lstrip("+-"))] += sign
    return LatticeVec(tuple(d))


def as_vec(v) -> LatticeVec:
    if isinstance(v, LatticeVec):
        return v
    return LatticeVec(tuple(v))


def inner(v, w) -> int:
    """``B(v, w) = -2 sum x_s y_s``, an integer on the lattice."""
    v, w = as_vec(v), as_vec(w)
    total = sum(a * b for a, b in zip(v.d, w.d))
    # on the lattice the doubled dot product is always even
    return -(total // 2)


def norm(v) -> int:
    return inner(v, v)


def is_root(v) -> bool:
    return inner(v, v) == -2


@lru_cache(maxsize=None)
def roots() -> tuple[LatticeVec, ...]:
    """All 240 roots: ``±e_s`` and ``(±e_a ±e_b ±e_c ±e_d)/2`` over affine planes."""
    out = []
    for i in range(8):
        for s in (2, -2):
            d = [0] * 8
            d[i] = s
            out.append(LatticeVec(tuple(d)))
    for plane in affine_planes():
        for signs in itertools.product((1, -1), repeat=4):
            d = [0] * 8
            for i, s in zip(plane, signs):
                d[i] = s
            out.append(LatticeVec(tuple(d)))
    return tuple(out)


@lru_cache(maxsize=None)
def root_set() -> frozenset:
    return frozenset(roots())


SUBSYSTEMS = ("E7L", "E7A", "D6")


@lru_cache(maxsize=None)
def sub_roots(kind: str) -> tuple[LatticeVec, ...]:
    """Roots orthogonal to ``e_I`` (E7L), to ``e_0`` (E7A), or to both (D6)."""
    if kind == "E7L":
        keep = lambda r: r.d[FULL] == 0  # noqa: E731
    elif kind == "E7A":
        keep = lambda r: r.d[EMPTY] == 0  # noqa: E731
    elif kind == "D6":
        keep = lambda r: r.d[FULL] == 0 and r.d[EMPTY] == 0  # noqa: E731
    else:
        raise ValueError(f"unknown root subsystem {kind!r}")
    return tuple(r for r in roots() if keep(r))


def in_sublattice(v, kind: str) -> bool:
    """Membership of a lattice vector in the span of the given subsystem.

    The E7 lattices are exact orthogonal complements of a root, and the D6
    lattice is the complement of both ``e_0`` and ``e_I``.
    """
    v = as_vec(v)
    if kind == "E7L":
        return v.d[FULL] == 0
    if kind == "E7A":
        return v.d[EMPTY] == 0
    if kind == "D6":
        return v.d[FULL] == 0 and v.d[EMPTY] == 0
    if kind == "E8":
        return True
    raise ValueError(f"unknown sublattice {kind!r}")


def reflect(r, v) -> LatticeVec:
    """``s_r(v) = v + B(v, r) r``."""
    r, v = as_vec(r), as_vec(v)
    if not is_root(r):
        raise NotARoot(f"{r} is not a root")
    return v + inner(v, r) * r


_COMPLEMENT = tuple(AFF_POINTS.index(AFF_POINTS[FULL] - s) for s in AFF_POINTS)


def duality_D(v) -> LatticeVec:
    """Permute coordinates by complementation ``s -> I \\ s``."""
    v = as_vec(v)
    return LatticeVec(tuple(v.d[_COMPLEMENT[i]] for i in range(8)))


# ---------------------------------------------------------------------------
# Weyl group elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeylElem:
    """Lattice isometry acting on doubled coordinates.

    Reflections in half-vector roots have entries 1/2 in doubled coordinates,
    so the element is stored as the integer matrix ``twice = 2 M``.
    """

    twice: np.ndarray
    word: tuple[int, ...] = ()

    def __post_init__(self):
        m = np.asarray(self.twice, dtype=np.int64)
        m.setflags(write=False)
        object.__setattr__(self, "twice", m)

    @property
    def matrix(self) -> np.ndarray:
        return self.twice / 2

    def key(self) -> bytes:
        return self.twice.tobytes()

    def __eq__(self, other):
        return isinstance(other, WeylElem) and np.array_equal(self.twice, other.twice)

    def __hash__(self):
        return hash(self.key())

    def __call__(self, v) -> LatticeVec:
        num = self.twice @ as_vec(v).array()
        if np.any(num % 2):
            raise NotInLattice("element does not preserve the doubled lattice")
        return LatticeVec(tuple(int(x) for x in num // 2))

    def __matmul__(self, other: "WeylElem") -> "WeylElem":
        prod = self.twice @ other.twice
        return WeylElem(prod // 2, self.word + other.word)

    def inverse(self) -> "WeylElem":
        # isometries of a diagonal form: inverse is the transpose
        return WeylElem(self.twice.T.copy(), tuple(reversed(self.word)))

    def preserves_form(self) -> bool:
        m = self.twice
        return bool(np.array_equal(m.T @ m, 4 * np.eye(8, dtype=np.int64)))

    @classmethod
    def identity(cls) -> "WeylElem":
        return cls(2 * np.eye(8, dtype=np.int64))

    @classmethod
    def reflection(cls, r) -> "WeylElem":
        r = as_vec(r)
        if not is_root(r):
            raise NotARoot(f"{r} is not a root")
        a = r.array()
        # 2 s_r acts on doubled coordinates as 2 d - (d . a) a
        return cls(2 * np.eye(8, dtype=np.int64) - np.outer(a, a))


def regge_root() -> LatticeVec:
    return half("13", "14", "23", "24")


def regge_reflection() -> WeylElem:
    """Reflection in ``(e13 + e14 + e23 + e24) / 2``."""
    return WeylElem.reflection(regge_root())


def sign_flip(labels) -> WeylElem:
    """Product of the reflections ``s_{e_ij}`` for the given pairs."""
    g = WeylElem.identity()
    for lab in labels:
        g = g @ WeylElem.reflection(e(lab))
    return WeylElem(g.twice)


def regge_composite() -> WeylElem:
    """``s_r`` followed by sign changes on e13, e14, e23, e24.

    This composite sends ``e13`` to ``(e14 + e23 + e24 - e13)/2`` and fixes
    ``e12`` and ``e34``.
    """
    return sign_flip(("13", "14", "23", "24")) @ regge_reflection()


def simple_roots_d6() -> tuple[LatticeVec, ...]:
    """Simple roots of D6 for a fixed generic height function."""
    height = np.array([0, 1, 2.1, 4.3, 8.7, 17.9, 35.1, 0])
    pos = [r for r in sub_roots("D6") if float(height @ r.array()) > 0]
    pos_set = set(pos)
    return tuple(r for r in pos if not any((r - a) in pos_set for a in pos))


class WeylGroupD6:
    """W(D6) inside the isometries of E8, enumerated by breadth-first closure."""

    def __init__(self):
        self.generators = tuple(WeylElem.reflection(r) for r in simple_roots_d6())
        self._elements: dict[bytes, WeylElem] = {}
        self._build()

    def _build(self):
        ident = WeylElem.identity()
        self._elements[ident.key()] = ident
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for k, s in enumerate(self.generators):
                h = WeylElem((s.twice @ g.twice) // 2, (k,) + g.word)
                key = h.key()
                if key not in self._elements:
                    self._elements[key] = h
                    queue.append(h)

    @property
    def order(self) -> int:
        return len(self._elements)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self._elements.values())

    def __contains__(self, g: WeylElem) -> bool:
        return g.key() in self._elements

    def lookup(self, g: WeylElem) -> WeylElem:
        """The stored copy of ``g`` (carrying its generator word)."""
        return self._elements[g.key()]

    def random_element(self, rng: random.Random | None = None) -> WeylElem:
        rng = rng or random.Random(0)
        return rng.choice(list(self._elements.values()))

    def word_to_element(self, word) -> WeylElem:
        g = WeylElem.identity()
        for k in word:
            g = g @ self.generators[k]
        return g

    def orbit(self, v) -> set:
        return {g(v) for g in self}

    def stabilizer(self, vectors) -> list[WeylElem]:
        """Elements mapping the given finite set of vectors onto itself."""
        target = frozenset(as_vec(v) for v in vectors)
        return [g for g in self if frozenset(g(v) for v in target) == target]


@lru_cache(maxsize=1)
def weyl_d6_group() -> WeylGroupD6:
    return WeylGroupD6()


def edge_roots() -> list[LatticeVec]:
    """``±e_ij`` for the six pairs."""
    return [s * e(lab) for lab in PAIR_LABELS for s in (1, -1)]

"""Exact lattice bookkeeping for the surface attached to a tetrahedron.

Two lattices appear.  The blow-up of the quadric at the twelve edge points has
basis ``L, R, E_ij`` (ordered pairs).  Blowing down four disjoint (-1)-classes
gives a rank-10 lattice with basis ``l, r, u_ij`` for the eight surviving
points.  Everything here is integer arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import e8lattice as e8
from .e8lattice import LatticeVec, e, half
from .errors import ConsistencyFailure, GramMismatch, NotInComplement, NotInFPerp

ORDERED_PAIRS = tuple((i, j) for i in range(1, 5) for j in range(1, 5) if i != j)
RT_LABELS = ("L", "R") + tuple(f"E{i}{j}" for i, j in ORDERED_PAIRS)
SURVIVORS = ("13", "31", "14", "41", "23", "32", "24", "42")
PIC_LABELS = ("l", "r") + tuple("u" + s for s in SURVIVORS)


def _rt_gram() -> np.ndarray:
    g = np.zeros((14, 14), dtype=np.int64)
    g[0, 1] = g[1, 0] = 1
    for k in range(2, 14):
        g[k, k] = -1
    return g


def _pic_gram() -> np.ndarray:
    g = np.zeros((10, 10), dtype=np.int64)
    g[0, 1] = g[1, 0] = 1
    for k in range(2, 10):
        g[k, k] = -1
    return g


RT_GRAM = _rt_gram()
PIC_GRAM = _pic_gram()


class _IntClass:
    labels: tuple = ()
    gram: np.ndarray

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=np.int64).reshape(-1)
        if c.shape != (len(self.labels),):
            raise ValueError(f"need {len(self.labels)} coefficients")
        self.c = c

    @classmethod
    def from_dict(cls, d: dict):
        c = np.zeros(len(cls.labels), dtype=np.int64)
        for k, v in d.items():
            c[cls.labels.index(k)] += v
        return cls(c)

    @classmethod
    def basis(cls, label):
        return cls.from_dict({label: 1})

    @classmethod
    def zero(cls):
        return cls(np.zeros(len(cls.labels), dtype=np.int64))

    def __add__(self, other):
        return type(self)(self.c + other.c)

    def __sub__(self, other):
        return type(self)(self.c - other.c)

    def __neg__(self):
        return type(self)(-self.c)

    def __mul__(self, k: int):
        return type(self)(int(k) * self.c)

    __rmul__ = __mul__

    def __eq__(self, other):
        return type(self) is type(other) and bool(np.array_equal(self.c, other.c))

    def __hash__(self):
        return hash((type(self).__name__, tuple(self.c.tolist())))

    def dot(self, other) -> int:
        return int(self.c @ self.gram @ other.c)

    def as_dict(self) -> dict:
        return {lab: int(x) for lab, x in zip(self.labels, self.c) if x}

    def __str__(self):
        terms = []
        for lab, x in zip(self.labels, self.c):
            if x == 1:
                terms.append(f"+{lab}")
            elif x == -1:
                terms.append(f"-{lab}")
            elif x:
                terms.append(f"{x:+d}{lab}")
        return "".join(terms).lstrip("+") or "0"

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class RTClass(_IntClass):
    labels = RT_LABELS
    gram = RT_GRAM


class PicClass(_IntClass):
    labels = PIC_LABELS
    gram = PIC_GRAM


def rt_pairing(a: RTClass, b: RTClass) -> int:
    return a.dot(b)


def pic_pairing(a: PicClass, b: PicClass) -> int:
    return a.dot(b)


def E(i: int, j: int) -> RTClass:
    return RTClass.basis(f"E{i}{j}")


def u(label: str) -> PicClass:
    return PicClass.basis("u" + label)


L_CLASS = RTClass.basis("L")
R_CLASS = RTClass.basis("R")
l_cls = PicClass.basis("l")
r_cls = PicClass.basis("r")


def canonical_class() -> PicClass:
    k = -2 * l_cls - 2 * r_cls
    for s in SURVIVORS:
        k = k + u(s)
    return k


def fiber_class() -> PicClass:
    return -canonical_class()


def contracted_classes() -> tuple[RTClass, ...]:
    """The four disjoint (-1)-classes that are blown down."""
    return (
        E(2, 1),
        L_CLASS - E(1, 2),
        R_CLASS - E(1, 2),
        L_CLASS + R_CLASS - E(3, 4) - E(4, 3) - E(1, 2),
    )


def pic_to_rt(c: PicClass) -> RTClass:
    """Inverse of the blow-down on the complement: ``l, r, u`` as blow-up classes."""
    lift_l = L_CLASS + R_CLASS - E(1, 2) - E(3, 4)
    lift_r = L_CLASS + R_CLASS - E(1, 2) - E(4, 3)
    out = int(c.c[0]) * lift_l + int(c.c[1]) * lift_r
    for k, s in enumerate(SURVIVORS):
        out = out + int(c.c[2 + k]) * E(int(s[0]), int(s[1]))
    return out


def blow_down(c: RTClass, strict: bool = False) -> PicClass:
    """Orthogonal projection away from the contracted classes, in the ``l, r, u`` basis."""
    contracted = contracted_classes()
    hits = [rt_pairing(c, k) for k in contracted]
    if strict and any(hits):
        raise NotInComplement(f"class pairs {hits} with the contracted curves")
    # the contracted classes are disjoint with square -1
    proj = c
    for h, k in zip(hits, contracted):
        proj = proj + h * k
    lift_l, lift_r = pic_to_rt(l_cls), pic_to_rt(r_cls)
    coeffs = [rt_pairing(proj, lift_r), rt_pairing(proj, lift_l)]
    coeffs += [-rt_pairing(proj, E(int(s[0]), int(s[1]))) for s in SURVIVORS]
    out = PicClass(coeffs)
    if pic_to_rt(out) != proj:
        raise ConsistencyFailure("projection left the span of the surviving classes")
    return out


def plane_section_class(k: int) -> RTClass:
    """Strict transform of ``H_k ∩ Q``: the conic through the six edge points on ``H_k``."""
    out = L_CLASS + R_CLASS
    for i, j in ORDERED_PAIRS:
        if k not in (i, j):
            out = out - E(i, j)
    return out


@lru_cache(maxsize=None)
def fiber_component_classes() -> tuple[PicClass, PicClass, PicClass, PicClass]:
    """``(F11, F12, F21, F22)`` from the conics on ``H3, H4, H1, H2``."""
    f11, f12, f21, f22 = (blow_down(plane_section_class(k)) for k in (3, 4, 1, 2))
    f = fiber_class()
    checks = {
        "F11^2": (f11.dot(f11), -2),
        "F21^2": (f21.dot(f21), -2),
        "F11.F12": (f11.dot(f12), 2),
        "F21.F22": (f21.dot(f22), 2),
    }
    for a in (f11, f12):
        for b in (f21, f22):
            checks[f"{a}.{b}"] = (a.dot(b), 0)
    bad = {k: v for k, v in checks.items() if v[0] != v[1]}
    if bad or f11 + f12 != f or f21 + f22 != f:
        raise ConsistencyFailure(f"fiber components fail their checks: {bad}")
    return f11, f12, f21, f22


def classify(c: PicClass) -> str:
    f = fiber_class()
    sq, deg = c.dot(c), c.dot(f)
    if (sq, deg) == (-1, 1):
        return "section"
    if (sq, deg) == (-2, 0):
        return "fiber_component"
    if (sq, deg) == (0, 0):
        nz = np.nonzero(f.c)[0]
        k = Fraction(int(c.c[nz[0]]), int(f.c[nz[0]]))
        if k.denominator == 1 and c == int(k) * f:
            return "fiber"
    return "other"


def genus(c: PicClass) -> Fraction:
    """Arithmetic genus from adjunction ``2g - 2 = c^2 + K.c``."""
    return Fraction(c.dot(c) + canonical_class().dot(c) + 2, 2)


# ---------------------------------------------------------------------------
# Markings
# ---------------------------------------------------------------------------

def _pic(expr: str) -> PicClass:
    """Parse ``"-l-r+u24+u42"``-style sums."""
    out = PicClass.zero()
    for sign, name in _tokens(expr):
        out = out + sign * PicClass.basis(name)
    return out


def _tokens(expr: str):
    expr = expr.replace(" ", "")
    if expr[0] not in "+-":
        expr = "+" + expr
    k = 0
    while k < len(expr):
        sign = 1 if expr[k] == "+" else -1
        m = k + 1
        while m < len(expr) and expr[m] not in "+-":
            m += 1
        yield sign, expr[k + 1 : m]
        k = m


# E8 Dynkin diagram: chain 0-1-2-4-5-6-7 with node 3 attached to node 2
DYNKIN_EDGES = ((0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (5, 6), (6, 7))

REFERENCE_NODES = (
    "-l-r+u24+u42+u14+u41",
    "-l+u13+u31",
    "l-u24-u13",
    "l+r-u23-u31-u14-u42",
    "l+r-u31-u32-u41-u42",
    "r-u13-u14",
    "l+r-u23-u31-u41-u24",
    "l-u32-u14",
)

SIMPLE_E8 = (
    -e("I"),
    half("-34", "12", "0", "I"),
    half("13", "34", "-12", "-24"),
    half("23", "24", "-13", "-14"),
    half("14", "24", "-13", "-23"),
    half("13", "-14", "-34", "-0"),
    half("14", "23", "-13", "-24"),
    half("12", "34", "-14", "-23"),
)


def dynkin_gram() -> np.ndarray:
    g = -2 * np.eye(8, dtype=np.int64)
    for a, b in DYNKIN_EDGES:
        g[a, b] = g[b, a] = 1
    return g


@dataclass
class MarkingIso:
    """Matching of eight simple roots of ``f^perp/f`` with eight E8 vectors."""

    classes: tuple
    vectors: tuple
    _inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._inv = None
        mism = self.gram_mismatches()
        if mism:
            raise GramMismatch(f"Gram matrices differ at {mism}", mism)
        g = self.pic_gram()
        inv = np.linalg.inv(g.astype(float))
        inv_int = np.rint(inv).astype(np.int64)
        if abs(round(np.linalg.det(g.astype(float)))) != 1 or not np.array_equal(inv_int @ g, np.eye(8, dtype=np.int64)):
            raise GramMismatch("simple classes do not form a unimodular basis")
        self._inv = inv_int

    def pic_gram(self) -> np.ndarray:
        return np.array([[a.dot(b) for b in self.classes] for a in self.classes], dtype=np.int64)

    def e8_gram(self) -> np.ndarray:
        return np.array([[e8.inner(a, b) for b in self.vectors] for a in self.vectors], dtype=np.int64)

    def gram_mismatches(self) -> list:
        p, q = self.pic_gram(), self.e8_gram()
        return [(a, b) for a in range(8) for b in range(a, 8) if p[a, b] != q[a, b]]

    def coefficients(self, c: PicClass) -> np.ndarray:
        """Coordinates of ``c`` mod ``f`` in the simple classes."""
        f = fiber_class()
        if c.dot(f) != 0:
            raise NotInFPerp(f"class pairs {c.dot(f)} with the fiber")
        pair = np.array([c.dot(s) for s in self.classes], dtype=np.int64)
        n = self._inv @ pair
        rest = c - _combine(self.classes, n)
        # what remains is orthogonal to f^perp, so a multiple of f
        if rest.dot(rest) != 0 or any(rest.dot(s) for s in self.classes) or not _is_multiple(rest, f):
            raise ConsistencyFailure("simple classes and f do not span f^perp")
        return n

    def project(self, c: PicClass) -> LatticeVec:
        n = self.coefficients(c)
        out = LatticeVec.zero()
        for k, v in zip(n, self.vectors):
            out = out + int(k) * v
        return out


def _combine(classes, coeffs) -> PicClass:
    out = PicClass.zero()
    for k, c in zip(coeffs, classes):
        out = out + int(k) * c
    return out


def _is_multiple(c: PicClass, f: PicClass) -> bool:
    return classify(c) == "fiber" or not c.c.any()


@lru_cache(maxsize=None)
def reference_marking() -> MarkingIso:
    return MarkingIso(tuple(_pic(s) for s in REFERENCE_NODES), SIMPLE_E8)


def project_mod_f(c: PicClass) -> LatticeVec:
    return reference_marking().project(c)


# ---------------------------------------------------------------------------
# Conic bundle with class B
# ---------------------------------------------------------------------------

def singular_fiber_components(B: PicClass) -> list[tuple[PicClass, PicClass]]:
    """Pairs ``(u, B - u)`` for each exceptional ``u`` of degree 0 on ``B``."""
    out = []
    for s in SURVIVORS:
        c = u(s)
        if c.dot(B) == 0:
            out.append((c, B - c))
    return out


def verify_2B(B: PicClass, four_components) -> tuple[bool, PicClass]:
    """Check ``2B = sum(components) + F11 - F22``; returns the flag and the residual."""
    f11, _, _, f22 = fiber_component_classes()
    total = f11 - f22
    for c in four_components:
        total = total + c
    res = 2 * B - total
    return not res.c.any(), res


def search_2B(B: PicClass) -> list[tuple[PicClass, ...]]:
    """All 4-sets of fiber components (one per fiber) satisfying the 2B identity."""
    comps = singular_fiber_components(B)
    found = []
    for fibers in itertools.combinations(range(len(comps)), 4):
        for choice in itertools.product((0, 1), repeat=4):
            picked = tuple(comps[k][ch] for k, ch in zip(fibers, choice))
            if verify_2B(B, picked)[0]:
                found.append(picked)
    return found


# identities between components of the conic bundle and E8 vectors
BUNDLE_IDENTITIES_FIRST = (
    half("23", "24", "34", "-0"),
    half("13", "14", "34", "-0"),
    half("12", "14", "24", "-0"),
    half("12", "13", "23", "-0"),
    half("12", "14", "23", "34"),
    half("12", "13", "24", "34"),
    half("13", "14", "23", "24"),
)
BUNDLE_IDENTITIES_SECOND = (
    half("12", "13", "14", "I"),
    half("12", "23", "24", "I"),
    half("13", "23", "34", "I"),
    half("14", "24", "34", "I"),
    half("12", "14", "23", "34"),
    half("12", "13", "24", "34"),
    half("13", "14", "23", "24"),
)


@dataclass(frozen=True)
class BundleAssignment:
    """Ordered singular fibers ``p1..p8`` with the component on each side."""

    B: PicClass
    first: tuple   # component meeting F11, per fiber
    second: tuple  # component meeting F21, per fiber

    def node_classes(self) -> tuple:
        b = self.first
        f11 = fiber_component_classes()[0]
        return (
            -f11,
            self.B - b[0] - b[1],
            b[1] - b[2],
            b[0] - b[1],
            b[2] - b[3],
            b[3] - b[4],
            b[4] - b[5],
            b[5] - b[6],
        )


def _component_meeting(pair, section: PicClass):
    hits = [c for c in pair if c.dot(section) == 1]
    if len(hits) != 1:
        raise ConsistencyFailure("section does not meet exactly one component")
    return hits[0]


def identity_failures(a: BundleAssignment, marking: MarkingIso | None = None) -> list[str]:
    marking = marking or reference_marking()
    bad = []
    for k in range(7):
        if marking.project(a.first[k] - a.first[7]) != BUNDLE_IDENTITIES_FIRST[k]:
            bad.append(f"first[{k + 1}]")
        if -marking.project(a.second[k] - a.second[7]) != BUNDLE_IDENTITIES_SECOND[k]:
            bad.append(f"second[{k + 1}]")
    return bad


def search_bundle_assignments(B: PicClass | None = None) -> list[BundleAssignment]:
    """Orderings of the singular fibers for which the conic-bundle simple roots give
    a marking satisfying the 2B identity and all fourteen component identities.

    The component on each side is fixed by which section it meets.  By the 2B
    identity the first four fibers are those whose two sides agree, leaving
    ``4! * 4!`` orderings to test.
    """
    B = l_cls if B is None else B
    f11, _, f21, _ = fiber_component_classes()
    comps = singular_fiber_components(B)
    first = [_component_meeting(p, f11) for p in comps]
    second = [_component_meeting(p, f21) for p in comps]
    same = [k for k in range(len(comps)) if first[k] == second[k]]
    diff = [k for k in range(len(comps)) if first[k] != second[k]]
    results = []
    for head in itertools.permutations(same):
        for tail in itertools.permutations(diff):
            idx = head + tail
            a = BundleAssignment(B, tuple(first[i] for i in idx), tuple(second[i] for i in idx))
            if not verify_2B(B, a.first[:4])[0]:
                continue
            try:
                marking = MarkingIso(a.node_classes(), SIMPLE_E8)
            except GramMismatch:
                continue
            if not identity_failures(a, marking):
                results.append(a)
    return results


@lru_cache(maxsize=None)
def bundle_assignment() -> BundleAssignment:
    """First valid ordering in the canonical enumeration order.

    Every ordering within the two blocks of four fibers passes, so the choice
    only fixes labels; :func:`bundle_ordering_ties` reports how many tie.
    """
    found = search_bundle_assignments()
    if not found:
        raise ConsistencyFailure("no ordering of the singular fibers satisfies the identities")
    return found[0]


@lru_cache(maxsize=None)
def bundle_ordering_ties() -> int:
    return len(search_bundle_assignments())


def bundle_marking(assignment: BundleAssignment | None = None) -> MarkingIso:
    a = assignment or bundle_assignment()
    return MarkingIso(a.node_classes(), SIMPLE_E8)


@dataclass
class IdentityReport:
    passed: list
    failed: list
    roots_ok: bool
    d6_fixed: bool

    @property
    def ok(self) -> bool:
        return not self.failed and self.roots_ok and self.d6_fixed


def verify_bundle_identities(assignment: BundleAssignment | None = None) -> IdentityReport:
    a = assignment or bundle_assignment()
    marking = bundle_marking(a)
    passed, failed = [], []
    for k in range(7):
        for side, comps, target, sign in (
            ("first", a.first, BUNDLE_IDENTITIES_FIRST[k], 1),
            ("second", a.second, BUNDLE_IDENTITIES_SECOND[k], -1),
        ):
            name = f"{side}[{k + 1}]"
            got = sign * marking.project(comps[k] - comps[7])
            (passed if got == target else failed).append(name)
    roots_ok = all(e8.is_root(v) for v in BUNDLE_IDENTITIES_FIRST + BUNDLE_IDENTITIES_SECOND)
    roots_ok = roots_ok and all(e8.in_sublattice(v, "E7L") for v in BUNDLE_IDENTITIES_FIRST[:4])
    roots_ok = roots_ok and all(e8.in_sublattice(v, "D6") for v in BUNDLE_IDENTITIES_FIRST[4:])
    d6_fixed = all(e8.duality_D(v) == v for v in BUNDLE_IDENTITIES_FIRST[4:])
    return IdentityReport(passed, failed, roots_ok, d6_fixed)


# ---------------------------------------------------------------------------
# Lattice checks
# ---------------------------------------------------------------------------

def signature(gram) -> tuple[int, int]:
    """``(positive, negative)`` inertia by exact symmetric elimination."""
    m = [[Fraction(int(x)) for x in row] for row in np.asarray(gram)]
    n = len(m)
    pos = neg = 0
    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                m[k], m[j] = m[j], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    continue
                # replace row/column k by k + j to create a nonzero pivot
                for c in range(n):
                    m[k][c] += m[j][c]
                for r in range(n):
                    m[r][k] += m[r][j]
        p = m[k][k]
        if p == 0:
            continue
        pos += p > 0
        neg += p < 0
        for r in range(k + 1, n):
            f = m[r][k] / p
            if f:
                for c in range(k, n):
                    m[r][c] -= f * m[k][c]
                for c in range(k, n):
                    m[c][r] = m[r][c]
    return pos, neg


def short_vectors(gram: np.ndarray, bound: int) -> list[np.ndarray]:
    """Integer ``x`` with ``0 < x^T G x <= bound`` for positive definite ``G`` (Fincke-Pohst)."""
    g = np.asarray(gram, dtype=float)
    n = len(g)
    # q_ii and q_ij of the completed-square form
    q = g.copy()
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for m_ in range(k, n):
                q[k, m_] -= q[k, i] * q[i, m_]
    out = []
    x = np.zeros(n, dtype=np.int64)

    def rec(i, remaining):
        centre = -sum(q[i, j] * x[j] for j in range(i + 1, n))
        span = (max(remaining, 0) / q[i, i]) ** 0.5
        for xi in range(int(np.ceil(centre - span - 1e-9)), int(np.floor(centre + span + 1e-9)) + 1):
            x[i] = xi
            used = q[i, i] * (xi - centre) ** 2
            if used > remaining + 1e-9:
                continue
            if i == 0:
                val = int(x @ np.asarray(gram, dtype=np.int64) @ x)
                if 0 < val <= bound:
                    out.append(x.copy())
            else:
                rec(i - 1, remaining - used)
        x[i] = 0

    rec(n - 1, float(bound))
    return out


def minimal_vectors_mod_f() -> list[LatticeVec]:
    """Images of the norm -2 vectors of ``f^perp/f`` under the marking."""
    m = reference_marking()
    vecs = short_vectors(-m.pic_gram(), 2)
    out = []
    for n in vecs:
        v = LatticeVec.zero()
        for k, s in zip(n, m.vectors):
            v = v + int(k) * s
        out.append(v)
    return out

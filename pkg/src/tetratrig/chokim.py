"""Eight-point configurations, Cho-Kim functions and solving tetrahedra.

A Cho-Kim function is the degree-4 rational function

    CK(t) = prod (t - face_k) / ((t - 1) prod (t - cycle_m))

of a configuration ``(1, face_1..face_4, cycle_1..cycle_3)``.  It is stored by
its zeros and poles; only the principal-parameter quadratic is expanded.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import e8lattice as e8
from .config import resolve_tol
from .e8lattice import LatticeVec, e, half
from .errors import (
    AssignmentAmbiguous,
    DegenerateConfiguration,
    DegenerateQuadratic,
    NoConsistentAssignment,
    NotEquivalent,
    NoVerifyingOrder,
    TooDegenerate,
    VectorNotInDomain,
    ZeroPoleCollision,
)
from .projgeom import INF, MobiusMap, cross_ratio, dehomog, homog, mobius_through
from .tetra import (
    PAIRS,
    CharacterHom,
    MetricSpec,
    angle_from_value,
    complement,
    from_metric,
    length_function,
    metric_angles_oracle,
    pair_key,
)

FACE_LABELS = ("123", "124", "134", "234")
CYCLE_LABELS = ("1234", "1324", "1243")

# length side: face half-sums with e_0, and the three 4-cycles
FACE_ROOTS_L: tuple[LatticeVec, ...] = (
    half("12", "13", "23", "0"),
    half("12", "14", "24", "0"),
    half("13", "14", "34", "0"),
    half("23", "24", "34", "0"),
)
CYCLE_ROOTS: tuple[LatticeVec, ...] = (
    half("12", "14", "23", "34"),
    half("13", "14", "23", "24"),
    half("12", "13", "24", "34"),
)
# angle side: face ijk pairs with minus the star of the opposite vertex
FACE_ROOTS_A: tuple[LatticeVec, ...] = (
    -half("14", "24", "34", "I"),
    -half("13", "23", "34", "I"),
    -half("12", "23", "24", "I"),
    -half("12", "13", "14", "I"),
)
CYCLE_ROOTS_A: tuple[LatticeVec, ...] = tuple(-c for c in CYCLE_ROOTS)


def _as_point(z):
    if isinstance(z, (tuple, list, np.ndarray)) and len(z) == 2:
        return dehomog(homog(z))
    z = complex(z)
    return INF if cmath.isinf(z) else z


@dataclass(frozen=True)
class Config8:
    """Eight points of P^1: base point, four face values, three cycle values."""

    values: tuple

    def __post_init__(self):
        vals = tuple(_as_point(z) for z in self.values)
        if len(vals) != 8:
            raise ValueError("a configuration has 8 entries")
        object.__setattr__(self, "values", vals)

    @property
    def base(self):
        return self.values[0]

    @property
    def faces(self) -> tuple:
        return self.values[1:5]

    @property
    def cycles(self) -> tuple:
        return self.values[5:8]

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def map(self, m: MobiusMap) -> "Config8":
        return Config8(tuple(m(z) for z in self.values))

    def distance(self, other: "Config8") -> float:
        """Largest chordal distance between corresponding entries."""
        return max(_chordal(a, b) for a, b in zip(self.values, other.values))


def _chordal(a, b) -> float:
    ha, hb = homog(a), homog(b)
    ha, hb = ha / np.linalg.norm(ha), hb / np.linalg.norm(hb)
    return float(abs(ha[0] * hb[1] - ha[1] * hb[0]))


def config_metric(spec: MetricSpec, which: str, angles: dict | None = None) -> Config8:
    """Perimeter (``"Pi"``) or solid-angle (``"Omega"``) configuration."""
    if which == "Pi":
        spec.check()
        l = spec.lengths
        faces = [sum(l[pair_key(a, b)] for a, b in itertools.combinations(map(int, f), 2)) for f in FACE_LABELS]
        cycles = [sum(l[pair_key(int(c[k]), int(c[(k + 1) % 4]))] for k in range(4)) for c in CYCLE_LABELS]
        if spec.geometry == "hyperbolic":
            vals = [1.0] + [math.exp(x) for x in faces + cycles]
        else:
            vals = [1.0] + [cmath.exp(1j * x) for x in faces + cycles]
        return Config8(tuple(vals))
    if which == "Omega":
        a = dict(angles) if angles is not None else metric_angles_oracle(spec)
        faces = []
        for f in FACE_LABELS:
            # solid angle at the vertex opposite to face f
            v = ({1, 2, 3, 4} - set(map(int, f))).pop()
            faces.append(sum(a[pair_key(v, w)] for w in range(1, 5) if w != v) - math.pi)
        cycles = [sum(a[pair_key(int(c[k]), int(c[(k + 1) % 4]))] for k in range(4)) for c in CYCLE_LABELS]
        return Config8(tuple([1.0] + [cmath.exp(1j * x) for x in faces + cycles]))
    raise ValueError("which must be 'Pi' or 'Omega'")


def config_from_hom(h) -> Config8:
    """``(1, faces, cycles)`` of a length (E7L) or angle (E7A) function."""
    tag = getattr(h, "tag", None)
    if tag == "E7L":
        vecs = FACE_ROOTS_L + CYCLE_ROOTS
    elif tag == "E7A":
        vecs = FACE_ROOTS_A + CYCLE_ROOTS_A
    else:
        raise VectorNotInDomain(f"configuration needs an E7L or E7A function, got {tag!r}")
    return Config8(tuple([1.0] + [h(v) for v in vecs]))


# ---------------------------------------------------------------------------
# Cho-Kim functions
# ---------------------------------------------------------------------------

def _csum(terms) -> complex:
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _esym_terms(values, k):
    for combo in itertools.combinations(values, k):
        prod = 1.0 + 0j
        for z in combo:
            prod *= z
        yield prod


@dataclass(frozen=True)
class CKFn:
    """Degree-4 rational function stored as four zeros and four poles."""

    zeros: tuple
    poles: tuple

    def __post_init__(self):
        z = tuple(_as_point(x) for x in self.zeros)
        p = tuple(_as_point(x) for x in self.poles)
        if len(z) != 4 or len(p) != 4:
            raise ValueError("need four zeros and four poles")
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "poles", p)

    def __call__(self, t):
        return evaluate_ck(self, t)

    def finite(self) -> bool:
        return not any(x is INF for x in self.zeros + self.poles)

    def quadratic(self) -> tuple[complex, complex, complex]:
        """Coefficients ``(a, b, c)`` of ``(numerator - denominator) / t``."""
        if not self.finite():
            raise DegenerateQuadratic("zeros or poles at infinity")
        coeffs = []
        for k in (1, 2, 3):
            diff = _csum(list(_esym_terms(self.zeros, k)) + [-x for x in _esym_terms(self.poles, k)])
            coeffs.append((-1) ** k * diff)
        return coeffs[0], coeffs[1], coeffs[2]

    def constant_defect(self) -> complex:
        """``prod(zeros) - prod(poles)``; zero for configurations from characters."""
        return _csum([next(_esym_terms(self.zeros, 4)), -next(_esym_terms(self.poles, 4))])

    def discriminant(self) -> complex:
        a, b, c = self.quadratic()
        return _csum([b * b, -4 * a * c])

    def level_set(self, value=1.0) -> list:
        """Preimages of ``value`` (with multiplicity), by companion-matrix roots."""
        num = np.poly(np.array(self.zeros, dtype=complex))
        den = np.poly(np.array(self.poles, dtype=complex))
        value = complex(value)
        poly = num - value * den
        roots = list(np.roots(poly))
        # degree drops when value is the leading ratio: the rest sit at infinity
        roots += [INF] * (4 - len(roots))
        return roots


def ck_from_config(c: Config8, tol: float | None = None) -> CKFn:
    tol = max(resolve_tol(tol), 1e-12)
    zeros = c.faces
    poles = (c.base,) + c.cycles
    for z in zeros:
        for p in poles:
            if _chordal(z, p) <= tol:
                raise ZeroPoleCollision(f"zero {z} coincides with pole {p}")
    return CKFn(zeros, poles)


def evaluate_ck(f: CKFn, t):
    """Value at ``t`` (homogeneously, so poles give ``inf``)."""
    h = homog(t)
    num = np.array([1.0 + 0j, 1.0 + 0j])
    for z in f.zeros:
        num = np.array([num[0] * _lin(h, z), num[1]])
    for p in f.poles:
        num = np.array([num[0], num[1] * _lin(h, p)])
    return dehomog(num)


def _lin(h, z):
    """Homogeneous ``t - z`` evaluated at ``t = h`` (scaled by ``1/h1``)."""
    if z is INF:
        return h[1]
    return h[0] - z * h[1]


@dataclass(frozen=True)
class PrincipalPair:
    p1: complex
    p2: complex

    def swapped(self) -> "PrincipalPair":
        return PrincipalPair(self.p2, self.p1)

    def as_tuple(self):
        return (self.p1, self.p2)


def principal_parameters(f: CKFn, tol: float | None = None) -> PrincipalPair:
    """The two level-1 points besides ``0`` and ``inf``."""
    tol = resolve_tol(tol)
    a, b, c = f.quadratic()
    scale = max(abs(a), abs(b), abs(c))
    if abs(a) <= 1e-14 * scale:
        raise DegenerateQuadratic("quadratic has vanishing leading coefficient")
    disc = f.discriminant()
    # compare with the two terms of b^2 - 4ac, not with the largest coefficient
    if abs(disc) <= tol * max(abs(b) ** 2, abs(4 * a * c)):
        raise DegenerateQuadratic("principal parameters coincide")
    root = cmath.sqrt(disc)
    w = -b - root if abs(-b - root) >= abs(-b + root) else -b + root
    p1, p2 = w / (2 * a), 2 * c / w
    for p in (p1, p2):
        if abs(p) < 1e-300:
            raise DegenerateQuadratic("principal parameter at 0")
    return PrincipalPair(complex(p1), complex(p2))


def psi_from_pair(pair: PrincipalPair) -> MobiusMap:
    """``t -> (t - p1)(1 - p2) / ((t - p2)(1 - p1))``."""
    p1, p2 = pair.p1, pair.p2
    return MobiusMap(np.array([[1 - p2, -p1 * (1 - p2)], [1 - p1, -p2 * (1 - p1)]]))


_PROBES = (0.3 + 0.7j, -1.1 + 0.2j, 2.5 - 1.3j, 0.05 - 0.4j, -3.7 - 2.2j, 0.9 + 1.9j, 1.6 + 0.1j)


def composition_residual(ck_l: CKFn, ck_a: CKFn, m: MobiusMap) -> float:
    """Largest chordal distance between ``CK^L(t)`` and ``CK^A(m(t))`` at probe points."""
    return max(_chordal(evaluate_ck(ck_l, t), evaluate_ck(ck_a, m(t))) for t in _PROBES)


def psi_candidates(ck_l: CKFn, ck_a: CKFn, tol: float = 1e-7) -> list[MobiusMap]:
    """Closed-form maps (both orders of the principal parameters) that verify."""
    pair = principal_parameters(ck_l)
    out = []
    for cand in (pair, pair.swapped()):
        m = psi_from_pair(cand)
        if composition_residual(ck_l, ck_a, m) <= tol:
            out.append(m)
    return out


def psi(ck_l: CKFn, ck_a: CKFn, tol: float = 1e-7) -> MobiusMap:
    """The Mobius map with ``CK^L = CK^A o psi``.

    The closed form in the principal parameters is tried in both orders.  If
    neither verifies, maps carrying the level-1 set of ``CK^L`` onto that of
    ``CK^A`` are searched directly.
    """
    found = psi_candidates(ck_l, ck_a, tol)
    if found:
        return found[0]
    src = [0j, INF] + list(principal_parameters(ck_l).as_tuple())
    dst = [0j, INF] + list(principal_parameters(ck_a).as_tuple())
    for triple in itertools.permutations(range(4), 3):
        try:
            m = mobius_through(src[:3], [dst[k] for k in triple])
        except Exception:
            continue
        if composition_residual(ck_l, ck_a, m) <= tol:
            return m
    raise NoVerifyingOrder("no Mobius map satisfies CK^L = CK^A o psi")


def metric_principal_order(pair: PrincipalPair, geometry: str, tol: float = 1e-9) -> PrincipalPair:
    """Order the principal parameters of a metric tetrahedron.

    For the canonical marking the first parameter satisfies ``Im p1 > 0``
    (hyperbolic, where ``p2 = conj(p1)``) or ``|p1| < 1`` (spherical, where
    ``p2 = 1/conj(p1)``).  Raises :class:`AssignmentAmbiguous` when the rule
    cannot separate them.
    """
    p1, p2 = pair.p1, pair.p2
    if geometry == "hyperbolic":
        key1, key2 = p1.imag, p2.imag
        if abs(key1 - key2) <= tol * max(1.0, abs(p1)):
            raise AssignmentAmbiguous("principal parameters are not separated by Im", [pair, pair.swapped()])
        return pair if key1 > key2 else pair.swapped()
    key1, key2 = abs(p1), abs(p2)
    if abs(key1 - key2) <= tol:
        raise AssignmentAmbiguous("principal parameters are not separated by modulus", [pair, pair.swapped()])
    return pair if key1 < key2 else pair.swapped()


def edge_values_from_config(c: Config8) -> dict:
    """``A(e_ij) = C / (F_i F_j)``: the cycle avoiding ``ij`` over the faces opposite ``i`` and ``j``.

    Inverse of reading ``(1, faces, cycles)`` off an angle function.
    """
    faces = dict(zip(FACE_LABELS, c.faces))
    cycles = dict(zip(CYCLE_LABELS, c.cycles))
    avoid = {"12": "1324", "34": "1324", "13": "1234", "24": "1234", "14": "1243", "23": "1243"}
    out = {}
    for i, j in PAIRS:
        opp_i = "".join(str(k) for k in range(1, 5) if k != i)
        opp_j = "".join(str(k) for k in range(1, 5) if k != j)
        out[pair_key(i, j)] = cycles[avoid[pair_key(i, j)]] / (faces[opp_i] * faces[opp_j])
    return out


@dataclass(frozen=True)
class Solution:
    angles: dict
    psi: MobiusMap
    principal: PrincipalPair
    ck_l: CKFn
    ck_a: CKFn
    angle_config: Config8
    edge_values: dict


def solve_angles(spec: MetricSpec, tol: float | None = None) -> Solution:
    """Dihedral angles from edge lengths through the Cho-Kim functions.

    The length configuration is mapped by ``psi`` (built from the principal
    parameters alone) to the angle configuration; ``psi`` preserves positions,
    so faces and cycles of the angle side are read off directly.
    """
    tetra = from_metric(spec)
    L = length_function(tetra)
    l_config = config_from_hom(L)
    ck_l = ck_from_config(l_config)
    pair = metric_principal_order(principal_parameters(ck_l, tol), spec.geometry)
    m = psi_from_pair(pair)
    a_config = l_config.map(m)
    if any(z is INF for z in a_config):
        raise NoConsistentAssignment("angle configuration has a point at infinity")
    ck_a = ck_from_config(a_config)
    values = edge_values_from_config(a_config)
    if spec.geometry == "spherical" or spec.geometry == "hyperbolic":
        for k, v in values.items():
            if abs(abs(v) - 1) > 1e-6:
                raise NoConsistentAssignment(f"recovered A(e_{k}) = {v} is not of unit modulus")
    angles = {k: angle_from_value(v) for k, v in values.items()}
    return Solution(angles, m, pair, ck_l, ck_a, a_config, values)


# ---------------------------------------------------------------------------
# Regge symmetry and configuration equivalence
# ---------------------------------------------------------------------------

def regge_transform(x, kind: str = "lengths"):
    """Regge map on six values ordered 12, 13, 14, 23, 24, 34 (same formula for angles)."""
    if kind not in ("lengths", "angles"):
        raise ValueError("kind must be 'lengths' or 'angles'")
    if isinstance(x, dict):
        vals = [x[pair_key(i, j)] for i, j in PAIRS]
        out = regge_transform(vals, kind)
        return {pair_key(i, j): v for (i, j), v in zip(PAIRS, out)}
    x12, x13, x14, x23, x24, x34 = x
    s = x13 + x14 + x23 + x24
    return (x12, s / 2 - x13, s / 2 - x14, s / 2 - x23, s / 2 - x24, x34)


def projective_equivalence(c1: Config8, c2: Config8, tol: float = 1e-7) -> MobiusMap:
    """Mobius map sending ``c1`` to ``c2`` entrywise, checked on all eight entries."""
    anchors = []
    for k in range(8):
        if all(_chordal(c1[k], c1[a]) > 1e-9 for a in anchors) and all(
            _chordal(c2[k], c2[a]) > 1e-9 for a in anchors
        ):
            anchors.append(k)
        if len(anchors) == 3:
            break
    if len(anchors) < 3:
        raise TooDegenerate("fewer than three distinct points")
    m = mobius_through([c1[k] for k in anchors], [c2[k] for k in anchors])
    res = c1.map(m).distance(c2)
    if res > tol:
        raise NotEquivalent(f"configurations are not equivalent (residual {res:.3e})")
    return m


def equivalence_residual(c1: Config8, c2: Config8) -> float:
    try:
        m = projective_equivalence(c1, c2, tol=math.inf)
    except TooDegenerate:
        return math.inf
    return c1.map(m).distance(c2)


def cross_ratio_invariant(c: Config8):
    """Cross-ratio of the four face entries."""
    f = c.faces
    for a, b in itertools.combinations(range(4), 2):
        if _chordal(f[a], f[b]) <= 1e-12:
            raise DegenerateConfiguration("face values coincide")
    return cross_ratio(*f)


# ---------------------------------------------------------------------------
# Discriminant identity
# ---------------------------------------------------------------------------

def half_value_polynomial_terms(a: dict):
    """Face and cycle values built from half-values ``a_ij``."""
    faces = [a["12"] * a["23"] * a["13"], a["12"] * a["24"] * a["14"], a["13"] * a["34"] * a["14"], a["24"] * a["34"] * a["23"]]
    cycles = [a["12"] * a["23"] * a["34"] * a["14"], a["13"] * a["23"] * a["24"] * a["14"], a["12"] * a["24"] * a["34"] * a["13"]]
    return faces, cycles


def _poly_from_roots(roots):
    coeffs = [1]
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k] += c
            nxt[k + 1] -= c * r
        coeffs = nxt
    return coeffs


def _det(m):
    """Determinant by cofactor expansion (exact for Fractions)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


def discriminant_identity_sides(a: dict):
    """Both sides of ``disc = 16 (prod a)^2 det((a + 1/a)/2)``.

    Works with any field type (``Fraction`` gives an exact check).
    """
    faces, cycles = half_value_polynomial_terms(a)
    one = a["12"] ** 0
    num = _poly_from_roots(faces)
    den = _poly_from_roots([one] + cycles)
    diff = [x - y for x, y in zip(num, den)]
    qa, qb, qc = diff[1], diff[2], diff[3]
    disc = qb * qb - 4 * qa * qc
    prod = one
    for lab in e8.PAIR_LABELS:
        prod *= a[lab]
    g = [[one if i == j else None for j in range(4)] for i in range(4)]
    for i, j in PAIRS:
        x = a[pair_key(i, j)]
        g[i - 1][j - 1] = g[j - 1][i - 1] = (x + one / x) / 2
    rhs = 16 * prod * prod * _det(g)
    return disc, rhs, diff[4]


def exact_discriminant_check(a: dict | None = None) -> bool:
    a = a or {"12": Fraction(2), "13": Fraction(3, 2), "14": Fraction(5, 3), "23": Fraction(7, 4), "24": Fraction(9, 5), "34": Fraction(11, 7)}
    a = {k: Fraction(v) for k, v in a.items()}
    disc, rhs, const = discriminant_identity_sides(a)
    return disc == rhs and const == 0

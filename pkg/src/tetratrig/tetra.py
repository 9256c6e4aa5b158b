"""Marked projective tetrahedra and their length and angle functions.

Vertices are numbered 1..4 as in the usual notation ``A_1, ..., A_4``; edges
are keyed by ordered pairs ``(i, j)``.  Arrays that hold one entry per vertex
are 0-indexed.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import e8lattice as e8
from .config import resolve_tol
from .e8lattice import LatticeVec, e, half
from .errors import (
    DegenerateConfiguration,
    NearDegenerate,
    NotInModuli,
    NotRealizable,
    RoundTripFailure,
    SignSystemInconsistent,
    VectorNotInDomain,
)
from .projgeom import (
    Line,
    Quadric,
    cross_ratio_on_line,
    incidence,
    line_quadric_intersection,
    null_space,
    proj_distance,
    rulings_through,
    unit,
)

PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
FACES: tuple[tuple[int, int, int], ...] = ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))
GEOMETRIES = ("spherical", "hyperbolic")

# Orientation of the quadric used for tetrahedra built from metric data, with
# vertex frames normalized to positive determinant.  With this choice the
# angle function takes the values exp(2i(pi - alpha_ij)) on the e_ij.
METRIC_ORIENTATION = 0


def pair_key(i: int, j: int) -> str:
    return f"{min(i, j)}{max(i, j)}"


def complement(i: int, j: int) -> tuple[int, int]:
    k, l = sorted({1, 2, 3, 4} - {i, j})
    return k, l


def is_even(perm) -> bool:
    perm = list(perm)
    inversions = sum(1 for a, b in itertools.combinations(range(4), 2) if perm[a] > perm[b])
    return inversions % 2 == 0


def even_completion(k: int, l: int) -> tuple[int, int]:
    """The ordering ``(i, j)`` of the complement of ``{k, l}`` making ``(i, j, k, l)`` even."""
    i, j = sorted({1, 2, 3, 4} - {k, l})
    return (i, j) if is_even((i, j, k, l)) else (j, i)


# ---------------------------------------------------------------------------
# Metric input
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricSpec:
    """Edge lengths of a spherical or hyperbolic tetrahedron."""

    geometry: str
    lengths: dict = field(hash=False)

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise ValueError(f"geometry must be one of {GEOMETRIES}")
        lengths = {}
        for i, j in PAIRS:
            key = pair_key(i, j)
            if key not in self.lengths:
                raise ValueError(f"missing length for edge {key}")
            val = float(self.lengths[key])
            if not val > 0:
                raise NotRealizable(f"edge length {key} must be positive")
            lengths[key] = val
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def from_tuple(cls, geometry: str, values) -> "MetricSpec":
        """Lengths given in the order 12, 13, 14, 23, 24, 34."""
        return cls(geometry, {pair_key(i, j): v for (i, j), v in zip(PAIRS, values)})

    @classmethod
    def regular(cls, geometry: str, length: float) -> "MetricSpec":
        return cls.from_tuple(geometry, [length] * 6)

    def length(self, i: int, j: int) -> float:
        return self.lengths[pair_key(i, j)]

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(self.length(i, j) for i, j in PAIRS)

    def gram(self) -> np.ndarray:
        fn = math.cos if self.geometry == "spherical" else math.cosh
        g = np.eye(4)
        for i, j in PAIRS:
            g[i - 1, j - 1] = g[j - 1, i - 1] = fn(self.length(i, j))
        return g

    def check(self, det_tol: float = 1e-10) -> None:
        """Raise unless the lengths belong to a nondegenerate tetrahedron."""
        g = self.gram()
        w = np.linalg.eigvalsh(g)
        if abs(np.linalg.det(g)) < det_tol:
            raise NearDegenerate(f"Gram determinant {np.linalg.det(g):.3e} is too small")
        if self.geometry == "spherical":
            if w.min() <= 0:
                raise NotRealizable("spherical Gram matrix is not positive definite")
        elif not (np.sum(w > 0) == 1 and np.sum(w < 0) == 3):
            raise NotRealizable("hyperbolic Gram matrix does not have signature (1,3)")

    def is_realizable(self) -> bool:
        try:
            self.check()
        except NotRealizable:
            return False
        return True

    def to_json(self) -> dict:
        return {"geometry": self.geometry, "lengths": dict(self.lengths)}

    @classmethod
    def from_json(cls, data: dict) -> "MetricSpec":
        return cls(data["geometry"], dict(data["lengths"]))


def random_metric_spec(geometry: str, rng: np.random.Generator, low=None, high=None, max_tries: int = 10000) -> MetricSpec:
    """Rejection-sample a realizable spec with lengths uniform in ``[low, high]``.

    Defaults: ``[0.5, 2.0]`` for hyperbolic and ``[0.4, 1.2]`` for spherical.
    """
    if low is None:
        low = 0.5 if geometry == "hyperbolic" else 0.4
    if high is None:
        high = 2.0 if geometry == "hyperbolic" else 1.2
    for _ in range(max_tries):
        spec = MetricSpec.from_tuple(geometry, rng.uniform(low, high, size=6))
        try:
            spec.check(det_tol=1e-6)
        except NotRealizable:
            continue
        return spec
    raise NotRealizable("could not sample a realizable tetrahedron")


def metric_frame(spec: MetricSpec) -> tuple[np.ndarray, np.ndarray]:
    """Vertex matrix ``V`` (columns are vertices) and form ``J`` with ``V^T J V = G``.

    The frame is normalized to ``det V > 0``; for hyperbolic input the
    vertices lie on the upper sheet of ``<v, v> = 1``.
    """
    spec.check()
    g = spec.gram()
    if spec.geometry == "spherical":
        v = np.linalg.cholesky(g).T
        form = np.eye(4)
    else:
        w, u = np.linalg.eigh(g)
        order = np.argsort(-w)
        w, u = w[order], u[:, order]
        v = np.sqrt(np.abs(w))[:, None] * u.T
        form = np.diag([1.0, -1.0, -1.0, -1.0])
        if v[0, 0] < 0:
            v[0] = -v[0]
    if np.linalg.det(v) < 0:
        v[3] = -v[3]
    return v, form


def metric_angles_oracle(spec: MetricSpec) -> dict:
    """Dihedral angles from cofactors of the Gram matrix.

    ``cos alpha_ij = -c_kl / sqrt(c_kk c_ll)`` with ``c`` the cofactor matrix
    and ``{k, l}`` the complementary pair.
    """
    spec.check()
    g = spec.gram()
    cof = np.linalg.inv(g).T * np.linalg.det(g)
    out = {}
    for i, j in PAIRS:
        k, l = complement(i, j)
        c = -cof[k - 1, l - 1] / math.sqrt(cof[k - 1, k - 1] * cof[l - 1, l - 1])
        out[pair_key(i, j)] = math.acos(max(-1.0, min(1.0, c)))
    return out


# ---------------------------------------------------------------------------
# Marked tetrahedra
# ---------------------------------------------------------------------------

def _canonical_order(a, b, p, q):
    """Order the two points ``p, q`` of line ``(a b)`` by their affine parameter."""
    line = Line(a, b)

    def key(x):
        s, t = line.coords(x)
        if abs(s) < 1e-14 * abs(t):
            return (math.inf, 0.0)
        z = t / s
        return (round(z.real, 9), round(z.imag, 9))

    return (p, q) if key(p) <= key(q) else (q, p)


@dataclass(frozen=True, eq=False)
class MarkedTetra:
    """Quadric, four ordered faces, an orientation of the quadric and of every edge."""

    quadric: Quadric
    planes: np.ndarray
    orientation: int
    edge_points: dict = field(repr=False)

    def __post_init__(self):
        planes = np.array([unit(h) for h in np.asarray(self.planes, dtype=complex)])
        object.__setattr__(self, "planes", planes)
        if self.orientation not in (0, 1):
            raise ValueError("orientation must be 0 or 1")

    # -- construction -------------------------------------------------------
    @classmethod
    def from_planes(cls, quadric: Quadric, planes, orientation: int = 0, edge_bits: dict | None = None) -> "MarkedTetra":
        """Tetrahedron with edge orientations given by bits relative to the
        canonical (affine parameter) order of each edge's two quadric points."""
        planes = np.asarray(planes, dtype=complex)
        verts = _vertices_from_planes(planes)
        edge_bits = edge_bits or {}
        pts = {}
        for i, j in PAIRS:
            a, b = verts[i - 1], verts[j - 1]
            x, y = line_quadric_intersection(Line(a, b), quadric)
            first, second = _canonical_order(a, b, x, y)
            if edge_bits.get(pair_key(i, j), 0):
                first, second = second, first
            pts[(i, j)], pts[(j, i)] = first, second
        return cls(quadric, planes, orientation, pts)

    @classmethod
    def from_vertices(cls, quadric: Quadric, vertices, orientation: int = 0, edge_bits: dict | None = None) -> "MarkedTetra":
        vertices = np.asarray(vertices, dtype=complex)
        planes = [null_space(np.delete(vertices, i, axis=0), 1)[0] for i in range(4)]
        return cls.from_planes(quadric, planes, orientation, edge_bits)

    def with_orientation(self, orientation: int) -> "MarkedTetra":
        return MarkedTetra(self.quadric, self.planes, orientation, dict(self.edge_points))

    def edge_bits(self) -> dict:
        out = {}
        for i, j in PAIRS:
            a, b = self.vertex(i), self.vertex(j)
            first, _ = _canonical_order(a, b, self.E(i, j), self.E(j, i))
            out[pair_key(i, j)] = 0 if proj_distance(first, self.E(i, j)) < 1e-8 else 1
        return out

    # -- data ----------------------------------------------------------------
    @cached_property
    def vertices(self) -> np.ndarray:
        return _vertices_from_planes(self.planes)

    def vertex(self, i: int) -> np.ndarray:
        return self.vertices[i - 1]

    def plane(self, i: int) -> np.ndarray:
        return self.planes[i - 1]

    def E(self, i: int, j: int) -> np.ndarray:
        return self.edge_points[(i, j)]

    def edge_line(self, i: int, j: int) -> Line:
        return Line(self.vertex(i), self.vertex(j))

    def validate(self, tol: float | None = None) -> None:
        """Check incidences and the non-degeneracy conditions."""
        tol = resolve_tol(tol)
        slack = tol * 1e3
        for i in range(1, 5):
            for j in range(1, 5):
                if i != j and incidence(self.vertex(i), self.plane(j)) > slack:
                    raise DegenerateConfiguration("vertex is not on its faces")
            if self.quadric.residual(self.vertex(i)) < 1e-8:
                raise DegenerateConfiguration(f"vertex {i} lies on the quadric")
        for i, j in PAIRS:
            line = self.edge_line(i, j)
            for p in (self.E(i, j), self.E(j, i)):
                if line.distance(p) > slack or self.quadric.residual(p) > slack:
                    raise DegenerateConfiguration(f"edge point on edge {i}{j} is misplaced")

    def edge_cross_ratio(self, i: int, j: int):
        """``[A_i, E_ij, A_j, E_ji]``."""
        return cross_ratio_on_line(
            self.vertex(i), self.E(i, j), self.vertex(j), self.E(j, i), carrier=self.edge_line(i, j)
        )


def _vertices_from_planes(planes) -> np.ndarray:
    planes = np.asarray(planes, dtype=complex)
    if abs(np.linalg.det(planes / np.linalg.norm(planes, axis=1)[:, None])) < 1e-12:
        raise DegenerateConfiguration("faces are not in general position")
    return np.array([unit(null_space(np.delete(planes, i, axis=0), 1)[0]) for i in range(4)])


def from_metric(spec: MetricSpec) -> MarkedTetra:
    """Projective tetrahedron of a metric tetrahedron with its canonical marking.

    Hyperbolic edges are ordered so that ``[A_i, E_ij, A_j, E_ji] = e^{2 l_ij}``;
    spherical edges so that the principal logarithm of that cross-ratio has
    imaginary part in ``(0, pi]`` (ties are broken by the canonical order).
    """
    v, form = metric_frame(spec)
    quadric = Quadric(form)
    verts = v.T.astype(complex)
    planes = np.linalg.inv(v).astype(complex)
    base = MarkedTetra.from_planes(quadric, planes, METRIC_ORIENTATION)
    bits = {}
    for i, j in PAIRS:
        cr = base.edge_cross_ratio(i, j)
        if spec.geometry == "hyperbolic":
            flip = abs(cr) < 1.0
        else:
            flip = not (cmath.phase(cr) > 1e-12)
            if abs(abs(cmath.phase(cr)) - math.pi) < 1e-9:
                flip = False
        bits[pair_key(i, j)] = int(flip)
    tetra = MarkedTetra.from_planes(quadric, planes, METRIC_ORIENTATION, bits)
    # keep the exact metric vertices (same projective points)
    for i in range(4):
        if proj_distance(verts[i], tetra.vertex(i + 1)) > 1e-8:
            raise DegenerateConfiguration("vertex reconstruction failed")
    return tetra


def dual_tetra(tetra: MarkedTetra) -> MarkedTetra:
    """Polar dual with the induced marking.

    Face ``i`` of the dual is the polar plane of ``A_i``; its vertex ``m`` is the
    pole of ``H_m``.  On the dual edge ``(k, l)`` the first point is
    ``L_{E_ij} & R_{E_ji}`` where ``(i, j, k, l)`` is an even permutation.
    """
    q = tetra.quadric
    planes = [q.polar_plane(tetra.vertex(i)) for i in range(1, 5)]
    pts = {}
    for k, l in PAIRS:
        i, j = even_completion(k, l)
        lx, rx = rulings_through(tetra.E(i, j), q, tetra.orientation)
        ly, ry = rulings_through(tetra.E(j, i), q, tetra.orientation)
        pts[(k, l)] = unit(lx.meet_line(ry))
        pts[(l, k)] = unit(rx.meet_line(ly))
    return MarkedTetra(q, np.array(planes), tetra.orientation, pts)


def tetra_distance(t1: MarkedTetra, t2: MarkedTetra) -> float:
    """Largest projective distance between corresponding planes and edge points."""
    d = [proj_distance(a, b) for a, b in zip(t1.planes, t2.planes)]
    d += [proj_distance(t1.edge_points[k], t2.edge_points[k]) for k in t1.edge_points]
    m1, m2 = t1.quadric.matrix.ravel(), t2.quadric.matrix.ravel()
    d.append(proj_distance(m1, m2))
    return max(d)


# ---------------------------------------------------------------------------
# Lifts and character functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftData:
    """Square roots ``a_ij`` of the edge cross-ratios with consistent signs."""

    values: dict

    def __getitem__(self, key) -> complex:
        if isinstance(key, tuple):
            key = pair_key(*key)
        return self.values[key]

    def flip_vertex(self, vertex: int) -> "LiftData":
        """Change the lift of one vertex: every edge through it changes sign."""
        out = dict(self.values)
        for i, j in PAIRS:
            if vertex in (i, j):
                out[pair_key(i, j)] = -out[pair_key(i, j)]
        return LiftData(out)

    def half_values(self) -> tuple[complex, ...]:
        """Values on ``e_s / 2`` in canonical order (1 on the empty and full sets)."""
        return (1.0 + 0j,) + tuple(complex(self.values[lab]) for lab in e8.PAIR_LABELS) + (1.0 + 0j,)


def face_rhs(tetra: MarkedTetra, i: int, j: int, k: int):
    """``[A_k, E_ki, A_i, (A_i A_k) & (E_ij E_jk)]`` for a face with ``i < j < k``."""
    side = tetra.edge_line(i, k)
    chord = Line(tetra.E(i, j), tetra.E(j, k))
    x = side.meet_line(chord)
    return cross_ratio_on_line(tetra.vertex(k), tetra.E(k, i), tetra.vertex(i), x, carrier=side)


def face_residuals(tetra: MarkedTetra, lift: LiftData) -> list[float]:
    out = []
    for i, j, k in FACES:
        lhs = lift[(i, j)] * lift[(j, k)] * lift[(i, k)]
        rhs = face_rhs(tetra, i, j, k)
        out.append(abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return out


def lift_data(tetra: MarkedTetra, tol: float | None = None) -> LiftData:
    """Signed square roots of the edge cross-ratios satisfying the face identities.

    The signs are the solution of a linear system over Z/2 (six unknowns, one
    equation per face); among its solutions the one with fewest sign changes
    from the principal square roots is returned.
    """
    roots = {}
    for i, j in PAIRS:
        roots[(i, j)] = cmath.sqrt(tetra.edge_cross_ratio(i, j))
    rows, rhs_bits = [], []
    for i, j, k in FACES:
        prod = roots[(i, j)] * roots[(j, k)] * roots[(i, k)]
        ratio = face_rhs(tetra, i, j, k) / prod
        if abs(ratio - 1) < abs(ratio + 1):
            bit = 0
        else:
            bit = 1
        if min(abs(ratio - 1), abs(ratio + 1)) > 1e-5:
            raise SignSystemInconsistent(f"face {i}{j}{k} ratio {ratio} is not a sign")
        rows.append([1 if p in ((i, j), (j, k), (i, k)) else 0 for p in PAIRS])
        rhs_bits.append(bit)
    best = None
    for signs in itertools.product((0, 1), repeat=6):
        if all(sum(r[m] * signs[m] for m in range(6)) % 2 == b for r, b in zip(rows, rhs_bits)):
            if best is None or sum(signs) < sum(best):
                best = signs
    if best is None:
        raise SignSystemInconsistent("face sign constraints have no common solution")
    values = {pair_key(*p): (-1 if s else 1) * roots[p] for p, s in zip(PAIRS, best)}
    return LiftData(values)


@dataclass(frozen=True)
class CharacterHom:
    """Multiplicative function on a sublattice of E8 given by its lift values.

    ``half_values[s]`` is the value on ``e_s / 2`` (canonical order of even
    subsets); a lattice vector with doubled coordinates ``d`` evaluates to
    ``prod half_values[s] ** d_s``.
    """

    half_values: tuple
    tag: str = "E7L"

    def __post_init__(self):
        vals = tuple(complex(x) for x in self.half_values)
        if len(vals) != 8 or any(x == 0 for x in vals):
            raise ValueError("need eight nonzero half-values")
        if self.tag not in ("E7L", "E7A", "E8"):
            raise ValueError(f"unknown tag {self.tag!r}")
        object.__setattr__(self, "half_values", vals)

    def lift_value(self, v) -> complex:
        """Value of the lifted function on any vector of ``(Z/2)^8``."""
        d = v.d if isinstance(v, LatticeVec) else tuple(v)
        out = 1.0 + 0j
        for a, x in zip(self.half_values, d):
            if x:
                out *= a ** int(x)
        return out

    def __call__(self, v) -> complex:
        v = e8.as_vec(v)
        if not e8.in_sublattice(v, self.tag):
            raise VectorNotInDomain(f"{v} is not in the {self.tag} lattice")
        return self.lift_value(v)

    def half(self, label) -> complex:
        return self.half_values[e8.point_index(label)]

    def gauge(self, vertex: int) -> "CharacterHom":
        """Flip the lift of one vertex (only meaningful for the 12..34 slots)."""
        vals = list(self.half_values)
        for idx, lab in enumerate(e8.LABELS):
            if lab in e8.PAIR_LABELS and str(vertex) in lab:
                vals[idx] = -vals[idx]
        return CharacterHom(tuple(vals), self.tag)

    def compose(self, w: "e8.WeylElem") -> "CharacterHom":
        """``self o w`` as a function on the same sublattice.

        The composite is evaluated through images of a basis, so the result is
        returned as a callable wrapper rather than new half-values.
        """
        return _ComposedHom(self, w)

    def domain_roots(self):
        return e8.sub_roots(self.tag) if self.tag != "E8" else e8.roots()


@dataclass(frozen=True)
class _ComposedHom:
    base: CharacterHom
    w: "e8.WeylElem"

    @property
    def tag(self):
        return self.base.tag

    def __call__(self, v) -> complex:
        return self.base(self.w(v))

    def lift_value(self, v) -> complex:
        return self.base.lift_value(self.w(v))


def length_function(tetra: MarkedTetra, lift: LiftData | None = None) -> CharacterHom:
    lift = lift or lift_data(tetra)
    return CharacterHom(lift.half_values(), "E7L")


def angle_function(tetra: MarkedTetra) -> CharacterHom:
    """``A_T = L_{T^dual} o D`` as a character on the E7A lattice."""
    dual_lift = lift_data(dual_tetra(tetra))
    dual_half = dual_lift.half_values()
    # value on e_s / 2 is the dual's value on e_{complement(s)} / 2
    vals = tuple(dual_half[e8.point_index(e8.AFF_POINTS[7] - s)] for s in e8.AFF_POINTS)
    return CharacterHom(vals, "E7A")


def angle_cross_ratio(tetra: MarkedTetra, i: int, j: int):
    """``[H_k^dual, E'_ij, H_l^dual, E'_ji]`` with ``(i, j, k, l)`` even."""
    q = tetra.quadric
    (k, l) = next((k, l) for k, l in itertools.permutations(set(range(1, 5)) - {i, j}) if is_even((i, j, k, l)))
    lx, rx = rulings_through(tetra.E(i, j), q, tetra.orientation)
    ly, ry = rulings_through(tetra.E(j, i), q, tetra.orientation)
    first, second = lx.meet_line(ry), rx.meet_line(ly)
    hk, hl = q.pole(tetra.plane(k)), q.pole(tetra.plane(l))
    return cross_ratio_on_line(hk, first, hl, second, carrier=Line(hk, hl))


def lengths_from_hom(hom: CharacterHom, geometry: str) -> dict:
    """Edge lengths read off ``L(e_ij)``: ``log / 2`` (hyperbolic) or ``arg / 2``."""
    out = {}
    for lab in e8.PAIR_LABELS:
        val = hom(e(lab))
        if geometry == "hyperbolic":
            out[lab] = math.log(abs(val)) / 2
        else:
            out[lab] = (cmath.phase(val) % (2 * math.pi)) / 2
    return out


def angle_from_value(val: complex) -> float:
    """The angle in ``(0, pi)`` with ``exp(2i(pi - alpha)) = val``."""
    theta = cmath.phase(val) % (2 * math.pi)
    alpha = math.pi - theta / 2
    if alpha <= 0:
        alpha += math.pi
    return alpha


def angles_from_hom(hom: CharacterHom) -> dict:
    return {lab: angle_from_value(hom(e(lab))) for lab in e8.PAIR_LABELS}


def is_generic(hom: CharacterHom, tol: float | None = None) -> bool:
    """True when ``L(r) = 1`` on the E7L roots only for ``r = +-e_0``."""
    tol = max(resolve_tol(tol), 1e-12) * 1e3
    trivial = {e("0"), -e("0")}
    for r in e8.sub_roots("E7L"):
        if r in trivial:
            continue
        if abs(hom(r) - 1) <= tol:
            return False
    return True


def near_trivial_roots(hom: CharacterHom, tol: float = 1e-6) -> list[LatticeVec]:
    return [r for r in e8.sub_roots("E7L") if abs(hom(r) - 1) <= tol]


# ---------------------------------------------------------------------------
# The determinant and reconstruction
# ---------------------------------------------------------------------------

def half_gram(hom: CharacterHom) -> np.ndarray:
    """4x4 matrix with unit diagonal and entries ``(a_ij + 1/a_ij)/2``."""
    m = np.eye(4, dtype=complex)
    for i, j in PAIRS:
        a = hom.half(pair_key(i, j))
        m[i - 1, j - 1] = m[j - 1, i - 1] = (a + 1 / a) / 2
    return m


def det_L(hom: CharacterHom) -> complex:
    return complex(np.linalg.det(half_gram(hom)))


def det_L_expansion(hom) -> complex:
    """The same determinant written as a sum over roots."""
    e7l = set(e8.sub_roots("E7L"))
    e7a = set(e8.sub_roots("E7A"))
    d6 = set(e8.sub_roots("D6"))
    total = -1.5 + 0j
    for r in e8.roots():
        if r in e7l and r not in d6:
            total += hom.lift_value(r) / 8
        elif r in d6:
            total -= hom.lift_value(r) / 8
        elif r not in e7l and r not in e7a:
            total += hom.lift_value(2 * r) / 64
    return total


def _quadric_coefficients(hom: CharacterHom, convention: str) -> np.ndarray:
    """Symmetric matrix of the quadric through the coordinate vertices."""
    L = hom
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1
    for k, lab in zip((1, 2, 3), ("12", "13", "14")):
        m[k, k] = L(e(lab))
        coeff = L(e(lab)) + 1
        if convention == "verbatim" and lab == "12":
            coeff = -coeff
        m[0, k] = m[k, 0] = coeff / 2
    for (a, b), (x, y, z) in {
        (1, 2): ("12", "13", "23"),
        (1, 3): ("12", "14", "24"),
        (2, 3): ("13", "14", "34"),
    }.items():
        plus = half(x, y, z, "0")
        minus = half(x, y, "-" + z, "0")
        m[a, b] = m[b, a] = (L(plus) + L(minus)) / 2
    return m


def reconstruct_from_L(hom: CharacterHom, orientation: int = 0, convention: str = "symmetric", tol: float | None = None) -> MarkedTetra:
    """Marked tetrahedron with vertices at the coordinate points and length function ``hom``.

    ``convention="symmetric"`` uses ``+(L(e_12)+1) x1 x2``; ``"verbatim"`` uses
    the opposite sign on that single term and fails the round trip.
    """
    tol = resolve_tol(tol)
    if abs(det_L(hom)) < 1e-12:
        raise NotInModuli("det_L vanishes")
    if not is_generic(hom, 1e-9):
        raise NotInModuli("length function is not generic")
    quadric = Quadric(_quadric_coefficients(hom, convention))
    base = MarkedTetra.from_vertices(quadric, np.eye(4), orientation)
    bits = {}
    for i, j in PAIRS:
        target = hom(e(pair_key(i, j)))
        cr = base.edge_cross_ratio(i, j)
        bits[pair_key(i, j)] = 0 if abs(cr - target) <= abs(1 / cr - target) else 1
    tetra = MarkedTetra.from_vertices(quadric, np.eye(4), orientation, bits)
    check = length_function(tetra)
    for v in e7l_basis():
        a, b = check(v), hom(v)
        if abs(a - b) > 1e-6 * max(1.0, abs(b)):
            raise RoundTripFailure(f"length function differs on {v}: {a} vs {b}")
    return tetra


def e7l_basis() -> list[LatticeVec]:
    """A Z-basis of the E7L lattice: simple roots of a fixed positive system."""
    height = np.array([11.3, 1, 2.1, 4.3, 8.7, 17.9, 35.1, 0])
    pos = [r for r in e8.sub_roots("E7L") if float(height @ r.array()) > 0]
    pos_set = set(pos)
    return [r for r in pos if not any((r - a) in pos_set for a in pos)]


def projective_map_between(t1: MarkedTetra, t2: MarkedTetra) -> np.ndarray:
    """Projective map ``P`` with ``P A_i^(1) ~ A_i^(2)`` carrying quadric 1 to quadric 2.

    Vertices fix ``P`` up to a diagonal scaling in vertex coordinates; the
    scaling is fitted to the quadric.  Raises if no such map exists.
    """
    v1, v2 = t1.vertices.T, t2.vertices.T
    m1 = v1.T @ t1.quadric.matrix @ v1
    m2 = v2.T @ t2.quadric.matrix @ v2
    # want D m2 D ~ m1 with D diagonal: d_i d_j m2_ij = c m1_ij
    d = np.ones(4, dtype=complex)
    c = m2[0, 0] / m1[0, 0]
    for i in range(1, 4):
        d[i] = cmath.sqrt(c * m1[i, i] / m2[i, i])
    for i in range(1, 4):
        if abs(d[0] * d[i] * m2[0, i] - c * m1[0, i]) > abs(d[0] * d[i] * m2[0, i] + c * m1[0, i]):
            d[i] = -d[i]
    scaled = np.diag(d) @ m2 @ np.diag(d)
    if proj_distance(scaled.ravel(), m1.ravel()) > 1e-7:
        raise DegenerateConfiguration("tetrahedra are not projectively equivalent")
    return v2 @ np.diag(d) @ np.linalg.inv(v1)

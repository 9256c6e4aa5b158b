"""Complex projective geometry in P^1 and P^3.

Points and planes of P^3 are plain complex 4-vectors (a plane is the covector
of its equation).  Points of P^1 are either complex numbers, ``math.inf`` or
homogeneous pairs ``(z0, z1)`` meaning ``z0 / z1``.  All arithmetic on P^1 is
done homogeneously, so values near a pole never overflow.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import resolve_tol
from .errors import (
    DegenerateConfiguration,
    DegenerateConic,
    DegenerateTriple,
    LineInQuadric,
    PointOffCarrier,
    PointOffQuadric,
    TangentLine,
)

INF = math.inf


# ---------------------------------------------------------------------------
# P^1
# ---------------------------------------------------------------------------

def homog(z) -> np.ndarray:
    """Homogeneous pair for a point of P^1 (``inf`` is ``(1, 0)``)."""
    if isinstance(z, np.ndarray) and z.shape == (2,):
        h = z.astype(complex)
    elif isinstance(z, (tuple, list)) and len(z) == 2:
        h = np.array(z, dtype=complex)
    else:
        z = complex(z)
        if cmath.isinf(z):
            return np.array([1.0, 0.0], dtype=complex)
        h = np.array([z, 1.0], dtype=complex)
    if not np.any(h):
        raise DegenerateConfiguration("homogeneous pair (0, 0) is not a point")
    return h


def dehomog(h, tol: float | None = None):
    """Affine value of a homogeneous pair, ``inf`` when the second entry vanishes."""
    tol = resolve_tol(tol)
    h = np.asarray(h, dtype=complex)
    if abs(h[1]) <= tol * 1e-3 * abs(h[0]):
        return INF
    return complex(h[0] / h[1])


def _det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _is_zero_det(d, a, b, tol):
    return abs(d) <= tol * np.linalg.norm(a) * np.linalg.norm(b)


def cross_ratio(z1, z2, z3, z4, tol: float | None = None):
    """``(z1-z2)(z3-z4) / ((z1-z4)(z3-z2))`` on P^1, continuous at infinity.

    Returns ``inf`` when only the denominator vanishes and raises
    :class:`DegenerateConfiguration` for the indeterminate 0/0 case.
    """
    tol = resolve_tol(tol)
    h = [homog(z) for z in (z1, z2, z3, z4)]
    d12, d34 = _det2(h[0], h[1]), _det2(h[2], h[3])
    d14, d32 = _det2(h[0], h[3]), _det2(h[2], h[1])
    num_zero = _is_zero_det(d12, h[0], h[1], tol) or _is_zero_det(d34, h[2], h[3], tol)
    den_zero = _is_zero_det(d14, h[0], h[3], tol) or _is_zero_det(d32, h[2], h[1], tol)
    if num_zero and den_zero:
        raise DegenerateConfiguration("cross-ratio is 0/0")
    if den_zero:
        return INF
    if num_zero:
        return 0j
    return complex(d12 * d34 / (d14 * d32))


@dataclass(frozen=True)
class MobiusMap:
    """Fractional linear map ``t -> (a t + b) / (c t + d)`` stored up to scale."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).reshape(2, 2)
        scale = np.abs(m).max()
        if scale == 0 or abs(np.linalg.det(m)) <= 1e-14 * scale * scale:
            raise DegenerateTriple("Mobius matrix is singular")
        object.__setattr__(self, "matrix", m / scale)

    def apply_homog(self, z) -> np.ndarray:
        return self.matrix @ homog(z)

    def __call__(self, z, tol: float | None = None):
        return dehomog(self.apply_homog(z), tol)

    def inverse(self) -> "MobiusMap":
        (a, b), (c, d) = self.matrix
        return MobiusMap(np.array([[d, -b], [-c, a]]))

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """``self o other``."""
        return MobiusMap(self.matrix @ other.matrix)

    def normalized(self) -> np.ndarray:
        """Representative with determinant 1 and a fixed sign convention."""
        m = self.matrix / cmath.sqrt(np.linalg.det(self.matrix))
        flat = m.ravel()
        k = int(np.argmax(np.abs(flat) > 1e-12))
        if flat[k].real < 0 or (flat[k].real == 0 and flat[k].imag < 0):
            m = -m
        return m

    def equals(self, other: "MobiusMap", tol: float | None = None) -> bool:
        tol = max(resolve_tol(tol), 1e-12)
        a, b = self.matrix.ravel(), other.matrix.ravel()
        k = int(np.argmax(np.abs(a)))
        if abs(b[k]) == 0:
            return False
        return bool(np.allclose(a / a[k], b / b[k], atol=tol * 10, rtol=0))

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(np.eye(2))


def _frame_01inf(p, q, r) -> np.ndarray:
    """Matrix sending 0 -> p, inf -> q, 1 -> r (homogeneous inputs)."""
    lam_mu = np.linalg.solve(np.column_stack([q, p]), r)
    return np.column_stack([lam_mu[0] * q, lam_mu[1] * p])


def mobius_through(src, dst, tol: float | None = None) -> MobiusMap:
    """The unique Mobius map sending ``src[k]`` to ``dst[k]`` for k = 0, 1, 2."""
    tol = resolve_tol(tol)
    mats = []
    for triple in (src, dst):
        h = [homog(z) for z in triple]
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if _is_zero_det(_det2(h[i], h[j]), h[i], h[j], tol):
                raise DegenerateTriple("triple has coincident points")
        mats.append(_frame_01inf(*h))
    return MobiusMap(mats[1] @ np.linalg.inv(mats[0]))


# ---------------------------------------------------------------------------
# P^3 incidence helpers
# ---------------------------------------------------------------------------

def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise DegenerateConfiguration("zero vector")
    # fix the phase of the largest entry so that representatives are stable
    k = int(np.argmax(np.abs(v)))
    return v / n * (abs(v[k]) / v[k])


def null_space(rows, dim: int) -> np.ndarray:
    """Orthonormal basis (as rows) of the ``dim``-dimensional kernel of ``rows``."""
    rows = np.atleast_2d(np.asarray(rows, dtype=complex))
    _, s, vh = np.linalg.svd(rows)
    return vh[-dim:].conj()


def proj_equal(a, b, tol: float | None = None) -> bool:
    """Proportionality test for homogeneous vectors with relative tolerance."""
    tol = resolve_tol(tol)
    a, b = unit(a), unit(b)
    return abs(abs(np.vdot(a, b)) - 1.0) <= tol * 10 or np.linalg.norm(a - b * np.vdot(b, a)) <= tol * 10


def proj_distance(a, b) -> float:
    """Sine of the Hermitian angle between two homogeneous vectors."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(np.linalg.norm(a - b * np.vdot(b, a)))


def incidence(point, plane) -> float:
    """Normalized residual of ``plane . point``."""
    point = np.asarray(point, dtype=complex)
    plane = np.asarray(plane, dtype=complex)
    return float(abs(plane @ point) / (np.linalg.norm(plane) * np.linalg.norm(point)))


def plane_through(*points) -> np.ndarray:
    """Plane spanned by three points (or a point and a line given as two points)."""
    return unit(null_space(np.array(points), 1)[0])


def meet_planes(*planes) -> np.ndarray:
    """Point common to three planes."""
    return unit(null_space(np.array(planes), 1)[0])


@dataclass(frozen=True)
class Line:
    """Line of P^3 in span representation."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p, q = unit(self.p), unit(self.q)
        if proj_distance(p, q) < 1e-10:
            raise DegenerateConfiguration("line through coincident points")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @cached_property
    def basis(self) -> np.ndarray:
        """Orthonormal 4x2 basis of the underlying 2-space."""
        u, _, _ = np.linalg.svd(np.column_stack([self.p, self.q]), full_matrices=False)
        return u

    @cached_property
    def planes(self) -> np.ndarray:
        """Two independent planes containing the line (rows)."""
        return null_space(np.array([self.p, self.q]), 2)

    def point(self, s, t=1.0) -> np.ndarray:
        return s * self.p + t * self.q

    def distance(self, x) -> float:
        x = np.asarray(x, dtype=complex)
        x = x / np.linalg.norm(x)
        return float(np.linalg.norm(x - self.basis @ (self.basis.conj().T @ x)))

    def contains(self, x, tol: float | None = None) -> bool:
        return self.distance(x) <= resolve_tol(tol) * 100

    def coords(self, x) -> np.ndarray:
        """Coordinates ``(s, t)`` with ``x ~ s p + t q`` (least squares)."""
        return np.linalg.lstsq(np.column_stack([self.p, self.q]), np.asarray(x, dtype=complex), rcond=None)[0]

    def meet_plane(self, plane) -> np.ndarray:
        plane = np.asarray(plane, dtype=complex)
        a, b = plane @ self.p, plane @ self.q
        if abs(a) + abs(b) <= 1e-12 * np.linalg.norm(plane):
            raise DegenerateConfiguration("line lies in the plane")
        return unit(b * self.p - a * self.q)

    def meet_line(self, other: "Line", tol: float | None = None) -> np.ndarray:
        """Intersection point of two coplanar lines."""
        m = np.column_stack([self.p, self.q, -other.p, -other.q])
        _, s, vh = np.linalg.svd(m)
        scale = s[0]
        if s[2] <= 1e-10 * scale:
            raise DegenerateConfiguration("lines coincide")
        if s[3] > max(resolve_tol(tol), 1e-12) * 1e3 * scale:
            raise DegenerateConfiguration("lines are skew")
        c = vh[-1].conj()
        return unit(c[0] * self.p + c[1] * self.q)

    def is_same(self, other: "Line", tol: float | None = None) -> bool:
        return self.distance(other.p) <= resolve_tol(tol) * 100 and self.distance(other.q) <= resolve_tol(tol) * 100


def line_through(a, b) -> Line:
    return Line(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def plane_meet_line(plane1, plane2) -> Line:
    """Line common to two planes."""
    ns = null_space(np.array([plane1, plane2]), 2)
    return Line(ns[0], ns[1])


def plane_of_lines(l1: Line, l2: Line) -> np.ndarray:
    """Plane containing two intersecting lines."""
    pts = np.array([l1.p, l1.q, l2.p, l2.q])
    return unit(null_space(pts, 1)[0])


def plane_point_line(point, line: Line) -> np.ndarray:
    """Plane spanned by a point and a line not containing it."""
    return plane_through(point, line.p, line.q)


def cross_ratio_on_line(p1, p2, p3, p4, carrier: Line | None = None, tol: float | None = None):
    """Cross-ratio of four collinear points of P^3.

    ``carrier`` defaults to the line through the first two distinct inputs.
    The value does not depend on how the carrier is parametrized.
    """
    tol = resolve_tol(tol)
    pts = [np.asarray(p, dtype=complex) for p in (p1, p2, p3, p4)]
    if carrier is None:
        a = pts[0]
        b = next((p for p in pts[1:] if proj_distance(a, p) > 1e-8), None)
        if b is None:
            raise DegenerateConfiguration("all four points coincide")
        carrier = Line(a, b)
    for p in pts:
        if carrier.distance(p) > max(tol, 1e-12) * 1e3:
            raise PointOffCarrier(f"point off carrier (distance {carrier.distance(p):.3e})")
    params = [carrier.coords(p) for p in pts]
    return cross_ratio(*params, tol=tol)


def cross_ratio_of_planes(planes, axis: Line, transversal: Line | None = None, tol: float | None = None):
    """Cross-ratio of four planes of the pencil through ``axis``.

    Computed by cutting the pencil with a transversal line; any transversal
    gives the same value.
    """
    if transversal is None:
        rng = np.random.default_rng(7)
        transversal = Line(rng.normal(size=4) + 1j * rng.normal(size=4), rng.normal(size=4) + 1j * rng.normal(size=4))
    pts = [transversal.meet_plane(h) for h in planes]
    return cross_ratio_on_line(*pts, carrier=transversal, tol=tol)


# ---------------------------------------------------------------------------
# Quadrics
# ---------------------------------------------------------------------------

def _segre_change() -> np.ndarray:
    """T with y = T z turning sum(z_k^2) into y0*y3 - y1*y2."""
    return np.array(
        [
            [1, 1j, 0, 0],
            [0, 0, 1, 1j],
            [0, 0, -1, 1j],
            [1, -1j, 0, 0],
        ],
        dtype=complex,
    )


_SEGRE_FORM = np.array(
    [[0, 0, 0, 0.5], [0, 0, -0.5, 0], [0, -0.5, 0, 0], [0.5, 0, 0, 0]], dtype=complex
)


@dataclass(frozen=True, eq=False)
class Quadric:
    """Smooth quadric surface ``x^T M x = 0`` of P^3 (``M`` symmetric)."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("quadric matrix must be 4x4")
        m = (m + m.T) / 2
        scale = np.abs(m).max()
        if scale == 0 or abs(np.linalg.det(m / scale)) < 1e-12:
            raise DegenerateConic("quadric is singular")
        object.__setattr__(self, "matrix", m)

    def value(self, x) -> complex:
        x = np.asarray(x, dtype=complex)
        return complex(x @ self.matrix @ x)

    def bilinear(self, x, y) -> complex:
        return complex(np.asarray(x) @ self.matrix @ np.asarray(y))

    def residual(self, x) -> float:
        x = np.asarray(x, dtype=complex)
        return float(abs(self.value(x)) / (np.abs(self.matrix).max() * np.linalg.norm(x) ** 2))

    def contains(self, x, tol: float | None = None) -> bool:
        return self.residual(x) <= resolve_tol(tol) * 100

    # -- polar duality ------------------------------------------------------
    def polar_plane(self, point) -> np.ndarray:
        return unit(self.matrix @ np.asarray(point, dtype=complex))

    def pole(self, plane) -> np.ndarray:
        return unit(np.linalg.solve(self.matrix, np.asarray(plane, dtype=complex)))

    def dual_line(self, line: Line) -> Line:
        return plane_meet_line(self.polar_plane(line.p), self.polar_plane(line.q))

    # -- ruling structure ---------------------------------------------------
    @cached_property
    def segre_frame(self) -> np.ndarray:
        """Matrix ``F`` with ``F^T M F`` the form of ``y0 y3 - y1 y2``.

        Built by a symmetric Gram-Schmidt over a fixed generic start basis, so
        the frame (and with it the labelling of the two ruling families) is a
        deterministic function of the stored matrix.
        """
        rng = np.random.default_rng(20240229)
        start = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        basis = []
        for w in start:
            v = w.astype(complex)
            for b in basis:
                v = v - self.bilinear(v, b) * b
            qv = self.bilinear(v, v)
            if abs(qv) < 1e-10 * np.abs(self.matrix).max() * np.linalg.norm(v) ** 2:
                raise DegenerateConic("Gram-Schmidt breakdown on quadric")
            basis.append(v / cmath.sqrt(qv))
        s = np.column_stack(basis)
        return s @ np.linalg.inv(_segre_change())

    @cached_property
    def _segre_inv(self) -> np.ndarray:
        return np.linalg.inv(self.segre_frame)

    def segre_params(self, p):
        """Return ((a:b), (c:d)) with p ~ F (ac, ad, bc, bd)."""
        y = self._segre_inv @ np.asarray(p, dtype=complex)
        ab = np.array([y[0], y[2]]) if np.linalg.norm([y[0], y[2]]) >= np.linalg.norm([y[1], y[3]]) else np.array([y[1], y[3]])
        cd = np.array([y[0], y[1]]) if np.linalg.norm([y[0], y[1]]) >= np.linalg.norm([y[2], y[3]]) else np.array([y[2], y[3]])
        return ab, cd

    def family_line(self, p, family: int) -> Line:
        """Generator of the given family (0 or 1, in the Segre frame) through ``p``."""
        ab, cd = self.segre_params(p)
        f = self.segre_frame
        if family == 0:
            a, b = ab
            return Line(f @ np.array([a, 0, b, 0]), f @ np.array([0, a, 0, b]))
        c, d = cd
        return Line(f @ np.array([c, d, 0, 0]), f @ np.array([0, 0, c, d]))

    def point_from_params(self, ab, cd) -> np.ndarray:
        a, b = ab
        c, d = cd
        return unit(self.segre_frame @ np.array([a * c, a * d, b * c, b * d]))


def rulings_through(p, quadric: Quadric, orientation: int = 0, tol: float | None = None):
    """Left and right generators ``(L_p, R_p)`` of ``quadric`` through ``p``.

    Orientation 0 calls the first Segre family "left"; orientation 1 swaps.
    """
    if not quadric.contains(p, tol):
        raise PointOffQuadric(f"point is off the quadric (residual {quadric.residual(p):.3e})")
    first = quadric.family_line(p, 0)
    second = quadric.family_line(p, 1)
    return (first, second) if orientation == 0 else (second, first)


def line_quadric_intersection(line: Line, quadric: Quadric, tol: float | None = None):
    """The two points where ``line`` meets ``quadric`` (unordered pair)."""
    tol = resolve_tol(tol)
    p, q = line.p, line.q
    a = quadric.bilinear(p, p)
    b = quadric.bilinear(p, q)
    c = quadric.bilinear(q, q)
    scale = max(abs(a), abs(b), abs(c))
    mscale = np.abs(quadric.matrix).max()
    if scale <= tol * mscale:
        raise LineInQuadric("line lies on the quadric")
    disc = b * b - a * c
    if abs(disc) <= tol * scale * scale:
        raise TangentLine("line is tangent to the quadric")
    root = cmath.sqrt(disc)
    # roots of a s^2 + 2 b s t + c t^2 without cancellation
    if abs(a) >= abs(c):
        w = -b - root if abs(-b - root) >= abs(-b + root) else -b + root
        # s/t = w / a and s/t = c / w
        pts = (w * p + a * q, c * p + w * q)
    else:
        w = -b - root if abs(-b - root) >= abs(-b + root) else -b + root
        # t/s = w / c and t/s = a / w
        pts = (c * p + w * q, w * p + a * q)
    return tuple(unit(x) for x in pts)


def polar_dual(x, quadric: Quadric, kind: str | None = None):
    """Polar dual of a point, plane or line with respect to ``quadric``.

    Points and planes are both 4-vectors, so ``kind`` ("point" or "plane") is
    required for them; lines are recognised by type.
    """
    if isinstance(x, Line):
        return quadric.dual_line(x)
    if kind == "point":
        return quadric.polar_plane(x)
    if kind == "plane":
        return quadric.pole(x)
    raise ValueError("kind must be 'point' or 'plane' for vector input")


def dual_line_via_rulings(line: Line, quadric: Quadric, orientation: int = 0, tol: float | None = None) -> Line:
    """The line through ``L_x & R_y`` and ``R_x & L_y`` where ``{x, y} = line & Q``."""
    x, y = line_quadric_intersection(line, quadric, tol)
    lx, rx = rulings_through(x, quadric, orientation, tol)
    ly, ry = rulings_through(y, quadric, orientation, tol)
    return Line(lx.meet_line(ry), rx.meet_line(ly))


def generator_meet(l1: Line, l2: Line) -> np.ndarray:
    """Intersection of generators from opposite families."""
    return l1.meet_line(l2)


# ---------------------------------------------------------------------------
# Conics
# ---------------------------------------------------------------------------

def _plane_basis(plane) -> np.ndarray:
    return null_space(np.atleast_2d(plane), 3)


def conic_second_point(quadric: Quadric, plane, point, through) -> np.ndarray:
    """Second intersection of the conic ``quadric & plane`` with the line from
    ``point`` (on the conic) to ``through`` (in the plane)."""
    line = Line(point, through)
    x, y = line_quadric_intersection(line, quadric)
    return x if proj_distance(x, point) > proj_distance(y, point) else y


def cross_ratio_on_conic(p1, p2, p3, p4, quadric: Quadric, plane, center=None, tol: float | None = None):
    """Cross-ratio of four points on the plane conic ``quadric & plane``.

    Computed by projecting from ``center`` (a fifth point of the conic) to a
    pencil of lines; the value is independent of that choice.  When
    ``center`` is omitted a conic point distinct from the inputs is generated.
    """
    tol = resolve_tol(tol)
    plane = np.asarray(plane, dtype=complex)
    pts = [np.asarray(p, dtype=complex) for p in (p1, p2, p3, p4)]
    basis = _plane_basis(plane)
    restricted = basis @ quadric.matrix @ basis.T
    if abs(np.linalg.det(restricted / np.abs(restricted).max())) < 1e-10:
        raise DegenerateConic("plane section of the quadric is singular")
    for p in pts:
        if incidence(p, plane) > tol * 1e3 or quadric.residual(p) > tol * 1e3:
            raise PointOffCarrier("point is not on the conic")
    if center is None:
        rng = np.random.default_rng(11)
        for _ in range(20):
            through = (rng.normal(size=3) + 1j * rng.normal(size=3)) @ basis
            center = conic_second_point(quadric, plane, pts[0], through)
            if min(proj_distance(center, p) for p in pts) > 1e-4:
                break
    center = np.asarray(center, dtype=complex)
    # plane frame (center, u, v): the pencil parameter of p is its (u:v) part
    c = basis.conj() @ center
    u, v = null_space(np.array([c.conj()]), 2) @ basis
    frame = np.column_stack([center, u, v])
    params = []
    for p in pts:
        if proj_distance(p, center) < 1e-8:
            raise DegenerateConfiguration("projection center coincides with an input point")
        params.append(np.linalg.solve(frame.T.conj() @ frame, frame.T.conj() @ p)[1:])
    return cross_ratio(*params, tol=tol)

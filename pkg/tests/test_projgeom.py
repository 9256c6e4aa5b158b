import cmath

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from tetratrig import projgeom as pg
from tetratrig.errors import DegenerateConfiguration, DegenerateTriple, PointOffQuadric, TangentLine

finite = st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False)


def _distinct(*zs, gap=1e-2):
    return all(abs(a - b) > gap for k, a in enumerate(zs) for b in zs[k + 1 :])


def test_cross_ratio_small_values():
    # (0 - 1)(2 - 3) / ((0 - 3)(2 - 1)) = -1/3
    assert pg.cross_ratio(0, 1, 2, 3) == pytest.approx(-1 / 3)
    assert pg.cross_ratio(1, 1j, -1, -1j) == pytest.approx(-1)


def test_cross_ratio_with_infinity():
    # the factors containing infinity cancel: [inf, 0, 1, z] = (1 - z) / 1
    z = 0.4 + 0.3j
    assert pg.cross_ratio(pg.INF, 0, 1, z) == pytest.approx(1 - z)
    assert pg.cross_ratio(0, pg.INF, 1, z) == pytest.approx((z - 1) / z)


def test_cross_ratio_coincident_points():
    assert pg.cross_ratio(0, 0, 1, 2) == pytest.approx(0)
    assert pg.cross_ratio(0, 1, 2, 0) is pg.INF


@given(finite, finite, finite, finite)
def test_cross_ratio_swap_first_third_inverts(a, b, c, d):
    assume(_distinct(a, b, c, d))
    x, y = pg.cross_ratio(a, b, c, d), pg.cross_ratio(c, b, a, d)
    assert x * y == pytest.approx(1, rel=1e-8)


@given(finite, finite, finite, finite, st.lists(finite, min_size=4, max_size=4))
def test_cross_ratio_mobius_invariant(a, b, c, d, coeffs):
    assume(_distinct(a, b, c, d))
    m = np.array(coeffs).reshape(2, 2)
    assume(abs(np.linalg.det(m)) > 1e-2)
    f = pg.MobiusMap(m)
    img = [f(z) for z in (a, b, c, d)]
    assume(all(z is not pg.INF and abs(z) < 1e6 for z in img))
    assume(_distinct(*img, gap=1e-6))
    assert pg.cross_ratio(*img) == pytest.approx(pg.cross_ratio(a, b, c, d), rel=1e-6, abs=1e-9)


@given(finite, finite, finite, finite, finite, finite)
def test_mobius_through_hits_targets(a, b, c, x, y, z):
    assume(_distinct(a, b, c) and _distinct(x, y, z))
    f = pg.mobius_through((a, b, c), (x, y, z))
    for s, t in ((a, x), (b, y), (c, z)):
        assert f(s) == pytest.approx(t, rel=1e-7, abs=1e-7)


def test_mobius_through_degenerate():
    with pytest.raises(DegenerateTriple):
        pg.mobius_through((0, 0, 1), (1, 2, 3))


def test_mobius_inverse_and_compose():
    f = pg.MobiusMap(np.array([[1, 2j], [3, 4]]))
    g = pg.MobiusMap(np.array([[0, 1], [1, 0]]))
    z = 0.3 - 0.8j
    assert f.inverse()(f(z)) == pytest.approx(z)
    assert f.compose(g)(z) == pytest.approx(f(1 / z))


def test_homog_zero_pair():
    with pytest.raises(DegenerateConfiguration):
        pg.homog((0, 0))


SEGRE = pg.Quadric(np.array([[0, 0, 0, 0.5], [0, 0, -0.5, 0], [0, -0.5, 0, 0], [0.5, 0, 0, 0]]))


def _segre_point(s, t):
    return np.array([1, t, s, s * t], dtype=complex)


def test_cross_ratio_on_line_matches_parameters():
    p, q = np.array([1.0, 2, 0, 1]), np.array([0, 1.0, 3, -1])
    ts = [0.2, -1.0, 2.5, 0.7 + 0.1j]
    pts = [p + t * q for t in ts]
    assert pg.cross_ratio_on_line(*pts) == pytest.approx(pg.cross_ratio(*ts))


def test_cross_ratio_on_conic_matches_parameters():
    # the conic x1 = x2 on x0 x3 = x1 x2 is t -> (1, t, t, t^2)
    plane = np.array([0, 1.0, -1, 0])
    ts = [0.3, -0.7, 1.9, 2.6 - 0.4j]
    pts = [_segre_point(t, t) for t in ts]
    assert pg.cross_ratio_on_conic(*pts, SEGRE, plane) == pytest.approx(pg.cross_ratio(*ts))


def test_rulings_lie_on_quadric():
    p = _segre_point(0.5, -1.5)
    for line in pg.rulings_through(p, SEGRE):
        for s in (0.0, 1.0, -2.3):
            assert SEGRE.residual(line.point(s)) < 1e-10
    left, right = pg.rulings_through(p, SEGRE)
    assert not left.is_same(right)


def test_rulings_need_point_on_quadric():
    with pytest.raises(PointOffQuadric):
        pg.rulings_through(np.array([1.0, 0, 0, 1]), SEGRE)


def test_line_quadric_intersection():
    line = pg.line_through(np.array([1.0, 0, 0, 1]), np.array([0, 1.0, 1, 0]))
    for x in pg.line_quadric_intersection(line, SEGRE):
        assert SEGRE.residual(x) < 1e-10 and line.contains(x)


def test_tangent_line_rejected():
    p = _segre_point(0.0, 0.0)
    tangent_dir = np.array([0, 1.0, 1, 0])  # in the tangent plane x3 = 0, off both rulings
    with pytest.raises(TangentLine):
        pg.line_quadric_intersection(pg.line_through(p, tangent_dir), SEGRE)


def test_pole_and_polar_are_inverse():
    x = np.array([1.0, 2, -1, 0.5])
    assert pg.proj_equal(SEGRE.pole(SEGRE.polar_plane(x)), x)


def test_dual_line_through_rulings():
    line = pg.line_through(np.array([1.0, 0, 0, 1]), np.array([0, 1.0, 1, 0]))
    assert pg.dual_line_via_rulings(line, SEGRE).is_same(SEGRE.dual_line(line))

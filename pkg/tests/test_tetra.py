import cmath
import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tetratrig import e8lattice as e8
from tetratrig import tetra as tt
from tetratrig.errors import NotInModuli, NotRealizable, RoundTripFailure, VectorNotInDomain

seeds = st.integers(0, 2**32 - 1)
geometries = st.sampled_from(tt.GEOMETRIES)
ALL_RIGHT = tt.MetricSpec.regular("spherical", math.pi / 2)


def spec_for(geometry, seed):
    return tt.random_metric_spec(geometry, np.random.default_rng(seed))


def vertex_figure_angles(spec):
    """Dihedral angles through face angles and two laws of cosines."""
    l = spec.lengths
    cos, sin = (math.cos, math.sin) if spec.geometry == "spherical" else (math.cosh, math.sinh)

    def face_angle(v, a, b):
        x, y, z = l[tt.pair_key(v, a)], l[tt.pair_key(v, b)], l[tt.pair_key(a, b)]
        c = (cos(x) * cos(y) - cos(z)) / (sin(x) * sin(y))
        return math.acos(c if spec.geometry == "hyperbolic" else -c)

    out = {}
    for i, j in tt.PAIRS:
        k, m = sorted({1, 2, 3, 4} - {i, j})
        t_k, t_m, t_km = face_angle(i, j, k), face_angle(i, j, m), face_angle(i, k, m)
        out[tt.pair_key(i, j)] = math.acos((math.cos(t_km) - math.cos(t_k) * math.cos(t_m)) / (math.sin(t_k) * math.sin(t_m)))
    return out


def test_vertex_figure_oracle_sign_convention():
    # law of cosines: cos z = cos x cos y + sin x sin y cos(angle) on the sphere
    spec = tt.MetricSpec.regular("spherical", math.pi / 2)
    assert all(a == pytest.approx(math.pi / 2) for a in vertex_figure_angles(spec).values())


@given(geometries, seeds)
def test_angle_oracle_matches_vertex_figure(geometry, seed):
    spec = spec_for(geometry, seed)
    a, b = tt.metric_angles_oracle(spec), vertex_figure_angles(spec)
    for k in a:
        assert a[k] == pytest.approx(b[k], abs=1e-8)


def test_regular_spherical_right_angles():
    angles = tt.metric_angles_oracle(ALL_RIGHT)
    assert all(a == pytest.approx(math.pi / 2, abs=1e-12) for a in angles.values())


def test_metric_spec_validation():
    with pytest.raises(NotRealizable):
        tt.MetricSpec.from_tuple("hyperbolic", (1, 1, 1, 1, 1, -1))
    with pytest.raises(ValueError):
        tt.MetricSpec("euclidean", {})
    with pytest.raises(NotRealizable):
        tt.MetricSpec.regular("spherical", 3.0).check()
    assert not tt.MetricSpec.from_tuple("hyperbolic", (0.1, 5, 5, 0.1, 0.1, 0.1)).is_realizable()


def test_spec_json_round_trip():
    spec = tt.MetricSpec.from_tuple("hyperbolic", (1, 1.2, 1.4, 1.1, 1.3, 1.5))
    assert tt.MetricSpec.from_json(spec.to_json()) == spec
    assert spec.as_tuple() == (1, 1.2, 1.4, 1.1, 1.3, 1.5)


@given(geometries, seeds)
def test_length_function_edge_values(geometry, seed):
    spec = spec_for(geometry, seed)
    L = tt.length_function(tt.from_metric(spec))
    for (i, j), l in zip(tt.PAIRS, spec.as_tuple()):
        want = math.exp(2 * l) if geometry == "hyperbolic" else cmath.exp(2j * l)
        assert L(e8.e(tt.pair_key(i, j))) == pytest.approx(want, rel=1e-8)
    assert L(e8.e("0")) == pytest.approx(1)


@given(geometries, seeds)
def test_angle_function_edge_values(geometry, seed):
    spec = spec_for(geometry, seed)
    A = tt.angle_function(tt.from_metric(spec))
    for k, a in tt.metric_angles_oracle(spec).items():
        assert A(e8.e(k)) == pytest.approx(cmath.exp(2j * (math.pi - a)), abs=1e-8)
    assert A(e8.e("I")) == pytest.approx(1)


@given(geometries, seeds)
def test_edge_cross_ratio_is_length_value(geometry, seed):
    tetra = tt.from_metric(spec_for(geometry, seed))
    L = tt.length_function(tetra)
    for i, j in tt.PAIRS:
        assert tetra.edge_cross_ratio(i, j) == pytest.approx(L(e8.e(tt.pair_key(i, j))), rel=1e-8)


def test_character_domain():
    L = tt.length_function(tt.from_metric(spec_for("hyperbolic", 3)))
    with pytest.raises(VectorNotInDomain):
        L(e8.e("I"))


@given(geometries, seeds)
def test_gauge_flips_leave_roots_unchanged(geometry, seed):
    L = tt.length_function(tt.from_metric(spec_for(geometry, seed)))
    roots = e8.sub_roots("E7L")
    for flips in itertools.chain.from_iterable(itertools.combinations(range(1, 5), k) for k in range(5)):
        h = L
        for v in flips:
            h = h.gauge(v)
        assert max(abs(h(r) - L(r)) / abs(L(r)) for r in roots) < 1e-10


@given(geometries, seeds)
def test_face_lift_residuals(geometry, seed):
    tetra = tt.from_metric(spec_for(geometry, seed))
    assert max(tt.face_residuals(tetra, tt.lift_data(tetra))) < 1e-8


@given(geometries, seeds)
def test_determinant_forms_agree(geometry, seed):
    L = tt.length_function(tt.from_metric(spec_for(geometry, seed)))
    a, b = tt.det_L(L), tt.det_L_expansion(L)
    assert abs(a - b) <= 1e-10 * max(1, abs(a))


@given(seeds, st.integers(0, 2**31))
def test_determinant_weyl_invariant(seed, pick):
    L = tt.length_function(tt.from_metric(spec_for("hyperbolic", seed)))
    w = e8.weyl_d6_group().random_element(random.Random(pick))
    a, b = tt.det_L_expansion(L.compose(w)), tt.det_L_expansion(L)
    assert abs(a - b) <= 1e-9 * max(1, abs(b))


def test_all_right_values():
    L = tt.length_function(tt.from_metric(ALL_RIGHT))
    # half-values come out as i = exp(i pi/2), i.e. the lengths pi/2
    for k in e8.PAIR_LABELS:
        assert L.half(k) == pytest.approx(1j)
        assert L(e8.e(k)) == pytest.approx(-1)
    assert not tt.is_generic(L)


def test_genericity():
    assert tt.is_generic(tt.length_function(tt.from_metric(spec_for("hyperbolic", 7))))
    # l12 + l34 = l13 + l24 = l14 + l23 makes several roots evaluate to 1
    spec = tt.MetricSpec.from_tuple("hyperbolic", (1, 1.2, 1.4, 1.1, 1.3, 1.5))
    L = tt.length_function(tt.from_metric(spec))
    assert not tt.is_generic(L)
    assert tt.near_trivial_roots(L)


@given(geometries, seeds)
def test_dual_is_involution(geometry, seed):
    tetra = tt.from_metric(spec_for(geometry, seed))
    assert tt.tetra_distance(tt.dual_tetra(tt.dual_tetra(tetra)), tetra) < 1e-8


@given(geometries, seeds)
def test_reconstruct_round_trip(geometry, seed):
    L = tt.length_function(tt.from_metric(spec_for(geometry, seed)))
    M = tt.length_function(tt.reconstruct_from_L(L))
    for v in tt.e7l_basis():
        assert M(v) == pytest.approx(L(v), rel=1e-8)


def test_reconstruct_verbatim_sign_fails():
    L = tt.length_function(tt.from_metric(spec_for("hyperbolic", 11)))
    with pytest.raises(RoundTripFailure):
        tt.reconstruct_from_L(L, convention="verbatim")


def test_reconstruct_rejects_non_generic():
    with pytest.raises(NotInModuli):
        tt.reconstruct_from_L(tt.length_function(tt.from_metric(ALL_RIGHT)))


def test_e7l_basis_has_rank_seven():
    basis = tt.e7l_basis()
    assert len(basis) == 7
    assert np.linalg.matrix_rank(np.array([v.array() for v in basis])) == 7


def test_even_permutations():
    assert tt.is_even((1, 2, 3, 4)) and not tt.is_even((2, 1, 3, 4))
    for k, l in tt.PAIRS:
        assert tt.is_even((k, l) + tt.even_completion(k, l))

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tetratrig import correspond as cor
from tetratrig import e8lattice as e8
from tetratrig import tetra as tt
from tetratrig.errors import AuxiliaryDegenerate

seeds = st.integers(0, 2**32 - 1)
ALL_RIGHT = tt.MetricSpec.regular("spherical", math.pi / 2)


def tetra_for(geometry, seed):
    return tt.from_metric(tt.random_metric_spec(geometry, np.random.default_rng(seed)))


@pytest.fixture(scope="module")
def hyper():
    return tetra_for("hyperbolic", 2024)


def test_recipe_roots():
    assert cor.ROOT_F1_FACE == e8.half("23", "24", "34", "0")
    assert cor.ROOT_F1_EDGE == e8.half("12", "13", "23", "0")
    assert cor.ROOT_F2_VERTEX == e8.half("12", "13", "14", "I")
    assert cor.ROOT_F2_FACE == e8.half("14", "24", "34", "I")
    assert e8.duality_D(cor.ROOT_F2_VERTEX) == cor.ROOT_F1_FACE
    assert e8.duality_D(cor.ROOT_F2_FACE) == cor.ROOT_F1_EDGE


@settings(max_examples=15)
@given(st.sampled_from(tt.GEOMETRIES), seeds)
def test_chains_end_to_end_and_links(geometry, seed):
    tetra = tetra_for(geometry, seed)
    L, A = tt.length_function(tetra), tt.angle_function(tetra)
    for name, rep in cor.all_recipes(tetra).items():
        char = L if name.startswith("F1") else A
        assert rep.rhs == pytest.approx(char(rep.root), rel=1e-12)
        assert rep.residual < 1e-7
        assert max(rep.link_residuals().values()) < 1e-7, name


def test_recipe_extras(hyper):
    face = cor.res_F2_face_recipe(hyper)
    assert face.extra["concurrency_scatter"] < 1e-7
    assert face.extra["auxiliary_incidence_residual"] < 1e-7
    vertex = cor.res_F2_vertex_recipe(hyper)
    assert set(vertex.links) == {"conic", "generator", "pencil", "dual"}
    assert vertex.worst() < 1e-7
    assert cor.res_F1_face_recipe(hyper).extra["projection_residual"] < 1e-7


def test_duality(hyper):
    assert max(cor.duality_residuals(hyper).values()) < 1e-7


def test_relabeling_closure(hyper):
    face = cor.relabeled_face_recipes(hyper)
    vertex = cor.relabeled_vertex_recipes(hyper)
    assert len(face) == 24 and len(vertex) == 24
    assert max(r for _, r in face) < 1e-7
    assert max(r for _, r in vertex) < 1e-7


def test_relabel_vec_is_a_group_action():
    v = e8.half("12", "13", "23", "0")
    perms = list(itertools.permutations((1, 2, 3, 4)))
    for s, t in itertools.product(perms, repeat=2):
        composed = tuple(s[t[k] - 1] for k in range(4))
        assert cor.relabel_vec(cor.relabel_vec(v, t), s) == cor.relabel_vec(v, composed)
    assert cor.relabel_vec(e8.e("12"), (3, 1, 2, 4)) == e8.e("13")


def test_whole_lattice_spot_check(hyper):
    L = tt.length_function(hyper)
    rng = np.random.default_rng(0)
    basis = tt.e7l_basis()
    for _ in range(10):
        v = e8.LatticeVec.zero()
        for b, k in zip(basis, rng.integers(-2, 3, size=7)):
            v = v + int(k) * b
        assert cor.rel_residual(cor.recipe_length_value(hyper, v), L(v)) < 1e-7


@settings(max_examples=5)
@given(st.sampled_from(tt.GEOMETRIES), seeds)
def test_edge_value_patterns(geometry, seed):
    spec = tt.random_metric_spec(geometry, np.random.default_rng(seed))
    assert cor.verify_edge_patterns(spec).worst < 1e-7


def test_triangle_readings(hyper):
    out = cor.triangle_variants(hyper, 1, 2, 3)
    assert out["p2p3"] is None
    assert cor.rel_residual(out["p1p3"], out["product"]) < 1e-8


def test_all_right_angle_recipes():
    tetra = tt.from_metric(ALL_RIGHT)
    for fn in (cor.res_F2_vertex_recipe, cor.res_F2_face_recipe):
        rep = fn(tetra)
        assert rep.lhs == pytest.approx(-1j, abs=1e-12)
        assert rep.rhs == pytest.approx(-1j, abs=1e-12)


def test_all_right_length_recipes_degenerate():
    # the auxiliary chord through E_12 is tangent to the quadric here
    tetra = tt.from_metric(ALL_RIGHT)
    for fn in (cor.res_F1_face_recipe, cor.res_F1_edge_recipe):
        with pytest.raises(AuxiliaryDegenerate):
            fn(tetra)

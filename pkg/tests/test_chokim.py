import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from tetratrig import chokim as ck
from tetratrig import e8lattice as e8
from tetratrig import tetra as tt
from tetratrig.errors import DegenerateConfiguration, NotEquivalent, ZeroPoleCollision
from tetratrig.projgeom import MobiusMap

seeds = st.integers(0, 2**32 - 1)
geometries = st.sampled_from(tt.GEOMETRIES)
ALL_RIGHT = tt.MetricSpec.regular("spherical", math.pi / 2)
finite = st.floats(-5, 5, allow_nan=False)


def spec_for(geometry, seed):
    return tt.random_metric_spec(geometry, np.random.default_rng(seed))


def homs(spec):
    tetra = tt.from_metric(spec)
    return tt.length_function(tetra), tt.angle_function(tetra)


def close(a, b, tol=1e-9):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def test_all_right_configurations():
    assert close(ck.config_metric(ALL_RIGHT, "Omega").values, (1, 1j, 1j, 1j, 1j, 1, 1, 1))
    l = math.pi / 2
    want = (1,) + (cmath.exp(3j * l),) * 4 + (cmath.exp(4j * l),) * 3
    assert close(ck.config_metric(ALL_RIGHT, "Pi").values, want)


def test_hyperbolic_perimeters_exceed_one():
    c = ck.config_metric(spec_for("hyperbolic", 1), "Pi")
    assert all(abs(z.imag) < 1e-15 and z.real > 1 for z in c.values[1:])


@given(geometries, seeds)
def test_configurations_from_characters(geometry, seed):
    spec = spec_for(geometry, seed)
    L, A = homs(spec)
    assert ck.config_from_hom(L).distance(ck.config_metric(spec, "Pi")) < 1e-8
    assert ck.config_from_hom(A).distance(ck.config_metric(spec, "Omega")) < 1e-8


def test_trivial_character_configuration():
    one = tt.CharacterHom((1,) * 8)
    assert ck.config_from_hom(one).values == (1,) * 8


def test_example_cho_kim_functions():
    L, A = homs(ALL_RIGHT)
    ck_l = ck.ck_from_config(ck.config_from_hom(L))
    ck_a = ck.ck_from_config(ck.config_from_hom(A))
    assert close(ck_l.zeros, (-1j,) * 4) and close(ck_l.poles, (1,) * 4)
    assert close(ck_a.zeros, (1j,) * 4) and close(ck_a.poles, (1,) * 4)
    pair = ck.principal_parameters(ck_a)
    assert sorted([pair.p1, pair.p2], key=abs) == pytest.approx([(1 + 1j) / 2, 1 + 1j])
    for p in (pair.p1, pair.p2):
        assert ck.evaluate_ck(ck_a, p) == pytest.approx(1)


def test_example_psi_direction():
    L, A = homs(ALL_RIGHT)
    ck_l = ck.ck_from_config(ck.config_from_hom(L))
    ck_a = ck.ck_from_config(ck.config_from_hom(A))
    m = ck.psi(ck_l, ck_a)
    inverse_of_printed = MobiusMap(np.array([[1 + 1j, -1], [1, -(1 - 1j)]]))
    printed = MobiusMap(np.array([[1 - 1j, -1], [1, -(1 + 1j)]]))
    assert m.equals(inverse_of_printed)
    assert ck.composition_residual(ck_l, ck_a, inverse_of_printed) < 1e-12
    assert ck.composition_residual(ck_l, ck_a, printed) > 0.1
    # the printed map sends i to -i, a zero of CK^L
    assert printed(1j) == pytest.approx(-1j)


def test_zero_pole_collision():
    c = ck.Config8((1, 1, 2, 3, 4, 5, 6, 7))
    with pytest.raises(ZeroPoleCollision):
        ck.ck_from_config(c)


@given(geometries, seeds)
def test_constant_terms_cancel(geometry, seed):
    f = ck.ck_from_config(ck.config_from_hom(homs(spec_for(geometry, seed))[0]))
    assert abs(f.constant_defect()) < 1e-9 * max(1, abs(np.prod(f.zeros)))


@given(geometries, seeds)
def test_level_one_set(geometry, seed):
    f = ck.ck_from_config(ck.config_from_hom(homs(spec_for(geometry, seed))[0]))
    pair = ck.principal_parameters(f)
    for p in pair.as_tuple():
        assert ck.evaluate_ck(f, p) == pytest.approx(1, rel=1e-8)
    # the remaining preimages of 1 are 0 and infinity
    level = [z for z in f.level_set(1.0) if z is not ck.INF]
    assert len(level) == 3
    assert min(abs(z) for z in level) < 1e-8


@given(geometries, seeds)
def test_psi_is_unique_and_verifies(geometry, seed):
    L, A = homs(spec_for(geometry, seed))
    ck_l = ck.ck_from_config(ck.config_from_hom(L))
    ck_a = ck.ck_from_config(ck.config_from_hom(A))
    assert len(ck.psi_candidates(ck_l, ck_a)) == 1
    m = ck.psi(ck_l, ck_a)
    assert ck.composition_residual(ck_l, ck_a, m) < 1e-7
    # psi carries the level-1 set of CK^L to that of CK^A
    src = [0, ck.INF] + list(ck.principal_parameters(ck_l).as_tuple())
    dst = [0, ck.INF] + list(ck.principal_parameters(ck_a).as_tuple())
    for z in src:
        w = m(z)
        assert any((w is ck.INF and d is ck.INF) or (w is not ck.INF and d is not ck.INF and abs(w - d) < 1e-7 * max(1, abs(d))) for d in dst)


def test_psi_identity():
    L, _ = homs(spec_for("hyperbolic", 2))
    f = ck.ck_from_config(ck.config_from_hom(L))
    assert ck.psi(f, f).equals(MobiusMap.identity())


@given(geometries, seeds)
def test_solver_matches_oracle(geometry, seed):
    spec = spec_for(geometry, seed)
    got, want = ck.solve_angles(spec).angles, tt.metric_angles_oracle(spec)
    for k in want:
        assert got[k] == pytest.approx(want[k], abs=1e-7)


def test_solver_all_right():
    assert all(abs(a - math.pi / 2) < 1e-9 for a in ck.solve_angles(ALL_RIGHT).angles.values())


@given(geometries, seeds)
def test_principal_order_rule(geometry, seed):
    spec = spec_for(geometry, seed)
    pair = ck.metric_principal_order(ck.principal_parameters(ck.ck_from_config(ck.config_metric(spec, "Pi"))), geometry)
    if geometry == "hyperbolic":
        assert pair.p1.imag > 0 and pair.p2 == pytest.approx(pair.p1.conjugate())
    else:
        assert abs(pair.p1) < 1 and pair.p2 == pytest.approx(1 / pair.p1.conjugate())


def test_regge_example():
    assert ck.regge_transform((1, 2, 3, 4, 5, 6)) == (1, 5, 4, 3, 2, 6)
    assert ck.regge_transform((0.7,) * 6) == (0.7,) * 6


@given(st.lists(finite, min_size=6, max_size=6), st.sampled_from(("lengths", "angles")))
def test_regge_involution(x, kind):
    once = ck.regge_transform(tuple(x), kind)
    assert once[0] == x[0] and once[5] == x[5]
    assert ck.regge_transform(once, kind) == pytest.approx(tuple(x), abs=1e-12)


def test_regge_dict_input():
    d = {"12": 1, "13": 2, "14": 3, "23": 4, "24": 5, "34": 6}
    assert ck.regge_transform(d)["13"] == 5


@given(seeds)
def test_regge_angles(seed):
    rng = np.random.default_rng(seed)
    spec = tt.random_metric_spec("hyperbolic", rng)
    image = tt.MetricSpec.from_tuple("hyperbolic", ck.regge_transform(spec.as_tuple()))
    assume(image.is_realizable())
    a = ck.regge_transform(tt.metric_angles_oracle(spec), "angles")
    b = tt.metric_angles_oracle(image)
    for k in b:
        assert abs(math.remainder(a[k] - b[k], 2 * math.pi)) < 1e-8


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False), min_size=4, max_size=4), seeds)
def test_projective_equivalence_recovers_map(coeffs, seed):
    m = np.array(coeffs).reshape(2, 2)
    assume(abs(np.linalg.det(m)) > 0.1)
    f = MobiusMap(m)
    c1 = ck.config_from_hom(homs(spec_for("hyperbolic", seed))[0])
    c2 = c1.map(f)
    assume(all(z is not ck.INF and abs(z) < 1e6 for z in c2))
    assert ck.projective_equivalence(c1, c2).equals(f, tol=1e-6)


def test_projective_equivalence_rejects_permutation():
    c = ck.config_metric(spec_for("hyperbolic", 5), "Pi")
    vals = list(c.values)
    vals[1], vals[5] = vals[5], vals[1]
    with pytest.raises(NotEquivalent):
        ck.projective_equivalence(c, ck.Config8(tuple(vals)))


@given(geometries, seeds)
def test_cross_ratio_invariants_agree(geometry, seed):
    spec = spec_for(geometry, seed)
    a = ck.cross_ratio_invariant(ck.config_metric(spec, "Pi"))
    b = ck.cross_ratio_invariant(ck.config_metric(spec, "Omega"))
    assert abs(a - b) <= 1e-8 * max(abs(a), abs(b))


def test_cross_ratio_invariant_degenerate():
    with pytest.raises(DegenerateConfiguration):
        ck.cross_ratio_invariant(ck.config_metric(ALL_RIGHT, "Omega"))


@given(st.lists(st.tuples(st.floats(-0.7, 0.7), st.floats(-math.pi, math.pi)), min_size=6, max_size=6))
def test_discriminant_identity(logs):
    a = {lab: cmath.exp(complex(x, y)) for lab, (x, y) in zip(e8.PAIR_LABELS, logs)}
    disc, rhs, const = ck.discriminant_identity_sides(a)
    # both sides vanish together when det_L does, hence the absolute floor
    assert abs(disc - rhs) <= 1e-8 * max(abs(disc), abs(rhs)) + 1e-10
    assert abs(const) < 1e-9


@given(geometries, seeds)
def test_discriminant_matches_determinant(geometry, seed):
    L, _ = homs(spec_for(geometry, seed))
    f = ck.ck_from_config(ck.config_from_hom(L))
    prod = np.prod([L.half(k) for k in e8.PAIR_LABELS])
    want = 16 * prod**2 * tt.det_L(L)
    assert abs(f.discriminant() - want) <= 1e-8 * abs(want)


@given(st.lists(st.integers(1, 9), min_size=6, max_size=6), st.lists(st.integers(1, 9), min_size=6, max_size=6))
def test_discriminant_identity_exact(nums, dens):
    a = {lab: Fraction(n, d) for lab, n, d in zip(e8.PAIR_LABELS, nums, dens)}
    assert ck.exact_discriminant_check(a)


@given(seeds)
def test_solver_long_hyperbolic_edges(seed):
    # large face values make the quadratic coefficients differ by many orders
    spec = tt.random_metric_spec("hyperbolic", np.random.default_rng(seed), 0.5, 4.0)
    got, want = ck.solve_angles(spec).angles, tt.metric_angles_oracle(spec)
    for k in want:
        assert got[k] == pytest.approx(want[k], abs=1e-7)

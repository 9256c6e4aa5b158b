import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tetratrig import e8lattice as e8
from tetratrig import picard as pc
from tetratrig.errors import NotInComplement, NotInFPerp

K = pc.canonical_class()
F = pc.fiber_class()
F11, F12, F21, F22 = pc.fiber_component_classes()
U = [pc.u(s) for s in pc.SURVIVORS]

small = st.integers(-3, 3)
pic_st = st.lists(small, min_size=10, max_size=10).map(lambda c: pc.PicClass(np.array(c)))
rt_st = st.lists(small, min_size=14, max_size=14).map(lambda c: pc.RTClass(np.array(c)))


def test_basic_pairings():
    assert pc.pic_pairing(pc.l_cls, pc.r_cls) == 1
    assert pc.pic_pairing(pc.l_cls, pc.l_cls) == 0
    assert pc.pic_pairing(K, K) == 0
    assert pc.pic_pairing(K, pc.u("13")) == -1
    for a, b in itertools.combinations(U, 2):
        assert pc.pic_pairing(a, b) == 0
    assert pc.rt_pairing(pc.L_CLASS, pc.R_CLASS) == 1
    assert pc.rt_pairing(pc.E(1, 2), pc.E(1, 2)) == -1


def test_signatures():
    assert pc.signature(pc.PIC_GRAM) == (1, 9)
    assert pc.signature(pc.RT_GRAM) == (1, 13)


def test_blow_down_examples():
    h3 = pc.plane_section_class(3)
    assert h3 == pc.L_CLASS + pc.R_CLASS - pc.E(1, 2) - pc.E(2, 1) - pc.E(1, 4) - pc.E(4, 1) - pc.E(2, 4) - pc.E(4, 2)
    assert pc.blow_down(h3) == pc.l_cls + pc.r_cls - pc.u("14") - pc.u("41") - pc.u("24") - pc.u("42")
    assert pc.blow_down(pc.E(1, 3)) == pc.u("13")
    for c in pc.contracted_classes():
        assert pc.rt_pairing(pc.pic_to_rt(pc.l_cls), c) == 0
        assert pc.rt_pairing(pc.pic_to_rt(pc.r_cls), c) == 0


def test_blow_down_strict():
    with pytest.raises(NotInComplement):
        pc.blow_down(pc.E(2, 1), strict=True)


@given(pic_st, pic_st)
def test_lift_preserves_pairing(a, b):
    assert pc.rt_pairing(pc.pic_to_rt(a), pc.pic_to_rt(b)) == pc.pic_pairing(a, b)
    assert pc.blow_down(pc.pic_to_rt(a)) == a


@given(rt_st)
def test_blow_down_kills_contracted_part(c):
    d = pc.pic_to_rt(pc.blow_down(c))
    rest = c - d
    # the difference lies in the span of the contracted classes
    assert all(pc.rt_pairing(d, x) == 0 for x in pc.contracted_classes())
    assert pc.blow_down(rest) == pc.PicClass.zero()


def test_fiber_components():
    assert F11 + F12 == -K
    assert F21 + F22 == F
    assert F11.dot(F11) == -2 and F11.dot(F12) == 2
    # components of different fibers are disjoint
    for a in (F11, F12):
        for b in (F21, F22):
            assert a.dot(b) == 0


def test_projection_examples():
    assert pc.project_mod_f(F11) == e8.e("I")
    assert pc.project_mod_f(F21) == e8.e("0")
    assert pc.project_mod_f(F) == e8.LatticeVec.zero()
    assert pc.project_mod_f(pc.u("31") - pc.u("23")) == e8.half("12", "13", "23", "0")
    with pytest.raises(NotInFPerp):
        pc.project_mod_f(pc.u("13"))


@given(pic_st)
def test_projection_well_defined_mod_f(c):
    if c.dot(K) != 0:
        c = c + pc.u("13") * c.dot(K)
    assert c.dot(K) == 0
    assert pc.project_mod_f(c + F) == pc.project_mod_f(c)


def test_reference_marking():
    iso = pc.reference_marking()
    assert not iso.gram_mismatches()
    assert np.array_equal(iso.pic_gram(), iso.e8_gram())
    node = pc._pic("l-u24-u13")
    assert node.dot(node) == -2 and e8.inner(iso.project(node), iso.project(node)) == -2


def test_minimal_vectors_are_roots():
    mins = pc.minimal_vectors_mod_f()
    assert len(mins) == 240
    assert set(mins) == set(e8.roots())


def test_quotient_is_even_unimodular():
    g = pc.dynkin_gram()
    assert round(abs(np.linalg.det(g))) == 1
    assert all(x % 2 == 0 for x in np.diag(g))


@pytest.mark.parametrize("B", [pc.l_cls, pc.r_cls])
def test_2B_unique(B):
    found = pc.search_2B(B)
    assert len(found) == 1
    ok, residual = pc.verify_2B(B, found[0])
    assert ok and residual == pc.PicClass.zero()


def test_2B_solution_for_l():
    want = {pc._pic(s) for s in ("l-u13", "l-u31", "u24", "u42")}
    assert set(pc.search_2B(pc.l_cls)[0]) == want


def test_2B_wrong_subset():
    ok, residual = pc.verify_2B(pc.l_cls, [pc.u("13"), pc.u("31"), pc.u("24"), pc.u("42")])
    assert not ok and residual != pc.PicClass.zero()


def test_bundle_identities():
    rep = pc.verify_bundle_identities()
    assert rep.ok
    assert len(rep.passed) == 14


def test_bundle_marking_gram():
    assert not pc.bundle_marking().gram_mismatches()


def test_bundle_orderings_tie():
    assert pc.bundle_ordering_ties() == 576


def test_reference_marking_breaks_identities():
    a = pc.bundle_assignment()
    assert pc.identity_failures(a, pc.reference_marking())


@pytest.mark.parametrize(
    "cls,kind",
    [(pc.u("13"), "section"), (F11, "fiber_component"), (K, "fiber"), (pc.l_cls, "other")],
)
def test_classify(cls, kind):
    assert pc.classify(cls) == kind


def test_adjunction_genus_zero():
    for c in U + [F11, F12, F21, F22]:
        assert pc.genus(c) == 0


def test_short_vectors_brute_force():
    g = -pc.dynkin_gram()
    vecs = pc.short_vectors(g, 2)
    assert len(vecs) == 240

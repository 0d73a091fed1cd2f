import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(os.getcwd())

from core.errors import LemmaViolation, NonDenseSlice, PointOutsideWitness
from core.ideals import Ideal
from core.multipoly import RatFunc
from core.parser import parse, parse_poly
from core.ratmap import BirationalRep, RationalMap, equal_on_dense, improve_representative
from core.weilgroup import GroupElement, WeilGroup, build_atlas, compose_reps, enumerate_words, word_text
from laws import additive, chord_law, multiplicative, shifted_multiplicative

SHIFTED = WeilGroup(shifted_multiplicative())
GM = WeilGroup(multiplicative())

points = st.integers(0, 30)
letters = st.lists(st.tuples(st.sampled_from([2, 3, 5]), st.sampled_from([1, -1])), max_size=4)


def _coord(group, text):
    return RatFunc(parse_poly(text, group.X.gens, group.X.domain))


def test_left_translation():
    group = WeilGroup(shifted_multiplicative())
    g = group.phi(1)
    assert g.rep.forward.coords[0] == _coord(group, "1 + 2*x")
    assert g.rep.validate()
    assert word_text(g.word) == "phi(1)"
    assert group.psi(1).forward.evaluate({"x": Fraction(0)}) == (Fraction(1),)


def test_translations_compose_like_the_law():
    group = WeilGroup(shifted_multiplicative())
    g = group.multiply(group.phi(1), group.phi(1))
    # (1 + 1)(1 + 1) - 1 = 3
    assert group.equal(g, group.phi(3))
    assert not group.equal(g, group.phi(1))
    assert word_text(group.invert(g).word) == "phi(1)^-1*phi(1)^-1"
    assert group.is_identity(group.multiply(g, group.invert(g)))
    assert group.is_identity(group.delta_map(1, 1))
    assert not group.is_identity(group.delta_map(3, 1))


def test_power_word():
    group = WeilGroup(multiplicative())
    g = group.power_word([((2,), 1), ((3,), 1), ((2,), -1)])
    assert group.equal(g, group.phi(3))


def test_points_outside_the_variety_are_rejected():
    group = WeilGroup(shifted_multiplicative())
    with pytest.raises(PointOutsideWitness):
        group.phi(-1)
    with pytest.raises(PointOutsideWitness):
        group.phi((1, 2))


def test_translation_by_a_point_where_the_witness_slice_vanishes():
    group = WeilGroup(additive(samples=(), h12="a"))
    assert group.phi(1).rep.validate()
    with pytest.raises(NonDenseSlice):
        group.phi(0)


def test_fixed_point_test():
    group = WeilGroup(additive())
    assert group.fixed_point_test(group.phi(0), 5)
    assert not group.fixed_point_test(group.phi(1), 5)
    X = group.X
    square = RationalMap(X, X, [parse_poly("x^2", X.gens, X.domain)])
    fake = GroupElement((((Fraction(1),), 1),), BirationalRep(square, square))
    with pytest.raises(LemmaViolation):
        group.fixed_point_test(fake, 1)


def test_chart_transition_carries_coordinates():
    group = WeilGroup(additive())
    rep = group.chart_transition(group.phi(1), group.phi(3))
    # g1^-1 g2 translates by 2
    assert rep.forward.coords[0] == _coord(group, "x + 2")
    assert rep.backward.coords[0] == _coord(group, "x - 2")


@settings(max_examples=25, deadline=None)
@given(points, points)
def test_translation_is_a_homomorphism(a, b):
    g = SHIFTED.multiply(SHIFTED.phi(a), SHIFTED.phi(b))
    assert SHIFTED.equal(g, SHIFTED.phi(a + b + a * b))
    assert SHIFTED.equal(SHIFTED.delta_map(a + b + a * b, b), SHIFTED.phi(a))


@settings(max_examples=25, deadline=None)
@given(points, points)
def test_translation_is_injective(a, b):
    assert SHIFTED.equal(SHIFTED.phi(a), SHIFTED.phi(b)) == (a == b)


@settings(max_examples=25, deadline=None)
@given(letters)
def test_a_fixed_point_means_the_identity(word):
    g = GM.power_word([((a,), e) for a, e in word])
    assert GM.fixed_point_test(g, 7) == GM.is_identity(g)


def test_enumerate_words():
    words = enumerate_words([(1,), (2,)], 2)
    assert len(words) == 1 + 2 + 4
    assert words[0] == ()
    assert words[1] == (((1,), 1),)
    assert words[3] == (((1,), 1), ((1,), 1))


def test_atlas_of_the_shifted_law():
    atlas = build_atlas(shifted_multiplicative(), [(1,)], bound=2, workers=2)
    assert len(atlas.charts) == 3
    out = atlas.to_dict()
    assert [c["word"] for c in out["charts"]] == ["e", "phi(1)", "phi(1)*phi(1)"]
    assert len(out["transitions"]) == 9
    assert len(atlas.cocycles) == 27
    assert atlas.verified and out["verified"]


def test_atlas_deduplicates_equal_elements():
    # 2*3 and 3*2 give the same translation
    atlas = build_atlas(multiplicative(), [(2,), (3,)], bound=2, verify_cocycles=False)
    assert len(atlas.charts) == 6
    assert atlas.cocycles == []


E = WeilGroup(chord_law())


def test_scalar_and_sequence_points_agree():
    g = SHIFTED.phi(3)
    for same in (SHIFTED.phi((3,)), SHIFTED.phi([3])):
        assert same.word == g.word
        assert SHIFTED.equal(same, g)
    with pytest.raises(PointOutsideWitness):
        SHIFTED.phi((3, 1))
    with pytest.raises(PointOutsideWitness):
        E.phi(0)


def test_translation_by_two_torsion_on_the_curve():
    g = E.phi((0, 0))
    assert g.rep.validate()
    gens = E.X.gens
    expected = RationalMap(E.X, E.X, [parse("-1/x", gens, E.X.domain), parse("y/x^2", gens, E.X.domain)])
    assert equal_on_dense(g.rep.forward, expected)
    assert not E.is_identity(g)
    assert E.is_identity(E.multiply(g, g))
    # the three points of order two add up to zero
    assert E.equal(E.multiply(E.phi((0, 0)), E.phi((1, 0))), E.phi((-1, 0)))
    assert E.fixed_point_test(g, (-1, 0)) is False


def test_improved_witnesses_never_shrink():
    rep = E.phi((0, 0)).rep
    better = improve_representative(rep)
    assert better.validate()
    assert equal_on_dense(better.forward, rep.forward)
    X = E.X
    for old, new in ((rep.forward.witness, better.forward.witness),
                     (rep.backward.witness, better.backward.witness)):
        assert Ideal(X.equations + [new], X.gens, X.domain).radical_member(old)


def test_atlas_of_the_chord_law():
    atlas = build_atlas(chord_law(), [(0, 0), (1, 0)], bound=2, verify_cocycles=False)
    assert len(atlas.charts) == 4
    assert len(atlas.to_dict()["transitions"]) == 16

    small = build_atlas(chord_law(), [(0, 0)], bound=2)
    assert len(small.charts) == 2
    assert len(small.cocycles) == 8
    assert small.verified


def test_cocycles_on_a_bound_three_atlas():
    atlas = build_atlas(shifted_multiplicative(), [(1,)], bound=3)
    assert len(atlas.charts) == 4
    assert len(atlas.cocycles) == 64
    assert atlas.verified


@settings(max_examples=25, deadline=None)
@given(points, points)
def test_left_and_right_translations_commute(a, b):
    left, right = SHIFTED.phi(a).rep, SHIFTED.psi(b)
    assert equal_on_dense(compose_reps(left, right).forward, compose_reps(right, left).forward)


@settings(max_examples=50, deadline=None)
@given(letters, letters, letters)
def test_group_axioms_on_random_words(w1, w2, w3):
    g, h, k = (GM.power_word([((a,), e) for a, e in w]) for w in (w1, w2, w3))
    assert GM.equal(GM.multiply(GM.multiply(g, h), k), GM.multiply(g, GM.multiply(h, k)))
    assert GM.equal(GM.multiply(GM.identity(), g), g)
    assert GM.equal(GM.multiply(g, GM.identity()), g)
    assert GM.is_identity(GM.multiply(g, GM.invert(g)))


def test_delta_map_recovers_the_element():
    g = SHIFTED.multiply(SHIFTED.phi(1), SHIFTED.phi(3))
    for b in range(10):
        (gb,) = g.rep.forward.evaluate({"x": Fraction(b)})
        assert SHIFTED.equal(SHIFTED.delta_map(gb, b), g)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

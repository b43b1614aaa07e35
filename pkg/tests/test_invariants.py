"""Invariant layer: bracket, Jones, Goeritz signature, Alexander, fingerprints.

Pinned values below were computed two ways before freezing: the bracket by
brute-force state sums, determinants by three independent routes (Goeritz
minor, |V(-1)|, |Delta(-1)|), signatures against the torus-knot formula
sigma(T(2,k)) = 1-k and additivity under connected sum.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings

from bjknot.diagram import connected_sum
from bjknot.invariants import (
    alexander,
    determinant,
    fingerprint,
    Fingerprint,
    jones,
    jones_span,
    kauffman_bracket,
    kauffman_bracket_states,
    signature,
    writhe,
)

from conftest import closure, from_dt, knot_words


def torus2(k):
    return closure("{" + ",".join(["1"] * k) + "}", 2)


class TestJones:
    def test_trefoil_pinned(self, trefoil):
        assert jones(trefoil).serialize() == "-4:-1,-3:1,-1:1"

    def test_unknot_with_kink(self):
        assert jones(closure("{1,1,-1}", 2)).serialize() == "0:1"

    def test_mirror_is_reciprocal(self, trefoil):
        assert jones(trefoil.mirror()) == jones(trefoil).substitute_reciprocal()

    def test_figure_eight_amphichiral(self, figure_eight):
        v = jones(figure_eight)
        assert v == v.substitute_reciprocal()

    def test_kink_invariance(self, trefoil):
        assert jones(closure("{1,1,1,2}", 3)) == jones(trefoil)
        assert jones(closure("{1,1,1,-2}", 3)) == jones(trefoil)

    def test_cinquefoil(self, cinquefoil):
        assert jones(cinquefoil).serialize() == "-7:-1,-6:1,-5:-1,-4:1,-2:1"


class TestBracket:
    def test_contraction_matches_state_sum(self, trefoil, figure_eight, cinquefoil):
        for d in (trefoil, figure_eight, cinquefoil):
            assert kauffman_bracket(d) == kauffman_bracket_states(d)

    def test_empty_diagram(self):
        d = closure("{}", 1)
        assert kauffman_bracket(d).serialize() == "0:1"

    def test_mirror_swaps_variable(self, trefoil):
        b = kauffman_bracket(trefoil)
        assert kauffman_bracket(trefoil.mirror()) == b.substitute_reciprocal()


class TestSignature:
    def test_torus_family(self, trefoil):
        # sigma(T(2,k)) = 1 - k for odd k > 0 with this sign convention
        assert signature(trefoil) == -2
        assert signature(torus2(5)) == -4
        assert signature(torus2(7)) == -6
        assert signature(torus2(9)) == -8

    def test_mirror_negates(self, trefoil):
        assert signature(trefoil.mirror()) == 2

    def test_figure_eight(self, figure_eight):
        assert signature(figure_eight) == 0

    def test_kink_invariance(self):
        assert signature(closure("{1}", 2)) == 0
        assert signature(closure("{1,1,1,2}", 3)) == -2
        assert signature(closure("{1,1,1,-2}", 3)) == -2

    def test_connected_sum_adds(self, trefoil):
        assert signature(connected_sum(trefoil, trefoil)) == -4
        assert signature(connected_sum(trefoil, trefoil.mirror())) == 0


class TestDeterminant:
    def test_small_values(self, trefoil, figure_eight, cinquefoil):
        assert determinant(trefoil) == 3
        assert determinant(figure_eight) == 5
        assert determinant(cinquefoil) == 5
        assert determinant(closure("{1,1,-1}", 2)) == 1

    def test_three_routes_agree(self, trefoil, figure_eight):
        for d in (trefoil, figure_eight, connected_sum(trefoil, trefoil)):
            det = Fraction(determinant(d))
            assert det == abs(jones(d).evaluate(Fraction(-1)))
            assert det == abs(alexander(d).evaluate(Fraction(-1)))


class TestAlexander:
    def test_pinned_values(self, trefoil, figure_eight, cinquefoil):
        assert alexander(trefoil).serialize() == "-1:1,0:-1,1:1"
        assert alexander(figure_eight).serialize() == "-1:1,0:-3,1:1"
        assert alexander(cinquefoil).serialize() == "-2:1,-1:-1,0:1,1:-1,2:1"
        assert alexander(closure("{1,1,-1}", 2)).serialize() == "0:1"

    def test_mirror_invariant(self, trefoil, cinquefoil):
        assert alexander(trefoil.mirror()) == alexander(trefoil)
        assert alexander(cinquefoil.mirror()) == alexander(cinquefoil)

    def test_at_one(self, trefoil, figure_eight):
        for d in (trefoil, figure_eight):
            assert abs(alexander(d).evaluate(Fraction(1))) == 1


class TestSpan:
    def test_reduced_alternating_span_is_crossing_number(self):
        assert jones_span(from_dt("[4,6,2]")) == 3
        assert jones_span(from_dt("[4,6,8,2]")) == 4
        assert jones_span(from_dt("[4,8,10,2,6]")) == 5

    def test_span_drops_below_kinked_count(self):
        # 4 crossings drawn, but one is a kink: span stays 3
        assert jones_span(closure("{1,1,1,2}", 3)) == 3


class TestFingerprint:
    def test_mirror_involution(self, trefoil):
        fp = fingerprint(trefoil)
        assert fp.mirror() == fingerprint(trefoil.mirror())
        assert fp.mirror().mirror() == fp

    def test_serialize_roundtrip(self, figure_eight):
        fp = fingerprint(figure_eight)
        assert Fingerprint.deserialize(fp.serialize()) == fp

    def test_chirality_key_ignores_mirror(self, trefoil):
        a = fingerprint(trefoil).chirality_insensitive_key()
        b = fingerprint(trefoil.mirror()).chirality_insensitive_key()
        assert a == b

    def test_distinguishes_small_knots(self, trefoil, figure_eight, cinquefoil):
        keys = {
            fingerprint(d).chirality_insensitive_key()
            for d in (trefoil, figure_eight, cinquefoil)
        }
        assert len(keys) == 3


@settings(max_examples=40, deadline=None)
@given(knot_words(max_letters=7))
def test_invariant_consistency_random(word):
    d = closure("{" + ",".join(map(str, word)) + "}", 3)
    det = determinant(d)
    sig = signature(d)
    assert det % 2 == 1
    assert sig % 2 == 0
    assert Fraction(det) == abs(jones(d).evaluate(Fraction(-1)))
    assert Fraction(det) == abs(alexander(d).evaluate(Fraction(-1)))
    assert abs(alexander(d).evaluate(Fraction(1))) == 1


@settings(max_examples=25, deadline=None)
@given(knot_words(max_letters=7))
def test_mirror_identities_random(word):
    d = closure("{" + ",".join(map(str, word)) + "}", 3)
    m = d.mirror()
    assert writhe(m) == -writhe(d)
    assert signature(m) == -signature(d)
    assert determinant(m) == determinant(d)
    assert jones(m) == jones(d).substitute_reciprocal()
    assert fingerprint(d).chirality_insensitive_key() == \
        fingerprint(m).chirality_insensitive_key()

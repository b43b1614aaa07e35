"""Move layer: Reidemeister patterns, the unknot search, and flypes.

Pinned sites come from exhaustive enumeration on small braid closures.
Each rewiring is frozen by its canonical DT code, each knot type by its
fingerprint, and every insertion and flype is checked against its exact
inverse so a silent relabeling cannot masquerade as a move.
"""

import pytest
from hypothesis import given, settings

from bjknot.codecs import diagram_to_dt
from bjknot.diagram import Diagram
from bjknot.errors import InapplicableMove, OrbitCapExceeded
from bjknot.invariants import determinant, fingerprint
from bjknot.moves import (
    FlypeMove,
    NotUnknot,
    ReidemeisterMove,
    Undetermined,
    Unknot,
    apply_flype,
    apply_move,
    detect_unknot,
    enumerate_flypes,
    enumerate_moves,
    flype_orbit,
    inverse,
    replay,
    transport_crossing_change,
)

from conftest import closure, from_dt, knot_words

# an 8-crossing alternating closure whose two-crossing clasp can be
# carried over the rest of the diagram; the flype changes the code
PRETZELISH = "{1,-2,-2,-2,1,1,-2,-2}"


class TestMoveCodec:
    def test_reidemeister_roundtrip(self):
        for text in ("R1-@7", "R2-@1,11", "R3@1,11,14", "R1+@3,0,1", "R2+@2,9,0"):
            m = ReidemeisterMove.deserialize(text)
            assert m.serialize() == text

    def test_unknown_kind_rejected(self):
        with pytest.raises(InapplicableMove):
            ReidemeisterMove.deserialize("R4@1,2")

    def test_flype_roundtrip(self):
        f = FlypeMove(0, frozenset({4, 5}), (1, 2))
        assert FlypeMove.deserialize(f.serialize()) == f


class TestRemovals:
    def test_single_kink_has_one_untwist(self):
        d = closure("{1}", 2)
        ms = [m for m in enumerate_moves(d) if m.kind == "R1-"]
        assert len(ms) == 1  # two monogon faces, one crossing
        assert apply_move(d, ms[0]).n == 0

    def test_parallel_bigon_cancels(self):
        d = closure("{1,1,-1}", 2)
        ms = [m for m in enumerate_moves(d) if m.kind == "R2-"]
        assert ms
        out = apply_move(d, ms[0])
        assert out.n == 1
        assert fingerprint(out) == fingerprint(d)

    def test_alternating_bigon_refuses(self, figure_eight):
        assert not [m for m in enumerate_moves(figure_eight) if m.kind == "R2-"]
        face = next(f for f in figure_eight.faces() if len(f) == 2)
        bad = ReidemeisterMove("R2-", (min(face), max(face)))
        with pytest.raises(InapplicableMove):
            apply_move(figure_eight, bad)

    def test_trefoil_admits_no_reduction(self):
        d = from_dt("[4,6,2]")
        assert not [m for m in enumerate_moves(d) if m.kind in ("R1-", "R2-", "R3")]

    def test_removals_have_no_inverse_record(self):
        with pytest.raises(InapplicableMove):
            inverse(ReidemeisterMove("R1-", (0,)))


class TestTriangleSlide:
    def test_pinned_slide(self):
        d = closure("{1,1,1,2}", 3)
        ms = [m for m in enumerate_moves(d) if m.kind == "R3"]
        assert [m.serialize() for m in ms] == ["R3@1,11,14"]
        out = apply_move(d, ms[0])
        assert fingerprint(out) == fingerprint(d)
        assert diagram_to_dt(out) != diagram_to_dt(d)

    def test_slide_is_an_involution(self):
        d = closure("{1,1,1,2}", 3)
        m = next(m for m in enumerate_moves(d) if m.kind == "R3")
        assert apply_move(apply_move(d, m), inverse(m)) == d

    def test_alternating_diagrams_have_no_slide(self, trefoil, figure_eight):
        for d in (trefoil, figure_eight, from_dt("[4,8,10,2,6]")):
            assert d.is_alternating()
            assert not [m for m in enumerate_moves(d) if m.kind == "R3"]


class TestInsertions:
    def test_kink_insertion_roundtrip(self, trefoil):
        ms = [m for m in enumerate_moves(trefoil) if m.kind == "R1+"]
        assert len(ms) == 24  # 6 edges x 2 lobes x 2 over bits
        for m in ms:
            out = apply_move(trefoil, m)
            assert out.n == 4
            assert fingerprint(out) == fingerprint(trefoil)
            assert apply_move(out, inverse(m, trefoil)) == trefoil

    def test_bigon_insertion_roundtrip(self, trefoil):
        ms = [m for m in enumerate_moves(trefoil) if m.kind == "R2+"]
        assert len(ms) == 36  # 12 per triangle face, 4 per bigon face
        for m in ms:
            out = apply_move(trefoil, m)
            assert out.n == 5
            assert fingerprint(out) == fingerprint(trefoil)
            assert apply_move(out, inverse(m, trefoil)) == trefoil


class TestUnknotDetection:
    def test_trefoil_witnessed_by_determinant(self, trefoil):
        assert detect_unknot(trefoil) == NotUnknot(("determinant", "3"))

    def test_figure_eight_witnessed(self, figure_eight):
        assert detect_unknot(figure_eight) == NotUnknot(("determinant", "5"))

    def test_certificate_replays_to_nothing(self):
        d = closure("{1,1,-1}", 2)
        res = detect_unknot(d)
        assert isinstance(res, Unknot)
        assert replay(d, res.moves).n == 0

    def test_zero_budget_is_undetermined(self):
        assert detect_unknot(closure("{1,1,-1}", 2), budget=0) == Undetermined(0)

    def test_eleven_crossing_neighbor_sweep(self):
        # one crossing change away from the unknot in exactly two spots
        code = [4, 8, -12, 2, 16, -6, 20, 18, 10, 22, 14]
        verdicts = []
        for i in range(len(code)):
            flipped = list(code)
            flipped[i] = -flipped[i]
            d = from_dt("[" + ",".join(map(str, flipped)) + "]")
            verdicts.append(detect_unknot(d))
        unknots = [r for r in verdicts if isinstance(r, Unknot)]
        assert len(unknots) == 2
        assert all(isinstance(r, NotUnknot) for r in verdicts if not isinstance(r, Unknot))


class TestFlypes:
    def test_trefoil_has_only_crossing_slides(self):
        d = from_dt("[4,6,2]")
        fl = enumerate_flypes(d)
        assert len(fl) == 6
        assert all(len(f.tangle) == 1 for f in fl)
        assert {c.serialize() for c in flype_orbit(d)} == {"[4,6,2]"}

    def test_zero_crossings_fixed(self):
        d = Diagram((), ())
        assert enumerate_flypes(d) == []
        assert {c.serialize() for c in flype_orbit(d)} == {"[]"}

    def test_reducible_crossing_is_not_a_flype_site(self):
        # three kinks in a row; carrying one over its neighbor is a kink
        # slide, which has no inverse in this move set
        d = Diagram((10, 7, 4, 9, 2, 6, 5, 1, 11, 3, 0, 8), (0, 0, 0))
        assert enumerate_flypes(d) == []
        with pytest.raises(InapplicableMove):
            apply_flype(d, FlypeMove(2, frozenset({0}), (9, 10)))

    def test_clasp_carry_changes_the_code(self):
        d = closure(PRETZELISH, 3)
        assert d.is_alternating()
        before = diagram_to_dt(d)
        f = FlypeMove(0, frozenset({4, 5}), (1, 2))
        assert f in enumerate_flypes(d)
        out = apply_flype(d, f)
        assert diagram_to_dt(out) != before
        assert fingerprint(out) == fingerprint(d)
        assert out.writhe() == d.writhe()
        assert out.n == d.n

    def test_same_site_inverse_restores_exactly(self):
        d = closure(PRETZELISH, 3)
        code = diagram_to_dt(d)
        for f in enumerate_flypes(d):
            out = apply_flype(d, f)
            back = [g for g in enumerate_flypes(out)
                    if g.crossing == f.crossing and g.tangle == f.tangle]
            assert len(back) == 1
            assert diagram_to_dt(apply_flype(out, back[0])) == code

    def test_orbit_covers_both_codes(self):
        d = closure(PRETZELISH, 3)
        f = FlypeMove(0, frozenset({4, 5}), (1, 2))
        codes = {c.serialize() for c in flype_orbit(d)}
        assert diagram_to_dt(d).serialize() in codes
        assert diagram_to_dt(apply_flype(d, f)).serialize() in codes

    def test_orbit_cap(self):
        with pytest.raises(OrbitCapExceeded):
            flype_orbit(closure(PRETZELISH, 3), cap=1)


class TestTransport:
    def test_square_commutes_exactly(self):
        corpus = [
            from_dt("[4,6,2]"),
            closure("{1,-2,1,-2}", 3),
            closure("{1,1,1,2}", 3),
            closure("{1,1,-2,-2,1,-2}", 3),
            closure(PRETZELISH, 3),
        ]
        squares = 0
        for d in corpus:
            for f in enumerate_flypes(d):
                flyped = apply_flype(d, f)
                for i in range(d.n):
                    j = transport_crossing_change(d, f, i)
                    left = apply_flype(d.change_crossing(i), f)
                    assert left == flyped.change_crossing(j)
                    squares += 1
        assert squares > 100


@settings(max_examples=30, deadline=None)
@given(knot_words(max_letters=7))
def test_moves_preserve_fingerprint_random(word):
    d = closure("{" + ",".join(map(str, word)) + "}", 3)
    fp = fingerprint(d)
    ms = enumerate_moves(d)
    removals = [m for m in ms if m.kind in ("R1-", "R2-", "R3")]
    for m in removals + ms[:8]:
        assert fingerprint(apply_move(d, m)) == fp


@settings(max_examples=30, deadline=None)
@given(knot_words(max_letters=7))
def test_flypes_preserve_diagram_data_random(word):
    d = closure("{" + ",".join(map(str, word)) + "}", 3)
    fp = fingerprint(d)
    code = diagram_to_dt(d)
    for f in enumerate_flypes(d)[:6]:
        out = apply_flype(d, f)
        assert out.n == d.n
        assert out.writhe() == d.writhe()
        assert fingerprint(out) == fp
        back = [g for g in enumerate_flypes(out)
                if g.crossing == f.crossing and g.tangle == f.tangle]
        assert len(back) == 1
        assert diagram_to_dt(apply_flype(out, back[0])) == code


@settings(max_examples=25, deadline=None)
@given(knot_words(max_letters=6))
def test_search_verdicts_are_sound_random(word):
    d = closure("{" + ",".join(map(str, word)) + "}", 3)
    res = detect_unknot(d, budget=20_000)
    if isinstance(res, Unknot):
        assert determinant(d) == 1
        assert replay(d, res.moves).n == 0
    elif isinstance(res, NotUnknot):
        kind, value = res.witness
        assert value not in ("1", "0:1")

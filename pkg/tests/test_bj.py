"""Crossing-change sets, the worklist, and interval arithmetic."""

import random
from pathlib import Path

import pytest

from bjknot.bj import (
    BJRecord,
    BJRun,
    DeskPipeline,
    bj_set_of,
    check_lemma_chain,
    floored_ledger,
    minimal_diagrams_of,
    strong_bj_interval,
    unknotting_changes,
    weak_bj_numbers,
)
from bjknot.codecs import parse_dt
from bjknot.errors import (
    IdentificationGap,
    InvalidDiagram,
    MissingBJRecord,
    MissingFact,
)
from bjknot.identify import (
    AMBIGUOUS,
    NAME,
    UNKNOT,
    Fact,
    FactLedger,
    KnotId,
    KnotTable,
    ingest_facts,
    ingest_table,
)
from bjknot.moves import apply_flype, enumerate_flypes
from bjknot.codecs import dt_to_diagram, diagram_to_dt
from bjknot.tabulate import (
    enumerate_reference_diagrams,
    shadow_reference_set,
)

DATA = Path(__file__).resolve().parent.parent / "src" / "bjknot" / "data"


@pytest.fixture(scope="module")
def table():
    return ingest_table(DATA / "knots.table")


@pytest.fixture(scope="module")
def ledger():
    return ingest_facts(DATA / "facts.ledger")


@pytest.fixture(scope="module")
def refs():
    return {k: enumerate_reference_diagrams(k) for k in range(3, 7)}


@pytest.fixture(scope="module")
def pipeline(table, refs):
    return DeskPipeline(table, refs)


def family_codes(name):
    lines = (DATA / "minimal" / f"{name}.codes").read_text().splitlines()
    return tuple(parse_dt(t) for t in lines[1:])


class TestMinimalDiagrams:
    def test_trefoil_among_four_sign_patterns(self, table, refs):
        # the streamed half fixes the first sign, so of the trefoil's
        # diagrams only the alternating one appears; flipping two
        # crossings mirrors a single flip and is already unknotted
        out = minimal_diagrams_of("3_1", refs[3], table)
        assert out == (parse_dt("[4,6,2]"),)

    def test_figure_eight(self, table, refs):
        out = minimal_diagrams_of("4_1", refs[4], table)
        assert len(out) >= 1

    def test_crossing_count_mismatch(self, table, refs):
        with pytest.raises(InvalidDiagram):
            minimal_diagrams_of("6_1", refs[3], table)

    def test_shared_fingerprint_raises(self, refs):
        # a kinked trefoil code shares the fingerprint of the plain one
        small = KnotTable([
            ("a", parse_dt("[4,6,2]")),
            ("b", parse_dt("[4,6,2,8]")),
        ])
        with pytest.raises(IdentificationGap):
            minimal_diagrams_of("a", refs[3], small)

    def test_k12n491_closure_recovers_bundled_list(self, table):
        codes = family_codes("K12n491")
        refs12 = shadow_reference_set(codes)
        out = minimal_diagrams_of("K12n491", refs12, table)
        from bjknot.bj import _insensitive_canonical

        assert {_insensitive_canonical(c) for c in out} == {
            _insensitive_canonical(c) for c in codes
        }


class TestBJSet:
    def test_trefoil_neighbors_all_unknot(self, table, refs):
        d_k = minimal_diagrams_of("3_1", refs[3], table)
        out = bj_set_of("3_1", d_k, table)
        assert len(out) == 1
        assert next(iter(out)).kind == UNKNOT

    def test_5_1_neighbors_are_trefoils(self, table, refs):
        d_k = minimal_diagrams_of("5_1", refs[5], table)
        out = bj_set_of("5_1", d_k, table)
        assert {kid.name for kid in out} == {"3_1"}

    def test_empty_diagram_set_rejected(self, table):
        with pytest.raises(InvalidDiagram):
            bj_set_of("3_1", [], table)

    def test_unrecognized_neighbor_raises(self, refs, table):
        # a table missing 3_1 cannot place the neighbors of 5_1
        small = KnotTable([("4_1", parse_dt("[4,6,8,2]"))])
        d_k = minimal_diagrams_of("5_1", refs[5], table)
        with pytest.raises(IdentificationGap):
            bj_set_of("5_1", d_k, small)

    def test_gap_tolerance_excludes_and_marks(self, refs, table):
        small = KnotTable([("4_1", parse_dt("[4,6,8,2]"))])
        d_k = minimal_diagrams_of("5_1", refs[5], table)
        sink = []
        out = bj_set_of("5_1", d_k, small, allow_gaps=True, gap_sink=sink)
        assert out == frozenset()
        assert sink and all(kid.warning is None for _, kid in sink)

    def test_undetermined_never_tolerated(self, refs, table):
        d_k = minimal_diagrams_of("3_1", refs[3], table)
        with pytest.raises(IdentificationGap):
            bj_set_of("3_1", d_k, table, budget=0, allow_gaps=True)

    def test_flype_translated_copies_agree(self, table, refs):
        for name in ("5_1", "5_2", "6_2"):
            k = table.entry(name).crossing_number
            d_k = minimal_diagrams_of(name, refs[k], table)
            base = bj_set_of(name, d_k, table)
            translated = []
            for code in d_k:
                d = dt_to_diagram(code)
                flypes = enumerate_flypes(d)
                translated.append(
                    diagram_to_dt(apply_flype(d, flypes[0])) if flypes
                    else code
                )
            assert bj_set_of(name, translated, table) == base


class TestUnknottingChanges:
    def test_small_values(self):
        assert unknotting_changes(parse_dt("[4,6,2]")) == 1
        assert unknotting_changes(parse_dt("[4,6,8,2]")) == 1
        assert unknotting_changes(parse_dt("[6,8,10,2,4]")) == 2

    def test_unknot_diagram_needs_none(self):
        assert unknotting_changes(parse_dt("[4,-6,2]")) == 0

    def test_half_crossing_bound(self, refs):
        for k, ref in refs.items():
            for code in ref.diagrams:
                assert unknotting_changes(code) <= k // 2


def fake_run(values, records=None):
    return BJRun(
        n_max=8,
        values=values,
        records=records or {},
        overrides_used={},
        gap_counts={},
        log=(),
    )


class FakeProvider:
    """Records handed out from a dict of name -> (crossing, members, gaps)."""

    def __init__(self, stages):
        self.stages = stages

    def knots_at(self, n):
        return tuple(sorted(
            name for name, (k, _, _) in self.stages.items() if k == n
        ))

    def record(self, name):
        k, members, gaps = self.stages[name]
        return BJRecord(
            KnotId(NAME, (name,)),
            k,
            (parse_dt("[4,6,2]"),),
            tuple(members),
            "fake",
            gaps=tuple(gaps),
        )


UNKNOT_ID = KnotId(UNKNOT)


def named(n):
    return KnotId(NAME, (n,))


class TestWorklist:
    def test_small_scale_values(self, pipeline):
        run = weak_bj_numbers(6, pipeline)
        assert run.values == {
            "unknot": 0,
            "3_1": 1, "4_1": 1,
            "5_1": 2, "5_2": 1,
            "6_1": 1, "6_2": 1, "6_3": 1,
            "3_1#3_1": 2, "3_1#3_1*": 2,
        }

    def test_pass_order_independence(self, pipeline):
        base = weak_bj_numbers(6, pipeline).values

        class Shuffled:
            def __init__(self, inner, seed):
                self.inner = inner
                self.rng = random.Random(seed)

            def knots_at(self, n):
                names = list(self.inner.knots_at(n))
                self.rng.shuffle(names)
                return tuple(names)

            def record(self, name):
                rec = self.inner.record(name)
                members = list(rec.bj_set)
                self.rng.shuffle(members)
                return BJRecord(
                    rec.knot, rec.crossing_number, rec.minimal_diagrams,
                    tuple(members), rec.provenance, rec.gaps,
                )

        for seed in (1, 7, 23):
            assert weak_bj_numbers(6, Shuffled(pipeline, seed)).values == base

    def test_missing_reference_set(self, table, refs):
        # a pipeline without k=6 references schedules nothing at 6 (the
        # census is out of its reach) and cannot record 6_1 directly
        partial = DeskPipeline(table, {k: refs[k] for k in (3, 4, 5)})
        assert "6_1" not in partial.knots_at(6)
        with pytest.raises(MissingBJRecord):
            partial.record("6_1")

    def test_unscheduled_member_without_fact(self):
        provider = FakeProvider({
            "x": (3, [UNKNOT_ID, named("ghost")], []),
        })
        with pytest.raises(MissingBJRecord):
            weak_bj_numbers(3, provider)

    def test_override_terminates_recursion(self, ledger):
        provider = FakeProvider({
            "x": (3, [UNKNOT_ID, named("9_38")], []),
        })
        run = weak_bj_numbers(3, provider, overrides=ledger)
        assert run.values["x"] == 1
        assert run.overrides_used["9_38"] == (3, "ow08")

    def test_gap_floor_blocks_high_assignment(self, ledger):
        # y resolves to 2; x would assign 3 at level 2, but its excluded
        # neighbor is only known non-trivial, so nothing sound exists
        provider = FakeProvider({
            "a": (3, [UNKNOT_ID], []),
            "y": (4, [named("a"), named("9_38")], []),
            "x": (5, [named("y")], ["[gap]"]),
        })
        with pytest.raises(MissingBJRecord, match="floor"):
            weak_bj_numbers(5, provider, overrides=ledger)

    def test_gap_floor_allows_level_one(self, ledger):
        provider = FakeProvider({
            "a": (3, [UNKNOT_ID], []),
            "x": (4, [named("a")], ["[gap]"]),
        })
        run = weak_bj_numbers(4, provider, overrides=ledger)
        assert run.values["x"] == 2
        assert run.gap_counts["x"] == 1

    def test_ambiguous_member_with_common_value(self):
        provider = FakeProvider({
            "a": (3, [UNKNOT_ID], []),
            "b": (3, [UNKNOT_ID], []),
            "x": (4, [KnotId(AMBIGUOUS, ("a", "b"))], []),
        })
        run = weak_bj_numbers(4, provider)
        assert run.values["x"] == 2

    def test_ambiguous_member_mixed_values_floor_only(self):
        # the collision class straddles values 1 and 2; x still assigns
        # via its resolved member, the ambiguity only floors
        provider = FakeProvider({
            "a": (3, [UNKNOT_ID], []),
            "b": (4, [named("a")], []),
            "x": (5, [named("a"), KnotId(AMBIGUOUS, ("a", "b"))], []),
        })
        run = weak_bj_numbers(5, provider)
        assert run.values["x"] == 2

    def test_same_stage_interdependence(self):
        provider = FakeProvider({
            "a": (3, [UNKNOT_ID], []),
            "b": (3, [named("a")], []),
            "c": (3, [named("b")], []),
        })
        run = weak_bj_numbers(3, provider)
        assert (run.values["a"], run.values["b"], run.values["c"]) == (1, 2, 3)

    def test_render_is_deterministic(self, pipeline):
        a = weak_bj_numbers(5, pipeline).render()
        b = weak_bj_numbers(5, pipeline).render()
        assert a == b and "3_1 = 1" in a


class TestStrongInterval:
    def test_trefoil(self, ledger):
        assert strong_bj_interval("3_1", [UNKNOT_ID], ledger) == (1, 1)

    def test_unknot_convention(self, ledger):
        assert strong_bj_interval("unknot", [], ledger) == (0, 0)

    def test_missing_fact(self, ledger):
        with pytest.raises(MissingFact):
            strong_bj_interval("x", [named("nameless")], ledger)

    def test_open_upper_bound_propagates(self, ledger):
        lo, hi = strong_bj_interval("x", [named("K12n512")], ledger)
        assert (lo, hi) == (3, None)

    def test_mixed_members(self, ledger):
        lo, hi = strong_bj_interval(
            "x", [named("9_38"), named("K12n512")], ledger
        )
        assert (lo, hi) == (3, 4)

    def test_ambiguous_member_widest_bounds(self, ledger):
        lo, hi = strong_bj_interval(
            "x", [KnotId(AMBIGUOUS, ("K12n288", "K12n501"))], ledger
        )
        assert (lo, hi) == (2, 3)

    def test_excluded_members_floor_lower_end(self, ledger):
        lo, hi = strong_bj_interval(
            "x", [named("9_38")], ledger, excluded_not_unknot=5
        )
        assert (lo, hi) == (2, 4)

    def test_floored_ledger_fills_named_members(self, ledger):
        rec = BJRecord(
            named("x"), 9, (parse_dt("[4,6,2]"),),
            (named("zz_unlisted"),), "fake",
        )
        aug = floored_ledger(ledger, [rec])
        assert aug.bounds("zz_unlisted") == Fact(1, None, "identified, non-trivial")
        assert aug.bounds("9_38") == ledger.bounds("9_38")
        with pytest.raises(MissingFact):
            ledger.bounds("zz_unlisted")


class TestChain:
    def test_small_scale_chain_holds(self, pipeline, ledger):
        run = weak_bj_numbers(6, pipeline)
        report = check_lemma_chain(run, ledger)
        assert report.ok
        assert report.rows[0] == "unknot: 0 <= 0 <= 0 (convention)"

    def test_lower_bound_violation(self, ledger):
        run = fake_run({"unknot": 0, "9_38": 1})
        report = check_lemma_chain(run, ledger)
        assert not report.ok
        assert any("9_38" in v for v in report.violations)

    def test_strict_gap_flagged_not_violated(self):
        ledger = FactLedger({"x": Fact(1, 1, "test")})
        report = check_lemma_chain(fake_run({"unknot": 0, "x": 2}), ledger)
        assert report.ok
        assert report.strict_gaps == ("x",)

    def test_interval_above_weak_value_violates(self, ledger):
        run = fake_run({"unknot": 0, "3_1": 1})
        report = check_lemma_chain(run, ledger, intervals={"3_1": (2, 2)})
        assert not report.ok

    def test_adjacency_violation(self):
        ledger = FactLedger({
            "x": Fact(1, 1, "test"),
            "y": Fact(3, 3, "test"),
        })
        rec = BJRecord(
            named("x"), 4, (parse_dt("[4,6,2]"),), (named("y"),), "fake"
        )
        report = check_lemma_chain(
            fake_run({"unknot": 0, "x": 1}, {"x": rec}), ledger
        )
        assert any("|u - u'| > 1" in v for v in report.violations)


class TestComposites:
    def test_granny_record(self, pipeline):
        rec = pipeline.record("3_1#3_1")
        assert rec.crossing_number == 6
        assert rec.provenance == "composite-policy"
        assert {kid.name for kid in rec.bj_set} == {"3_1"}

    def test_square_knot_record(self, pipeline):
        rec = pipeline.record("3_1#3_1*")
        assert {kid.name for kid in rec.bj_set} == {"3_1"}
        granny = pipeline.record("3_1#3_1")
        assert set(rec.minimal_diagrams) != set(granny.minimal_diagrams)

    def test_sum_with_figure_eight(self, table, refs):
        pipe = DeskPipeline(table, refs)
        rec = pipe.record("3_1#4_1")
        assert rec.crossing_number == 7
        assert {kid.name for kid in rec.bj_set} == {"3_1", "4_1"}

    def test_non_alternating_summand_aborts(self, pipeline):
        with pytest.raises(IdentificationGap, match="composite policy"):
            pipeline.record("8_20#3_1")

    def test_three_summands_abort(self, pipeline):
        with pytest.raises(IdentificationGap):
            pipeline.record("3_1#3_1#3_1")


class TestPipeline:
    def test_records_cached(self, pipeline):
        assert pipeline.record("3_1") is pipeline.record("3_1")

    def test_knots_at_lists_census_and_sums(self, pipeline):
        assert pipeline.knots_at(6) == ("3_1#3_1", "3_1#3_1*", "6_1", "6_2", "6_3")
        assert pipeline.knots_at(9) == ()

    def test_family_record_from_bundled_codes(self, table, ledger):
        families = {"K11n21": family_codes("K11n21")}
        pipe = DeskPipeline(table, {}, families=families, allow_gaps=True)
        rec = pipe.record("K11n21")
        assert rec.crossing_number == 11
        assert len(rec.minimal_diagrams) == 23
        kinds = {kid.kind for kid in rec.bj_set}
        assert UNKNOT in kinds
        assert rec.gaps

    def test_unknot_record(self, pipeline):
        rec = pipeline.record("unknot")
        assert rec.crossing_number == 0 and rec.bj_set == ()

    def test_render_mentions_gaps(self, table):
        rec = BJRecord(
            named("x"), 3, (parse_dt("[4,6,2]"),),
            (UNKNOT_ID,), "fake", gaps=("[4,6,8,2]",),
        )
        text = rec.render()
        assert "gap [4,6,8,2]" in text and "neighbor unknot" in text

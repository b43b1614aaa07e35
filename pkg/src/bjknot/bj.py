"""Crossing-change sets and weak/strong Bernhard-Jablan numbers.

The machinery here has three layers.  ``minimal_diagrams_of`` filters a
reference-set closure down to the diagrams of one named knot, giving
D_K.  ``bj_set_of`` identifies every single-change neighbor of those
diagrams, giving the set B_K of knots one crossing change away.
``weak_bj_numbers`` then runs the pass-based worklist: knots are staged
by crossing number, each stage makes repeated passes at levels 0, 1,
2, ... and a knot whose member set attains the current level is
assigned level + 1.  The unknot is pre-assigned 0.

Full recursion is impossible at desk scale above 8 or 9 crossings, so
a fact ledger can terminate branches: a member knot with no record but
a cited unknotting lower bound b satisfies u_BJ^w >= u >= b, which is
enough to certify assignments at levels <= b.  Every assignment that
completes is exact; when certification is impossible the run raises
rather than report a guess.
"""

from dataclasses import dataclass, field
from itertools import combinations
from multiprocessing import get_context

from .codecs import DTCode, canonical_dt, diagram_to_dt, dt_to_diagram
from .diagram import connected_sum
from .errors import (
    IdentificationGap,
    InvalidDiagram,
    MissingBJRecord,
    MissingFact,
    ResourceLimit,
)
from .identify import (
    AMBIGUOUS,
    NAME,
    UNKNOT,
    UNRECOGNIZED,
    Fact,
    FactLedger,
    KnotId,
    KnotTable,
    identify,
)
from .invariants import determinant, fingerprint
from .moves import Undetermined, Unknot, detect_unknot
from .tabulate import ReferenceSet, crossing_change_closure

# census names of the non-alternating knots small enough to show up as
# composite summands; the composite policy only covers alternating ones
_NONALT_SMALL = frozenset({"8_19", "8_20", "8_21"})


def _id_sort_key(kid: KnotId):
    return (kid.kind, kid.names)


@dataclass(frozen=True)
class BJRecord:
    """One knot's minimal diagrams and identified change neighborhood.

    ``gaps`` lists neighbor codes that could not be named but are
    certified non-trivial; they are excluded from ``bj_set`` and every
    consumer must account for them (an excluded member can only raise
    a computed minimum, never lower it below 1).
    """

    knot: KnotId
    crossing_number: int
    minimal_diagrams: tuple[DTCode, ...]
    bj_set: tuple[KnotId, ...]
    provenance: str
    gaps: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return self.knot.names[0] if self.knot.names else "unknot"

    def render(self) -> str:
        lines = [f"knot {self.name} crossings={self.crossing_number}"]
        lines.append(f"  provenance: {self.provenance}")
        for code in self.minimal_diagrams:
            lines.append(f"  diagram {code.serialize()}")
        for kid in self.bj_set:
            label = "unknot" if kid.kind == UNKNOT else "|".join(kid.names)
            lines.append(f"  neighbor {kid.kind} {label}")
        for g in self.gaps:
            lines.append(f"  gap {g} (certified non-trivial, excluded)")
        return "\n".join(lines)


def _insensitive_canonical(code: DTCode) -> str:
    mirrored = DTCode(tuple(-e for e in code.entries))
    a = canonical_dt(code).serialize()
    b = canonical_dt(mirrored).serialize()
    return min(a, b)


# -- worker pools ------------------------------------------------------------

# snapshot handed to forked workers; set immediately before each pool
# spins up, read-only afterwards, never shared across runs
_FORK_STATE: tuple = ()


def _sharded(items, jobs):
    size = max(1, -(-len(items) // (jobs * 8)))
    return [items[i : i + size] for i in range(0, len(items), size)]


def _chunk_identify(chunk):
    table, budget = _FORK_STATE
    return [identify(dt_to_diagram(c), table, budget) for c in chunk]


def identify_batch(codes, table: KnotTable, budget: int = 100_000, jobs: int = 1):
    """Identify each code, in order, optionally across forked workers.

    Shards keep the input order when merged, and identification is a
    pure function of the code, so the result list does not depend on
    the worker count.
    """
    items = list(codes)
    if jobs <= 1 or len(items) <= jobs:
        return [identify(dt_to_diagram(c), table, budget) for c in items]
    global _FORK_STATE
    _FORK_STATE = (table, budget)
    with get_context("fork").Pool(jobs) as pool:
        parts = pool.map(_chunk_identify, _sharded(items, jobs))
    return [kid for part in parts for kid in part]


def _chunk_matches(chunk):
    det, key = _FORK_STATE
    out = []
    for code in chunk:
        d = dt_to_diagram(code)
        if determinant(d) == det and fingerprint(d).chirality_insensitive_key() == key:
            out.append(code)
    return out


def minimal_diagrams_of(
    name: str, refs: ReferenceSet, table: KnotTable
) -> tuple[DTCode, ...]:
    """All diagrams of ``name`` in the closure of ``refs``, canonicalized.

    Membership is decided by fingerprint: a closure member whose
    fingerprint differs from the table entry's cannot be the knot, so
    only matching members need naming.  A match that lands on a
    fingerprint shared by several names cannot be placed and raises
    IdentificationGap.
    """
    entry = table.entry(name)
    if entry.crossing_number != refs.k:
        raise InvalidDiagram(
            f"{name} has crossing number {entry.crossing_number}, "
            f"reference set has k={refs.k}"
        )
    target = entry.fingerprint
    target_key = target.chirality_insensitive_key()
    out: dict[str, DTCode] = {}
    for code in crossing_change_closure(refs):
        d = dt_to_diagram(code)
        if determinant(d) != target.determinant:
            continue
        if fingerprint(d).chirality_insensitive_key() != target_key:
            continue
        names = table.index[target_key]
        if len(names) > 1:
            raise IdentificationGap(
                f"{code.serialize()}: fingerprint shared by "
                f"{', '.join(sorted(names))}; cannot isolate {name}"
            )
        canon = canonical_dt(code)
        out.setdefault(canon.serialize(), canon)
    return tuple(sorted(out.values(), key=lambda c: c.entries))


def _neighbor_codes(code: DTCode):
    base = code.entries
    for i in range(len(base)):
        ent = list(base)
        ent[i] = -ent[i]
        yield DTCode(tuple(ent))


def bj_set_of(
    name: str,
    minimal_diagrams,
    table: KnotTable,
    budget: int = 100_000,
    allow_gaps: bool = False,
    gap_sink: list | None = None,
) -> frozenset[KnotId]:
    """Identify every single-change neighbor of the given diagrams.

    An unrecognized neighbor raises IdentificationGap unless
    ``allow_gaps`` is set and the neighbor carries a non-triviality
    certificate (its unknot search concluded, negatively).  A neighbor
    whose search hit the budget is never tolerable: nothing sound can
    be said about it.  Tolerated gaps are appended to ``gap_sink`` as
    (code, id) pairs and excluded from the returned set.
    """
    diagrams = list(minimal_diagrams)
    if not diagrams:
        raise InvalidDiagram(f"{name}: empty minimal diagram set")
    ids: set[KnotId] = set()
    seen: dict[str, KnotId] = {}
    for code in diagrams:
        for neighbor in _neighbor_codes(code):
            key = _insensitive_canonical(neighbor)
            if key in seen:
                continue
            kid = identify(dt_to_diagram(neighbor), table, budget)
            seen[key] = kid
            if kid.kind == UNRECOGNIZED:
                if kid.warning is not None:
                    raise IdentificationGap(
                        f"{name}: neighbor {neighbor.serialize()}: {kid.warning}"
                    )
                if not allow_gaps:
                    raise IdentificationGap(
                        f"{name}: neighbor {neighbor.serialize()} matches no "
                        "table entry"
                    )
                if gap_sink is not None:
                    gap_sink.append((neighbor, kid))
                continue
            ids.add(kid)
    return frozenset(ids)


def unknotting_changes(code: DTCode, budget: int = 100_000) -> int:
    """Smallest number of sign flips of ``code`` that yields the unknot.

    Exhaustive over flip subsets in order of size, so the value is
    exact.  An undetermined unknot search makes the minimum unsound
    and raises ResourceLimit instead.
    """
    n = len(code.entries)
    base = code.entries
    for size in range(0, n + 1):
        for subset in combinations(range(n), size):
            ent = list(base)
            for i in subset:
                ent[i] = -ent[i]
            verdict = detect_unknot(dt_to_diagram(DTCode(tuple(ent))), budget)
            if isinstance(verdict, Unknot):
                return size
            if isinstance(verdict, Undetermined):
                raise ResourceLimit(
                    f"unknot search undetermined at flip set {subset}"
                )
    raise InvalidDiagram(f"{code.serialize()}: no flip subset unknots")


# -- the worklist ----------------------------------------------------------

# term forms inside T_K: int (resolved value), ("live", name) scheduled
# in the current stage, ("bound", floor, name, citation) ledger-cut,
# ("ambig", names) unresolved fingerprint collision, ("gap",) excluded
# non-trivial neighbor with floor 1


@dataclass
class BJWorkState:
    """One stage of the worklist: unresolved names and their terms."""

    stage: int
    S: set = field(default_factory=set)
    T: dict = field(default_factory=dict)
    blocked: dict = field(default_factory=dict)
    level: int = 0


@dataclass
class BJRun:
    """Completed worklist run: exact values plus an audit trail."""

    n_max: int
    values: dict
    records: dict
    overrides_used: dict
    gap_counts: dict
    log: tuple

    def render(self) -> str:
        lines = [f"weak BJ numbers, stages 3..{self.n_max}"]
        for name in sorted(self.values):
            lines.append(f"  {name} = {self.values[name]}")
        for name in sorted(self.overrides_used):
            floor, citation = self.overrides_used[name]
            lines.append(f"  override {name}: u >= {floor} ({citation})")
        for name in sorted(self.gap_counts):
            lines.append(
                f"  {name}: {self.gap_counts[name]} neighbors excluded "
                "(certified non-trivial)"
            )
        lines.extend(self.log)
        return "\n".join(lines)


def _build_terms(rec: BJRecord, assigned, scheduled, ledger, overrides_used):
    terms = []
    for kid in sorted(rec.bj_set, key=_id_sort_key):
        if kid.kind == UNKNOT:
            terms.append(0)
        elif kid.kind == NAME:
            terms.append(_name_term(
                kid.name, rec.name, assigned, scheduled, ledger, overrides_used
            ))
        elif kid.kind == AMBIGUOUS:
            parts = [_name_term(
                n, rec.name, assigned, scheduled, ledger, overrides_used
            ) for n in kid.names]
            if all(isinstance(p, int) for p in parts) and len(set(parts)) == 1:
                terms.append(parts[0])
            else:
                terms.append(("ambig", kid.names))
        else:
            raise IdentificationGap(
                f"{rec.name}: unrecognized member in bj_set"
            )
    for _ in rec.gaps:
        terms.append(("gap",))
    return tuple(terms)


def _name_term(member, owner, assigned, scheduled, ledger, overrides_used):
    if member in assigned:
        return assigned[member]
    if member in scheduled:
        return ("live", member)
    fact = ledger.get(member) if ledger is not None else None
    if fact is not None:
        overrides_used[member] = (fact.u_lower, fact.citation)
        return ("bound", fact.u_lower, member, fact.citation)
    raise MissingBJRecord(
        f"{owner}: member {member} has no record, no schedule, no ledger bound"
    )


def _term_floor(term, level, assigned, blocked, ledger):
    """Certified lower bound for a term at the current pass level.

    Returns None when the term cannot be bounded (a blocked member),
    which forces the owner to block as well.
    """
    if isinstance(term, int):
        return term
    kind = term[0]
    if kind == "gap":
        return 1
    if kind == "bound":
        return term[1]
    if kind == "live":
        name = term[1]
        if name in assigned:
            return assigned[name]
        if name in blocked:
            return None
        # still scheduled: had it been assignable below the current
        # level, an earlier pass would have resolved it
        return level
    if kind == "ambig":
        floors = []
        for name in term[1]:
            if name in assigned:
                floors.append(assigned[name])
            elif name in blocked:
                return None
            elif ledger is not None and name in ledger:
                floors.append(ledger.get(name).u_lower)
            else:
                floors.append(level)
        return min(floors)
    raise AssertionError(term)


def _term_value(term, assigned):
    """Exact resolved value of a term, or None if not yet numeric."""
    if isinstance(term, int):
        return term
    if term[0] == "live" and term[1] in assigned:
        return assigned[term[1]]
    if term[0] == "ambig":
        values = {assigned[n] for n in term[1] if n in assigned}
        if len(values) == 1 and all(n in assigned for n in term[1]):
            return values.pop()
    return None


def weak_bj_numbers(n_max: int, provider, overrides: FactLedger | None = None):
    """Run the staged worklist up to crossing number ``n_max``.

    ``provider`` supplies ``knots_at(n)`` and ``record(name)``.  The
    optional ledger terminates recursion at members with cited
    unknotting lower bounds.  Raises MissingBJRecord when a stage
    cannot complete; a partial answer is never returned.
    """
    assigned = {"unknot": 0}
    records = {}
    overrides_used = {}
    gap_counts = {}
    log = []

    for n in range(3, n_max + 1):
        names = sorted(set(provider.knots_at(n)))
        if not names:
            continue
        stage = BJWorkState(n, S=set(names))
        scheduled = set(stage.S)
        for name in sorted(stage.S):
            rec = provider.record(name)
            records[name] = rec
            if rec.gaps:
                gap_counts[name] = len(rec.gaps)
            stage.T[name] = _build_terms(
                rec, assigned, scheduled, overrides, overrides_used
            )
        log.append(f"stage {n}: S = {{{', '.join(sorted(stage.S))}}}")

        while stage.S:
            level = stage.level
            resolved = []
            for name in sorted(stage.S):
                terms = stage.T[name]
                nums = [v for v in (_term_value(t, assigned) for t in terms)
                        if v is not None]
                if not nums or min(nums) != level:
                    continue
                floors = [_term_floor(t, level, assigned, stage.blocked, overrides)
                          for t in terms]
                if any(f is None for f in floors):
                    stage.blocked[name] = "depends on a blocked member"
                    continue
                if any(f < level for f in floors):
                    stage.blocked[name] = (
                        f"member floor {min(floors)} below level {level}"
                    )
                    continue
                resolved.append(name)
            for name in resolved:
                assigned[name] = level + 1
                stage.S.discard(name)
                stage.blocked.pop(name, None)
                log.append(f"stage {n} pass {level}: {name} <- {level + 1}")
            if stage.S:
                pending = [
                    v for name in stage.S
                    for v in (_term_value(t, assigned) for t in stage.T[name])
                    if v is not None
                ]
                if not resolved and (not pending or max(pending) <= level):
                    reasons = "; ".join(
                        f"{m}: {stage.blocked.get(m, 'no resolvable member')}"
                        for m in sorted(stage.S)
                    )
                    raise MissingBJRecord(
                        f"stage {n} stuck at level {level}: {reasons}"
                    )
            stage.level += 1

    _check_recursion(assigned, records, overrides)
    return BJRun(
        n_max=n_max,
        values=assigned,
        records=records,
        overrides_used=overrides_used,
        gap_counts=gap_counts,
        log=tuple(log),
    )


def _check_recursion(assigned, records, ledger):
    """Post hoc: every value is 1 + min over its members, certifiably."""
    for name, rec in records.items():
        value = assigned[name]
        floor = value - 1
        attained = False
        for kid in rec.bj_set:
            if kid.kind == UNKNOT:
                member_values = [0]
            elif kid.kind == NAME:
                member_values = [_final_floor(kid.name, assigned, ledger)]
            else:
                member_values = [
                    _final_floor(n, assigned, ledger) for n in kid.names
                ]
            low = min(member_values)
            assert low >= floor, (name, kid, low, floor)
            if low == floor and (
                kid.kind == UNKNOT
                or all(n in assigned for n in kid.names)
            ):
                attained = True
        assert attained, (name, value)


def _final_floor(member, assigned, ledger):
    if member in assigned:
        return assigned[member]
    fact = ledger.get(member) if ledger is not None else None
    if fact is None:
        raise MissingBJRecord(f"recursion check: no value or bound for {member}")
    return fact.u_lower


# -- strong numbers over a fact ledger -------------------------------------

_NO_UPPER = float("inf")


def floored_ledger(ledger: FactLedger, records) -> FactLedger:
    """Extend a ledger with the universal floor u >= 1 for named members.

    Any named member of the given records that lacks a cited fact is a
    knot, not the unknot, so u >= 1 holds unconditionally.  The added
    facts carry no upper bound and cannot tighten an interval's upper
    end; they only keep strong_bj_interval total over member sets that
    mix cited and merely-identified knots.
    """
    facts = dict(ledger.facts)
    for rec in records:
        for kid in rec.bj_set:
            for name in kid.names:
                facts.setdefault(name, Fact(1, None, "identified, non-trivial"))
    return FactLedger(facts)


def strong_bj_interval(
    name: str,
    bj_set,
    ledger: FactLedger,
    excluded_not_unknot: int = 0,
):
    """Interval for 1 + min over member unknotting numbers.

    Member bounds come from the ledger.  An ambiguous member uses the
    least lower and greatest upper bound over its candidates.  Members
    excluded as certified-non-trivial gaps contribute a floor of 1 to
    the lower end and nothing to the upper.  The unknot's own value is
    (0, 0) by convention, there being no members to minimize over.
    """
    if name == "unknot":
        return (0, 0)
    lowers = []
    uppers = []
    for kid in sorted(bj_set, key=_id_sort_key):
        if kid.kind == UNKNOT:
            lowers.append(0)
            uppers.append(0)
        elif kid.kind == NAME:
            fact = ledger.bounds(kid.name)
            lowers.append(fact.u_lower)
            uppers.append(_NO_UPPER if fact.u_upper is None else fact.u_upper)
        elif kid.kind == AMBIGUOUS:
            facts = [ledger.bounds(n) for n in kid.names]
            lowers.append(min(f.u_lower for f in facts))
            ups = [f.u_upper for f in facts]
            uppers.append(_NO_UPPER if None in ups else max(ups))
        else:
            raise IdentificationGap(f"{name}: unrecognized member in bj_set")
    if excluded_not_unknot > 0:
        lowers.append(1)
    if not lowers:
        raise MissingFact(f"{name}: empty member set")
    lo = 1 + min(lowers)
    hi_min = min(uppers) if uppers else _NO_UPPER
    hi = None if hi_min == _NO_UPPER else 1 + int(hi_min)
    return (lo, hi)


# -- the Lemma chain u <= u_BJ^s <= u_BJ^w ----------------------------------


@dataclass(frozen=True)
class ChainReport:
    """Per-knot audit of ledger bounds against computed BJ numbers."""

    rows: tuple
    violations: tuple
    strict_gaps: tuple  # knots with cited u strictly below u_BJ^w

    @property
    def ok(self) -> bool:
        return not self.violations


def check_lemma_chain(run: BJRun, ledger: FactLedger, intervals=None) -> ChainReport:
    """Audit u <= u_BJ^s <= u_BJ^w against every computed value.

    ``intervals`` optionally maps names to strong-number intervals.
    Also checks the adjacency bound: pinned unknotting numbers of a
    knot and any member may differ by at most 1.  Violations are
    reported, never raised.
    """
    rows = ["unknot: 0 <= 0 <= 0 (convention)"]
    violations = []
    strict_gaps = []
    intervals = intervals or {}
    for name in sorted(run.values):
        if name == "unknot":
            continue
        w = run.values[name]
        fact = ledger.get(name)
        parts = [f"{name}: u_BJ^w = {w}"]
        if fact is not None:
            parts.append(f"u in [{fact.u_lower}, {fact.u_upper}]")
            if fact.u_lower > w:
                violations.append(f"{name}: u lower bound {fact.u_lower} > {w}")
            if fact.u_upper is not None and fact.u_upper < w:
                strict_gaps.append(name)
                parts.append("strict: u < u_BJ^w")
        s = intervals.get(name)
        if s is not None:
            lo, hi = s
            parts.append(f"u_BJ^s in [{lo}, {hi}]")
            if lo > w:
                violations.append(f"{name}: u_BJ^s lower {lo} > u_BJ^w {w}")
            if fact is not None and hi is not None and fact.u_lower > hi:
                violations.append(
                    f"{name}: u lower {fact.u_lower} > u_BJ^s upper {hi}"
                )
        rows.append(", ".join(parts))
        rec = run.records.get(name)
        if rec is None or fact is None:
            continue
        for kid in rec.bj_set:
            for member in kid.names:
                mf = ledger.get(member)
                if mf is None:
                    continue
                far = (
                    mf.u_upper is not None and fact.u_lower > mf.u_upper + 1
                ) or (
                    fact.u_upper is not None and mf.u_lower > fact.u_upper + 1
                )
                if far:
                    violations.append(
                        f"{name} ~ {member}: bounds force |u - u'| > 1"
                    )
    return ChainReport(tuple(rows), tuple(violations), tuple(strict_gaps))


# -- record providers -------------------------------------------------------


class DeskPipeline:
    """BJRecord source backed by exhaustive closures and bundled files.

    Knots at <= ``max_k`` crossings are recorded by identifying every
    member of the crossing-change closure at their crossing number.
    Composite names are synthesized from summand records.  Names with
    bundled minimal-diagram files are recorded from those files; their
    neighbor sets may carry certified gaps when ``allow_gaps`` is set.
    """

    def __init__(
        self,
        table: KnotTable,
        refs_by_k: dict[int, ReferenceSet],
        families: dict[str, tuple[DTCode, ...]] | None = None,
        budget: int = 100_000,
        allow_gaps: bool = False,
    ):
        self.table = table
        self.refs_by_k = refs_by_k
        self.families = dict(families or {})
        self.budget = budget
        self.allow_gaps = allow_gaps
        self.max_k = max(refs_by_k) if refs_by_k else 0
        self._ids_at: dict[int, dict[str, tuple[DTCode, KnotId]]] = {}
        self._records: dict[str, BJRecord] = {}

    def knots_at(self, n: int) -> tuple[str, ...]:
        names = []
        for name, entry in self.table.entries.items():
            if entry.crossing_number != n:
                continue
            if name in self.families or (n <= self.max_k and entry.minimal):
                names.append(name)
        return tuple(sorted(names))

    def record(self, name: str) -> BJRecord:
        if name in self._records:
            return self._records[name]
        if name == "unknot":
            rec = BJRecord(
                KnotId(UNKNOT), 0, (), (), "pre-assigned by convention"
            )
        elif name in self.families:
            rec = self._family_record(name)
        elif "#" in name:
            rec = self._composite_record(name)
        else:
            rec = self._closure_record(name)
        self._records[name] = rec
        return rec

    # closure members at one k, identified once and shared by every
    # record at that crossing number
    def _closure_ids(self, k: int):
        cached = self._ids_at.get(k)
        if cached is not None:
            return cached
        ids: dict[str, tuple[DTCode, KnotId]] = {}
        for code in crossing_change_closure(self.refs_by_k[k]):
            key = _insensitive_canonical(code)
            if key in ids:
                continue
            kid = identify(dt_to_diagram(code), self.table, self.budget)
            if kid.kind == UNRECOGNIZED:
                detail = kid.warning or "matches no table entry"
                raise IdentificationGap(
                    f"k={k} closure member {code.serialize()}: {detail}"
                )
            ids[key] = (code, kid)
        self._ids_at[k] = ids
        return ids

    def _closure_record(self, name: str) -> BJRecord:
        entry = self.table.entry(name)
        k = entry.crossing_number
        if k not in self.refs_by_k:
            raise MissingBJRecord(
                f"{name}: no reference set at k={k} and no bundled diagrams"
            )
        ids = self._closure_ids(k)
        mine = sorted(
            (canonical_dt(code) for code, kid in ids.values()
             if kid.kind == NAME and kid.name == name),
            key=lambda c: c.entries,
        )
        if not mine:
            raise MissingBJRecord(f"{name}: no diagram in the k={k} closure")
        members: set[KnotId] = set()
        for code in mine:
            for neighbor in _neighbor_codes(code):
                members.add(ids[_insensitive_canonical(neighbor)][1])
        return BJRecord(
            KnotId(NAME, (name,)),
            k,
            tuple(mine),
            tuple(sorted(members, key=_id_sort_key)),
            f"exhaustive closure at k={k}",
        )

    def _family_record(self, name: str) -> BJRecord:
        codes = tuple(
            sorted((canonical_dt(c) for c in self.families[name]),
                   key=lambda c: c.entries)
        )
        entry = self.table.entry(name)
        sink: list = []
        members = bj_set_of(
            name, codes, self.table, self.budget,
            allow_gaps=self.allow_gaps, gap_sink=sink,
        )
        return BJRecord(
            KnotId(NAME, (name,)),
            entry.crossing_number,
            codes,
            tuple(sorted(members, key=_id_sort_key)),
            "bundled minimal diagram list",
            gaps=tuple(code.serialize() for code, _ in sink),
        )

    def _composite_record(self, name: str) -> BJRecord:
        parts = name.split("#")
        if len(parts) != 2:
            raise IdentificationGap(f"{name}: only two-summand sums supported")
        a, b = parts
        mirror_b = b.endswith("*")
        b = b.rstrip("*")
        for summand in (a, b):
            if summand in _NONALT_SMALL or "#" in summand:
                raise IdentificationGap(
                    f"{name}: summand {summand} is not a tabulated "
                    "alternating knot (composite policy)"
                )
        rec_a = self.record(a)
        rec_b = self.record(b)
        da = dt_to_diagram(rec_a.minimal_diagrams[0])
        db = dt_to_diagram(rec_b.minimal_diagrams[0])
        if mirror_b:
            db = db.mirror()
        minimal = []
        for ca in rec_a.minimal_diagrams:
            for cb in rec_b.minimal_diagrams:
                second = dt_to_diagram(cb)
                if mirror_b:
                    second = second.mirror()
                minimal.append(
                    canonical_dt(diagram_to_dt(
                        connected_sum(dt_to_diagram(ca), second)
                    ))
                )
        minimal = sorted(set(minimal), key=lambda c: c.entries)
        members: set[KnotId] = set()
        for changed, fixed in ((rec_a, db), (rec_b, da)):
            for kid in changed.bj_set:
                if kid.kind == UNKNOT:
                    members.add(identify(fixed, self.table, self.budget))
                    continue
                if kid.kind != NAME:
                    raise IdentificationGap(
                        f"{name}: ambiguous summand member in {changed.name}"
                    )
                piece = dt_to_diagram(self.table.entry(kid.name).code)
                if changed is rec_b and mirror_b:
                    piece = piece.mirror()
                summed = connected_sum(piece, fixed)
                member = identify(summed, self.table, self.budget)
                if member.kind == UNRECOGNIZED:
                    raise IdentificationGap(
                        f"{name}: changed-summand sum {kid.name} not in table"
                    )
                members.add(member)
        return BJRecord(
            KnotId(NAME, (name,)),
            rec_a.crossing_number + rec_b.crossing_number,
            tuple(minimal),
            tuple(sorted(members, key=_id_sort_key)),
            "composite-policy",
        )

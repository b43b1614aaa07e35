"""Diagram-to-name matching against a fingerprint table.

A diagram is identified by the invariant tuple of its knot, not by
geometry, so two names sharing all four invariants surface as a
collision instead of being resolved by guesswork.  Matching ignores
chirality throughout: a DT code pins its diagram only up to
reflection, and the tables the names come from list a knot and its
mirror under one entry.

The unknot is special-cased.  No fingerprint hit ever yields it; only
a replayable certificate from the move search does.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .codecs import DTCode, dt_to_diagram, parse_dt
from .diagram import Diagram
from .errors import (
    CodecError,
    InvertedBounds,
    LedgerConflict,
    MalformedLine,
    MissingFact,
    NonRealizable,
    NonRealizableCode,
)
from .invariants import Fingerprint, fingerprint
from .moves import NotUnknot, Undetermined, Unknot, detect_unknot

_CENSUS_NAME = re.compile(r"^(?:K(\d+)[an]\d+|(\d+)_\d+)$")


def _census_crossings(name: str) -> int | None:
    m = _CENSUS_NAME.match(name)
    if m is None:
        return None
    return int(m.group(1) or m.group(2))


@dataclass(frozen=True)
class TableEntry:
    """One named knot: reference code, its fingerprint, crossing count.

    ``minimal`` records whether the stored code realizes the knot at
    its crossing number.  Entries ingested from braid closures or other
    oversized diagrams keep the census crossing number parsed from the
    name and are flagged non-minimal.
    """

    code: DTCode
    fingerprint: Fingerprint
    crossing_number: int
    minimal: bool = True


class KnotTable:
    """Immutable name -> entry map with a mirror-blind reverse index."""

    def __init__(self, pairs):
        entries: dict[str, TableEntry] = {}
        for name, code in pairs:
            try:
                d = dt_to_diagram(code)
            except NonRealizable as exc:
                raise NonRealizableCode(f"{name}: {exc}") from exc
            fp = fingerprint(d)
            prior = entries.get(name)
            if prior is not None:
                if prior.fingerprint.chirality_insensitive_key() != (
                    fp.chirality_insensitive_key()
                ):
                    raise LedgerConflict(
                        f"{name}: codes disagree on fingerprint"
                    )
                if len(code.entries) >= len(prior.code.entries):
                    continue
            n_code = len(code.entries)
            n_census = _census_crossings(name)
            n = n_census if n_census is not None and n_census < n_code else n_code
            entries[name] = TableEntry(code, fp, n, minimal=n == n_code)
        index: dict[str, set[str]] = {}
        for name, entry in entries.items():
            index.setdefault(
                entry.fingerprint.chirality_insensitive_key(), set()
            ).add(name)
        self.entries = entries
        self.index = {k: frozenset(v) for k, v in index.items()}
        self.collisions = frozenset(
            k for k, names in self.index.items() if len(names) > 1
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def entry(self, name: str) -> TableEntry:
        return self.entries[name]

    def names_for(self, fp: Fingerprint) -> frozenset[str]:
        return self.index.get(fp.chirality_insensitive_key(), frozenset())


def ingest_table(path) -> KnotTable:
    """Read ``name<TAB>dt_code`` lines into a table.

    Blank lines and ``#`` comments are skipped.  A name may repeat with
    alternative codes of the same knot; the shortest code is kept.
    """
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise MalformedLine(f"{path}:{lineno}: want name<TAB>dt_code")
            try:
                code = parse_dt(parts[1])
            except CodecError as exc:
                raise MalformedLine(f"{path}:{lineno}: {exc}") from exc
            pairs.append((parts[0], code))
    return KnotTable(pairs)


# -- identification -------------------------------------------------------

NAME = "name"
UNKNOT = "unknot"
UNRECOGNIZED = "unrecognized"
AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class KnotId:
    """Outcome of an identification attempt.

    ``kind`` is one of NAME, UNKNOT, UNRECOGNIZED, AMBIGUOUS.  A NAME
    carries exactly one name; an AMBIGUOUS collision carries every name
    sharing the fingerprint; UNKNOT always carries the certifying move
    sequence.
    """

    kind: str
    names: tuple[str, ...] = ()
    certificate: tuple = field(default=(), compare=False)
    warning: str | None = field(default=None, compare=False)

    @property
    def name(self) -> str | None:
        return self.names[0] if self.kind == NAME else None


def identify(d: Diagram, table: KnotTable, budget: int = 100_000) -> KnotId:
    """Name the knot of ``d`` or say why it cannot be named.

    The unknot search runs first so that a trivial knot is never
    reported as a table miss; its invariant gate makes the common case
    (nontrivial determinant) cheap.  Verdicts:

    - certificate found: UNKNOT, replayable to the round diagram;
    - search undetermined: UNRECOGNIZED with a warning, since a
      fingerprint this degenerate cannot be trusted to a table row;
    - otherwise the mirror-blind index gives one name (NAME), several
      (AMBIGUOUS), or none (UNRECOGNIZED).
    """
    verdict = detect_unknot(d, budget)
    if isinstance(verdict, Unknot):
        return KnotId(UNKNOT, certificate=verdict.moves)
    if isinstance(verdict, Undetermined):
        return KnotId(
            UNRECOGNIZED,
            warning=f"unknot search undetermined after {verdict.states} states",
        )
    assert isinstance(verdict, NotUnknot)
    names = table.names_for(fingerprint(d))
    if not names:
        return KnotId(UNRECOGNIZED)
    if len(names) > 1:
        return KnotId(AMBIGUOUS, names=tuple(sorted(names)))
    return KnotId(NAME, names=tuple(names))


# -- external facts -------------------------------------------------------


@dataclass(frozen=True)
class Fact:
    """Recorded unknotting-number bounds; ``u_upper`` None means unbounded."""

    u_lower: int
    u_upper: int | None
    citation: str


class FactLedger:
    """Immutable name -> unknotting-number bounds from the literature."""

    def __init__(self, facts: dict[str, Fact]):
        self.facts = dict(facts)

    def __len__(self) -> int:
        return len(self.facts)

    def __contains__(self, name: str) -> bool:
        return name in self.facts

    def get(self, name: str) -> Fact | None:
        return self.facts.get(name)

    def bounds(self, name: str) -> Fact:
        fact = self.facts.get(name)
        if fact is None:
            raise MissingFact(name)
        return fact


def _merge_facts(old: Fact, new: Fact) -> Fact:
    lower = max(old.u_lower, new.u_lower)
    uppers = [u for u in (old.u_upper, new.u_upper) if u is not None]
    upper = min(uppers) if uppers else None
    if upper is not None and upper < lower:
        raise LedgerConflict(f"bounds [{lower},{upper}] are empty")
    citation = old.citation
    if new.citation not in citation.split(","):
        citation = f"{citation},{new.citation}"
    return Fact(lower, upper, citation)


def ingest_facts(path) -> FactLedger:
    """Read ``name<TAB>lower<TAB>upper<TAB>citation`` lines.

    ``-`` in the upper column records a fact with no known upper bound.
    A repeated name intersects its bound intervals; an empty
    intersection is a conflict, not a tighter fact.
    """
    facts: dict[str, Fact] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4 or not parts[0] or not parts[3]:
                raise MalformedLine(
                    f"{path}:{lineno}: want name<TAB>lower<TAB>upper<TAB>citation"
                )
            try:
                lower = int(parts[1])
                upper = None if parts[2] == "-" else int(parts[2])
            except ValueError as exc:
                raise MalformedLine(f"{path}:{lineno}: {exc}") from exc
            if lower < 0:
                raise MalformedLine(f"{path}:{lineno}: negative lower bound")
            if upper is not None and upper < lower:
                raise InvertedBounds(f"{path}:{lineno}: {upper} < {lower}")
            fact = Fact(lower, upper, parts[3])
            if parts[0] in facts:
                try:
                    fact = _merge_facts(facts[parts[0]], fact)
                except LedgerConflict as exc:
                    raise LedgerConflict(f"{path}:{lineno}: {parts[0]}: {exc}")
            facts[parts[0]] = fact
    return FactLedger(facts)

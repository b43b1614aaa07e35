"""Tabulation of reduced alternating knots by exhaustive DT search.

A crossing count k yields one reference diagram per prime alternating
knot: every even pairing of length k is tried, the realizable, reduced,
prime survivors are resolved alternating, and flype orbits collapse to
a single canonical representative.  The Tait flyping theorem makes the
orbit the right dedup unit; polynomial fingerprints are never trusted
to merge classes here.

Crossing-change streams over a reference set drive everything
downstream.  They are generated, not stored: the full stream at k=13
has twenty million members.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .codecs import DTCode, canonical_dt, dt_to_diagram, parse_dt
from .diagram import Diagram
from .errors import (
    InvalidDiagram,
    MalformedLine,
    NonRealizable,
    ResourceLimit,
)
from .invariants import jones
from .moves import flype_orbit

ENUMERATION_CEILING = 10


def jones_span(d: Diagram) -> int:
    p = jones(d)
    return 0 if p.is_zero() else p.span()


def primality_check(d: Diagram) -> bool:
    """True when no pair of edges splits the shadow's crossings.

    A reduced diagram with a separating 2-edge cut is a connected sum
    presentation, so for reduced alternating diagrams this is exactly
    knot primality.
    """
    n = d.n
    if n < 2:
        return True
    adj = d.adj
    edges = [(x, adj[x]) for x in range(4 * n) if x < adj[x]]
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            cut = {edges[i][0], edges[i][1], edges[j][0], edges[j][1]}
            seen = {0}
            stack = [0]
            while stack:
                c = stack.pop()
                for s in range(4):
                    x = 4 * c + s
                    if x in cut:
                        continue
                    nc = adj[x] >> 2
                    if nc not in seen:
                        seen.add(nc)
                        stack.append(nc)
            if len(seen) < n:
                return False
    return True


@dataclass(frozen=True)
class ReferenceSet:
    """Canonical reference codes at one crossing count."""

    k: int
    diagrams: tuple[DTCode, ...]
    provenance: str  # "enumerated" or "ingested"


def _unsigned_canonical(entries) -> tuple[int, ...]:
    return canonical_dt(DTCode(tuple(abs(e) for e in entries))).entries


def shadow_reference_set(codes, provenance="shadow seeds") -> ReferenceSet:
    """Reference set covering the underlying shadows of ``codes``.

    Useful when a full tabulation at k is out of reach but the closure
    over a few known shadows is wanted: each distinct shadow enters
    once, in canonical all-positive form.
    """
    ks = {len(c.entries) for c in codes}
    if len(ks) != 1:
        raise InvalidDiagram(f"mixed crossing counts {sorted(ks)}")
    shadows = {_unsigned_canonical(c.entries) for c in codes}
    return ReferenceSet(
        ks.pop(),
        tuple(DTCode(s) for s in sorted(shadows)),
        provenance,
    )


def enumerate_reference_diagrams(
    k: int, ceiling: int = ENUMERATION_CEILING, orbit_cap: int = 50_000
) -> ReferenceSet:
    """All prime alternating knots at crossing count k, one code each.

    Every shadow in an accepted flype orbit is marked visited, so a
    later pairing from the same orbit is skipped without re-walking it;
    orbit disjointness is asserted rather than assumed.
    """
    if k > ceiling:
        raise ResourceLimit(f"enumeration at k={k} exceeds ceiling {ceiling}")
    seen: set[tuple[int, ...]] = set()
    out: list[DTCode] = []
    for perm in permutations(range(2, 2 * k + 1, 2)):
        if perm in seen:
            continue
        code = DTCode(perm)
        if canonical_dt(code).entries != perm:
            continue
        try:
            d = dt_to_diagram(code)
        except NonRealizable:
            continue
        if not d.is_reduced() or not primality_check(d):
            continue
        orbit_keys = {
            _unsigned_canonical(c.entries) for c in flype_orbit(d, cap=orbit_cap)
        }
        if orbit_keys & seen:
            raise InvalidDiagram(f"flype orbits overlap at k={k}: {perm}")
        seen |= orbit_keys
        if jones_span(d) != k:
            raise InvalidDiagram(f"reference span {jones_span(d)} != {k}: {perm}")
        out.append(code)
    out.sort(key=lambda c: c.entries)
    return ReferenceSet(k, tuple(out), "enumerated")


def crossing_change_closure(refs: ReferenceSet):
    """Stream of every sign assignment fixing each code's first entry.

    2^(k-1) codes per reference diagram, in binary-counter order; the
    all-positive original is the first member of each block.  Fixing
    one sign halves the stream without losing any knot, since the
    all-flipped complement is the mirror and identification downstream
    never separates mirrors.
    """
    k = refs.k
    for code in refs.diagrams:
        base = code.entries
        for mask in range(1 << max(k - 1, 0)):
            entries = list(base)
            m = mask
            i = 1
            while m:
                if m & 1:
                    entries[i] = -entries[i]
                m >>= 1
                i += 1
            yield DTCode(tuple(entries))


def write_reference_set(refs: ReferenceSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"k={refs.k} count={len(refs.diagrams)}\n")
        for code in refs.diagrams:
            fh.write(code.serialize() + "\n")


def read_reference_set(path) -> ReferenceSet:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        try:
            fields = dict(part.split("=") for part in header.split())
            k = int(fields["k"])
            count = int(fields["count"])
        except (ValueError, KeyError) as exc:
            raise MalformedLine(f"{path}:1: bad header {header!r}") from exc
        codes = []
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            code = parse_dt(line)
            if len(code.entries) != k:
                raise MalformedLine(f"{path}:{lineno}: length != k")
            codes.append(code)
    if len(codes) != count:
        raise MalformedLine(f"{path}: header promises {count}, found {len(codes)}")
    return ReferenceSet(k, tuple(codes), "ingested")

"""Text codes for knots and conversions to diagrams.

Dowker-Thistlethwaite codes follow the convention that an entry is
negated exactly when the even-numbered passage through its crossing
goes over, so reduced alternating diagrams get all-positive canonical
codes.  Canonical form minimizes the entry sequence over all 4n
traversals, comparing entries by (magnitude, sign) with positive before
negative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from . import _kernels
from .diagram import Diagram
from .errors import (
    DuplicateMagnitude,
    MalformedText,
    MultiComponentClosure,
    NonRealizable,
    OddEntry,
    ZeroEntry,
)

_DT_TEXT = re.compile(r"^\[\s*(-?\d+\s*(?:,\s*-?\d+\s*)*)?\]$")
_BRAID_TEXT = re.compile(r"^\{\s*(-?\d+\s*(?:,\s*-?\d+\s*)*)?\}$")
_GAUSS_TOKEN = re.compile(r"^([OU])(\d+)([+-])$")


@dataclass(frozen=True)
class DTCode:
    """A signed Dowker-Thistlethwaite sequence, as given (not canonical)."""

    entries: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def serialize(self) -> str:
        return "[" + ",".join(str(e) for e in self.entries) + "]"

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def serialize(self) -> str:
        return "{" + ",".join(str(x) for x in self.letters) + "}"

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class GaussCode:
    """Signed over/under-marked Gauss sequence.

    One triple (label, is_over, sign) per passage; labels run 1..n in
    first-visit order.
    """

    passages: tuple[tuple[int, bool, int], ...]

    def serialize(self) -> str:
        return " ".join(
            f"{'O' if over else 'U'}{label}{'+' if sign > 0 else '-'}"
            for label, over, sign in self.passages
        )

    def __str__(self) -> str:
        return self.serialize()


# -- parsing ----------------------------------------------------------


def parse_dt(text: str) -> DTCode:
    m = _DT_TEXT.match(text.strip())
    if not m:
        raise MalformedText(f"not a DT code: {text!r}")
    body = m.group(1)
    if not body:
        raise MalformedText("DT code needs at least one entry")
    entries = tuple(int(x) for x in body.split(","))
    validate_dt_entries(entries)
    return DTCode(entries)


def validate_dt_entries(entries) -> None:
    n = len(entries)
    for e in entries:
        if e == 0:
            raise ZeroEntry("DT entries must be nonzero")
        if e % 2:
            raise OddEntry(f"DT entries must be even, got {e}")
    mags = sorted(abs(e) for e in entries)
    if mags != list(range(2, 2 * n + 1, 2)):
        raise DuplicateMagnitude(
            f"entry magnitudes must be 2,4,...,{2 * n} without repeats"
        )


def parse_braid(text: str, strands: int) -> BraidWord:
    m = _BRAID_TEXT.match(text.strip())
    if not m:
        raise MalformedText(f"not a braid word: {text!r}")
    body = m.group(1)
    letters = tuple(int(x) for x in body.split(",")) if body else ()
    if strands < 1:
        raise MalformedText("strand count must be positive")
    for x in letters:
        if x == 0 or abs(x) >= strands:
            raise MalformedText(
                f"braid letter {x} out of range for {strands} strands"
            )
    return BraidWord(strands, letters)


def parse_gauss(text: str) -> GaussCode:
    tokens = text.split()
    passages = []
    for tok in tokens:
        m = _GAUSS_TOKEN.match(tok)
        if not m:
            raise MalformedText(f"bad Gauss token {tok!r}")
        passages.append((int(m.group(2)), m.group(1) == "O", 1 if m.group(3) == "+" else -1))
    seen: dict[int, list] = {}
    for label, over, sign in passages:
        seen.setdefault(label, []).append((over, sign))
    if sorted(seen) != list(range(1, len(seen) + 1)):
        raise MalformedText("Gauss labels must be 1..n")
    for label, pair in seen.items():
        if len(pair) != 2:
            raise MalformedText(f"label {label} must appear exactly twice")
        (o1, s1), (o2, s2) = pair
        if o1 == o2:
            raise MalformedText(f"label {label} needs one over and one under pass")
        if s1 != s2:
            raise MalformedText(f"label {label} has conflicting signs")
    return GaussCode(tuple(passages))


# -- DT pairing utilities ----------------------------------------------


def _dt_pairing(entries):
    """0-based visit data for a DT sequence.

    Returns (visits, overs): visits[t] is the crossing passed at time t
    (crossing i owns odd label 2i+1), overs[t] is 1 when that passage
    goes over.
    """
    n = len(entries)
    visits = [0] * (2 * n)
    overs = [0] * (2 * n)
    for i, e in enumerate(entries):
        t_odd = 2 * i
        t_even = abs(e) - 1
        visits[t_odd] = i
        visits[t_even] = i
        if e < 0:
            overs[t_even] = 1
        else:
            overs[t_odd] = 1
    return tuple(visits), tuple(overs)


def canonical_dt(code: DTCode) -> DTCode:
    """Canonical form of a DT sequence, no embedding required."""
    if code.n == 0:
        return code
    visits, overs = _dt_pairing(code.entries)
    return DTCode(_kernels.canonical_code(visits, overs))


def diagram_to_dt(d: Diagram) -> DTCode:
    """Canonical DT code of a diagram."""
    if d.n == 0:
        return DTCode(())
    visits, overs = d.visit_sequence()
    return DTCode(_kernels.canonical_code(visits, overs))


# -- embedding a DT code ------------------------------------------------


def _passage_darts(entries):
    """Per-time slot schedule pieces shared by the embedding routines.

    Time t's passage enters some slot of crossing visits[t] and exits
    the opposite slot.  First passages take the (0, 2) strand; second
    passages take (1, 3), entering at 1 or 3 according to one bit per
    crossing.  Returns (visits, first) where first[t] flags first
    passages.
    """
    n = len(entries)
    visits, _ = _dt_pairing(entries)
    seen = set()
    first = [False] * (2 * n)
    for t, c in enumerate(visits):
        if c not in seen:
            seen.add(c)
            first[t] = True
    return visits, first


def _adjacency_for(visits, first, enter3):
    """Build the adjacency tuple for one choice of second-passage slots.

    enter3[c] == 1 makes the second passage at crossing c enter slot 3
    (exit 1) instead of entering slot 1.
    """
    two_n = len(visits)
    adj = [0] * (2 * two_n)
    enter = [0] * two_n
    for t in range(two_n):
        c = visits[t]
        if first[t]:
            enter[t] = 4 * c
        else:
            enter[t] = 4 * c + (3 if enter3[c] else 1)
    for t in range(two_n):
        a = enter[t] ^ 2  # exit dart of passage t
        b = enter[(t + 1) % two_n]
        adj[a] = b
        adj[b] = a
    return adj


def _interlacement(entries):
    """Chord interlacement graph of the pairing, as adjacency sets."""
    n = len(entries)
    times = {}
    visits, _ = _dt_pairing(entries)
    for t, c in enumerate(visits):
        times.setdefault(c, []).append(t)
    graph = [set() for _ in range(n)]
    for c in range(n):
        a1, a2 = times[c]
        for d in range(c + 1, n):
            b1, b2 = times[d]
            if (a1 < b1 < a2 < b2) or (b1 < a1 < b2 < a2):
                graph[c].add(d)
                graph[d].add(c)
    return graph


def _embed_exhaustive(entries):
    """All planar second-passage slot choices, by brute force.

    Exponential; the oracle against which the propagation realizer is
    checked, and the fallback for tiny codes.
    """
    n = len(entries)
    visits, first = _passage_darts(entries)
    solutions = []
    for bits in product((0, 1), repeat=n):
        adj = _adjacency_for(visits, first, bits)
        if _kernels.face_count(adj) == n + 2:
            solutions.append(bits)
    return solutions


def _overbits_for(entries, first):
    """Over-strand slot parity per crossing implied by the entry signs."""
    n = len(entries)
    over = [0] * n
    for i, e in enumerate(entries):
        t_odd = 2 * i
        t_even = abs(e) - 1
        over_time = t_even if e < 0 else t_odd
        # first passage rides the even-parity strand (slots 0 and 2)
        over[i] = 0 if first[over_time] else 1
    return over


def dt_to_diagram(code: DTCode, realizer: str = "propagation") -> Diagram:
    """Embed a DT code in the plane.

    Raises NonRealizable when no planar embedding exists.  The mirror
    ambiguity inherent to DT codes is resolved arbitrarily but
    deterministically.
    """
    entries = code.entries
    n = len(entries)
    if n == 0:
        return Diagram((), ())
    visits, first = _passage_darts(entries)
    if realizer == "exhaustive":
        sols = _embed_exhaustive(entries)
        if not sols:
            raise NonRealizable(f"no planar embedding for {code}")
        bits = sols[0]
    elif realizer == "propagation":
        bits = _embed_propagation(entries, visits, first)
    else:
        raise ValueError(f"unknown realizer {realizer!r}")
    adj = _adjacency_for(visits, first, bits)
    over = _overbits_for(entries, first)
    return Diagram(adj, over)


def _embed_propagation(entries, visits, first):
    """Fast realizer: propagate pairwise constraints over the
    interlacement graph, then verify planarity by face count.

    The pairwise rule is complete for realizable pairings (solutions
    are exactly the component flips of any one solution), so a single
    propagated assignment plus the Euler check decides realizability.
    """
    n = len(entries)
    times: list[tuple[int, int]] = [()] * n  # type: ignore[list-item]
    tmp: dict[int, tuple] = {}
    for t, c in enumerate(visits):
        tmp[c] = tmp.get(c, ()) + (t,)
    for c in range(n):
        times[c] = tmp[c]
    graph = _interlacement(entries)
    bits: list[int | None] = [None] * n
    for root in range(n):
        if bits[root] is not None:
            continue
        bits[root] = 0
        stack = [root]
        while stack:
            c = stack.pop()
            for d in graph[c]:
                want = bits[c] ^ _pair_flip(times, c, d)
                if bits[d] is None:
                    bits[d] = want
                    stack.append(d)
                elif bits[d] != want:
                    raise NonRealizable(f"inconsistent interlacement for {entries}")
    fixed = [b if b is not None else 0 for b in bits]
    adj = _adjacency_for(visits, first, fixed)
    if _kernels.face_count(adj) != n + 2:
        raise NonRealizable(f"no planar embedding for {entries}")
    return tuple(fixed)


def _pair_flip(times, c, d) -> int:
    """Whether interlacing chords c and d take opposite slot choices.

    With visit times a1 < b1 < a2 < b2 the two chords cut the circle
    into segments (a1,b1), (b1,a2), (a2,b2) and the rest.  The relative
    choice flips with the parity of the chords whose endpoints fall in
    two distinct segments of the first three; exhaustive comparison
    against the brute-force embedder at n <= 7 pins the rule.
    """
    a1, a2 = times[c]
    b1, b2 = times[d]
    if not a1 < b1 < a2 < b2:
        a1, a2, b1, b2 = b1, b2, a1, a2

    def seg(t: int) -> int:
        if a1 < t < b1:
            return 0
        if b1 < t < a2:
            return 1
        if a2 < t < b2:
            return 2
        return 3

    mixed = 0
    for e, (t1, t2) in enumerate(times):
        if e == c or e == d:
            continue
        s1, s2 = seg(t1), seg(t2)
        if s1 != s2 and s1 != 3 and s2 != 3:
            mixed += 1
    return 1 ^ (mixed & 1)


# -- braid closures ------------------------------------------------------

# Slot layout at a braid crossing, strands flowing downward: slot 0 is
# the upper-right corner, 1 upper-left, 2 lower-left, 3 lower-right.
# The left incoming strand rides slots (1, 3), the right one (0, 2).
# A positive letter puts the left incoming strand on top.
_POSITIVE_LETTER_OVER = 1


def braid_permutation(b: BraidWord) -> list[int]:
    perm = list(range(b.strands))
    for x in b.letters:
        i = abs(x) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return perm


def braid_closure_components(b: BraidWord) -> int:
    perm = braid_permutation(b)
    seen = [False] * b.strands
    comps = 0
    for s in range(b.strands):
        if seen[s]:
            continue
        comps += 1
        t = s
        while not seen[t]:
            seen[t] = True
            t = perm[t]
    return comps


def braid_closure_to_diagram(b: BraidWord) -> Diagram:
    """Diagram of the closure of a braid word; knots only."""
    if braid_closure_components(b) != 1:
        raise MultiComponentClosure(
            f"closure of {b} on {b.strands} strands is not a knot"
        )
    n = len(b.letters)
    if n == 0:
        return Diagram((), ())
    adj = [0] * (4 * n)
    front: list[int | None] = [None] * b.strands
    top_dart: list[int | None] = [None] * b.strands
    over = [0] * n

    def weld(a: int, pos: int) -> None:
        if front[pos] is None:
            top_dart[pos] = a
        else:
            adj[front[pos]] = a  # type: ignore[index]
            adj[a] = front[pos]  # type: ignore[assignment]

    for j, x in enumerate(b.letters):
        i = abs(x) - 1
        weld(4 * j + 1, i)
        weld(4 * j + 0, i + 1)
        front[i] = 4 * j + 2
        front[i + 1] = 4 * j + 3
        bit = _POSITIVE_LETTER_OVER if x > 0 else _POSITIVE_LETTER_OVER ^ 1
        over[j] = bit
    for pos in range(b.strands):
        if top_dart[pos] is None:
            continue
        a, f = top_dart[pos], front[pos]
        adj[a], adj[f] = f, a  # type: ignore[index]
    return Diagram(adj, over)


# -- Gauss codes ----------------------------------------------------------


def diagram_to_gauss(d: Diagram) -> GaussCode:
    seq = d.entering_darts()
    signs = d.crossing_signs()
    label = {}
    passages = []
    for e in seq:
        c = e >> 2
        if c not in label:
            label[c] = len(label) + 1
        passages.append((label[c], d.passage_is_over(e), signs[c]))
    return GaussCode(tuple(passages))


def gauss_to_diagram(g: GaussCode) -> Diagram:
    """Rebuild a diagram from a signed Gauss code.

    The signs pin each crossing's local rotation, so the embedding is
    direct; planarity of the result is then verified.
    """
    passages = g.passages
    m = len(passages)
    n = m // 2
    if m == 0:
        return Diagram((), ())
    if m % 2:
        raise MalformedText("odd number of passages")
    counts: dict[int, list[int]] = {}
    for t, (label, _, _) in enumerate(passages):
        counts.setdefault(label, []).append(t)
    if sorted(counts) != list(range(1, n + 1)) or any(
        len(v) != 2 for v in counts.values()
    ):
        raise MalformedText("labels must be 1..n, twice each")
    enter = [0] * m
    over = [0] * n
    for label, ts in counts.items():
        c = label - 1
        t1, t2 = ts
        (o1, s1), (o2, s2) = passages[t1][1:], passages[t2][1:]
        if o1 == o2 or s1 != s2:
            raise MalformedText(f"label {label} has inconsistent marks")
        t_under = t1 if not o1 else t2
        t_over = t2 if not o1 else t1
        # under enters slot 0; a positive crossing has the over strand
        # entering the next counterclockwise slot
        enter[t_under] = 4 * c
        enter[t_over] = 4 * c + (1 if s1 > 0 else 3)
        over[c] = 1
    adj = [0] * (4 * n)
    for t in range(m):
        a = enter[t] ^ 2
        b = enter[(t + 1) % m]
        adj[a] = b
        adj[b] = a
    return Diagram(adj, over)

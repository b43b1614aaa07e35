"""Diagram rewriting: Reidemeister moves, flypes, unknot detection.

All moves are expressed on the dart representation.  A kink is a
monogon face, a cancellable pair is a bigon face whose shared strand
is over (or under) at both ends, and a slide acts on a triangle face
whose over/under pattern is not cyclically dominant.  Each operation
returns a fresh Diagram; move records carry enough data to replay
deterministically.

A flype is parametrized by a distinguished crossing and a tangle: a
connected set of crossings cut off by exactly four edges, two of which
land on the distinguished crossing at rotation-adjacent slots.  The
tangle is reflected in place (slot map s -> -s, over bits flipped) and
the crossing is rebuilt on the far pair of cut edges.  Crossing labels
survive unchanged, which is what makes transport_crossing_change the
identity on indices.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import count

from .codecs import diagram_to_dt
from .diagram import Diagram, rotation_next, rotation_prev
from .errors import InapplicableMove, OrbitCapExceeded
from .invariants import alexander, determinant, jones
from .laurent import LaurentPolynomial

_KINDS = ("R1-", "R1+", "R2-", "R2+", "R3")
_ONE = LaurentPolynomial({0: 1})


@dataclass(frozen=True)
class ReidemeisterMove:
    """A single move.  Site darts refer to the diagram it applies to.

    Sites by kind: R1- holds the monogon dart; R2- the two bigon face
    darts; R3 the three triangle face darts (smallest first); R1+ is
    (edge dart, lobe, over bit); R2+ is (pushed dart, crossed dart,
    over bit).
    """

    kind: str
    site: tuple[int, ...]

    def serialize(self) -> str:
        return self.kind + "@" + ",".join(str(x) for x in self.site)

    @classmethod
    def deserialize(cls, text: str) -> "ReidemeisterMove":
        kind, _, body = text.partition("@")
        if kind not in _KINDS:
            raise InapplicableMove(f"unknown move kind {kind!r}")
        return cls(kind, tuple(int(x) for x in body.split(",")))


@dataclass(frozen=True)
class FlypeMove:
    """Distinguished crossing, tangle crossings, and the two darts of
    the crossing that lead into the tangle (slot-adjacent, in rotation
    order)."""

    crossing: int
    tangle: frozenset[int]
    direction: tuple[int, int]

    def serialize(self) -> str:
        body = ",".join(str(t) for t in sorted(self.tangle))
        return f"{self.crossing}|{body}|{self.direction[0]},{self.direction[1]}"

    @classmethod
    def deserialize(cls, text: str) -> "FlypeMove":
        c, tangle, direction = text.split("|")
        d0, d1 = direction.split(",")
        return cls(
            int(c),
            frozenset(int(t) for t in tangle.split(",")),
            (int(d0), int(d1)),
        )


# -- local pattern predicates -------------------------------------------


def _strand_over(d: Diagram, x: int) -> bool:
    """Whether the strand holding dart x is the over strand there."""
    return (x & 1) == d.over[x >> 2]


def _delete_crossings(d: Diagram, kill) -> Diagram:
    """Remove crossings, letting each strand run straight through them."""
    keep = [c for c in range(d.n) if c not in kill]
    if not keep:
        return Diagram((), ())
    index = {c: i for i, c in enumerate(keep)}

    def relabel(x):
        return 4 * index[x >> 2] + (x & 3)

    adj = [0] * (4 * len(keep))
    for x in range(4 * d.n):
        if (x >> 2) in kill:
            continue
        y = d.adj[x]
        while (y >> 2) in kill:
            y = d.adj[y ^ 2]
        adj[relabel(x)] = relabel(y)
    return Diagram(adj, tuple(d.over[c] for c in keep))


def _wire(adj, a, b):
    adj[a] = b
    adj[b] = a


def _insert_kink(d: Diagram, x: int, lobe: int, bit: int) -> Diagram:
    if not 0 <= x < 4 * d.n:
        raise InapplicableMove(f"no edge at dart {x}")
    if lobe not in (0, 1) or bit not in (0, 1):
        raise InapplicableMove("kink lobe and over bit must be 0 or 1")
    y = d.adj[x]
    k = 4 * d.n
    adj = list(d.adj) + [0, 0, 0, 0]
    _wire(adj, x, k)
    if lobe == 0:
        _wire(adj, k + 2, k + 3)
        _wire(adj, k + 1, y)
    else:
        _wire(adj, k + 2, k + 1)
        _wire(adj, k + 3, y)
    return Diagram(adj, d.over + (bit,))


def _face_orbit(d: Diagram, start: int) -> tuple[int, ...]:
    out = []
    x = start
    while True:
        out.append(x)
        x = rotation_next(d.adj[x])
        if x == start:
            return tuple(out)


def _insert_bigon(d: Diagram, x: int, y: int, bit: int) -> Diagram:
    """Push the edge at dart x across the edge at dart y.

    x and y must lie on a common face; the push runs through it.  Of
    the two ways to thread the new bigon only one is planar, so the
    builder tries the second orientation when the first fails.
    """
    n = d.n
    if not (0 <= x < 4 * n and 0 <= y < 4 * n) or bit not in (0, 1):
        raise InapplicableMove("bad bigon site")
    if y not in _face_orbit(d, x):
        raise InapplicableMove("strands do not bound a common face")
    x2, y2 = d.adj[x], d.adj[y]
    if {x, x2} == {y, y2}:
        raise InapplicableMove("cannot push an edge across itself")
    a, b = 4 * n, 4 * n + 4
    # the crossed strand meets the far insertion first; only its slot
    # chirality at the two new crossings depends on the configuration
    for enter_b, enter_a in ((b + 3, a + 1), (b + 1, a + 3)):
        adj = list(d.adj) + [0] * 8
        _wire(adj, x, a)
        _wire(adj, a + 2, b)
        _wire(adj, b + 2, x2)
        _wire(adj, y, enter_b)
        _wire(adj, enter_b ^ 2, enter_a)
        _wire(adj, enter_a ^ 2, y2)
        try:
            # pushed strand sits on even slots; bit 0 sends it over
            return Diagram(adj, d.over + (bit, bit))
        except Exception:
            continue
    raise InapplicableMove("bigon insertion does not embed")


def _slide_triangle(d: Diagram, site) -> Diagram:
    p0, p1, p2 = site
    p = (p0, p1, p2)
    for i in range(3):
        if not 0 <= p[i] < 4 * d.n:
            raise InapplicableMove("triangle darts out of range")
        if rotation_next(d.adj[p[i]]) != p[(i + 1) % 3]:
            raise InapplicableMove("darts do not bound a triangle face")
    if len({x >> 2 for x in p}) != 3:
        raise InapplicableMove("triangle must touch three distinct crossings")
    a = [d.adj[p[(i - 1) % 3]] for i in range(3)]
    b = list(p)
    side_over = [_strand_over(d, a[(i + 1) % 3]) for i in range(3)]
    if side_over[0] == side_over[1] == side_over[2]:
        # cyclically dominant pattern: the slide is not an isotopy
        raise InapplicableMove("triangle over/under pattern admits no slide")

    # The disk around the three corners is re-glued: the stub formerly
    # at the back of a corner attaches to a neighbouring corner's front,
    # and the triangle face re-forms on the opposite side.
    new_pos = {}
    for i in range(3):
        new_pos[a[i] ^ 2] = b[(i - 1) % 3]
        new_pos[b[i] ^ 2] = a[(i + 1) % 3]
    adj = list(d.adj)
    for u, target in new_pos.items():
        v = d.adj[u]
        _wire(adj, target, new_pos.get(v, v))
    for i in range(3):
        _wire(adj, b[i] ^ 2, a[(i + 1) % 3] ^ 2)
    return Diagram(adj, d.over)


# -- enumeration and application ----------------------------------------


def _rotate_min_first(face):
    k = face.index(min(face))
    return face[k:] + face[:k]


def enumerate_moves(d: Diagram) -> list[ReidemeisterMove]:
    """Applicable moves: all R1-, R2-, R3, and insertions near triangles.

    R1+ and R2+ sites are limited to faces sharing a crossing with some
    triangle face; anything wider makes the unknot search intractable.
    """
    out = []
    monogon_seen = set()
    for q in range(4 * d.n):
        if d.adj[q] == rotation_prev(q) and (q >> 2) not in monogon_seen:
            monogon_seen.add(q >> 2)
            out.append(ReidemeisterMove("R1-", (q,)))
    faces = d.faces()
    for face in faces:
        if len(face) == 2:
            p, q = face
            if (p >> 2) != (q >> 2) and _strand_over(d, p) == _strand_over(
                d, d.adj[p]
            ):
                out.append(ReidemeisterMove("R2-", (min(p, q), max(p, q))))
        elif len(face) == 3:
            if len({x >> 2 for x in face}) != 3:
                continue
            flags = [_strand_over(d, d.adj[x]) for x in face]
            if flags[0] == flags[1] == flags[2]:
                continue
            out.append(ReidemeisterMove("R3", _rotate_min_first(face)))
    tri_crossings = {x >> 2 for f in faces if len(f) == 3 for x in f}
    edges_done = set()
    for face in faces:
        if not any((x >> 2) in tri_crossings for x in face):
            continue
        for x in face:
            e = min(x, d.adj[x])
            if e in edges_done:
                continue
            edges_done.add(e)
            for lobe in (0, 1):
                for bit in (0, 1):
                    out.append(ReidemeisterMove("R1+", (e, lobe, bit)))
        for x in face:
            for y in face:
                if x == y or {x, d.adj[x]} == {y, d.adj[y]}:
                    continue
                for bit in (0, 1):
                    out.append(ReidemeisterMove("R2+", (x, y, bit)))
    return out


def apply_move(d: Diagram, m: ReidemeisterMove) -> Diagram:
    if m.kind == "R1-":
        (q,) = m.site
        if not 0 <= q < 4 * d.n or d.adj[q] != rotation_prev(q):
            raise InapplicableMove(f"no monogon at dart {q}")
        return _delete_crossings(d, {q >> 2})
    if m.kind == "R2-":
        p, q = m.site
        if not (0 <= p < 4 * d.n and 0 <= q < 4 * d.n):
            raise InapplicableMove("bigon darts out of range")
        if rotation_next(d.adj[p]) != q or rotation_next(d.adj[q]) != p:
            raise InapplicableMove("darts do not bound a bigon face")
        if (p >> 2) == (q >> 2):
            raise InapplicableMove("bigon loops through a single crossing")
        if _strand_over(d, p) != _strand_over(d, d.adj[p]):
            raise InapplicableMove("bigon strands interleave; nothing cancels")
        return _delete_crossings(d, {p >> 2, q >> 2})
    if m.kind == "R3":
        return _slide_triangle(d, m.site)
    if m.kind == "R1+":
        x, lobe, bit = m.site
        return _insert_kink(d, x, lobe, bit)
    if m.kind == "R2+":
        x, y, bit = m.site
        return _insert_bigon(d, x, y, bit)
    raise InapplicableMove(f"unknown move kind {m.kind!r}")


def inverse(m: ReidemeisterMove, d: Diagram | None = None) -> ReidemeisterMove:
    """Move undoing m on apply_move(d, m).

    R3 inverts without context: the triangle re-forms on the opposite
    darts.  The insertions need the pre-move diagram to name the fresh
    crossings.  Removals do not invert exactly (the deleted labels are
    gone), so they are refused.
    """
    if m.kind == "R3":
        return ReidemeisterMove(
            "R3", _rotate_min_first(tuple(x ^ 2 for x in m.site))
        )
    if d is None:
        raise InapplicableMove(f"{m.kind} inversion needs the diagram")
    k = 4 * d.n
    if m.kind == "R1+":
        return ReidemeisterMove("R1-", (k + 3 if m.site[1] == 0 else k + 2,))
    if m.kind == "R2+":
        out = apply_move(d, m)
        for probe in (k + 2, k + 4):
            face = _face_orbit(out, probe)
            if len(face) == 2 and min(face) >= k:
                return ReidemeisterMove("R2-", (min(face), max(face)))
        raise InapplicableMove("no fresh bigon after the push")
    raise InapplicableMove(f"{m.kind} does not invert to a move record")


def replay(d: Diagram, moves) -> Diagram:
    for m in moves:
        d = apply_move(d, m)
    return d


# -- unknot detection -----------------------------------------------------


@dataclass(frozen=True)
class Unknot:
    """Certificate: replaying the moves ends at the 0-crossing diagram."""

    moves: tuple[ReidemeisterMove, ...]


@dataclass(frozen=True)
class NotUnknot:
    """Witness: (invariant name, serialized value) differing from the
    unknot's."""

    witness: tuple[str, str]


@dataclass(frozen=True)
class Undetermined:
    states: int


def detect_unknot(d: Diagram, budget: int = 100_000):
    """Decide unknottedness by invariants, then by bounded simplification.

    The search greedily descends through reducing moves and may climb
    by at most two crossings through the insertion moves near triangle
    faces.  Undetermined is returned only with all invariants trivial
    and the state budget exhausted.
    """
    if d.n == 0:
        return Unknot(())
    det = determinant(d)
    if det != 1:
        return NotUnknot(("determinant", str(det)))
    alex = alexander(d)
    if alex != _ONE:
        return NotUnknot(("alexander", alex.serialize()))
    v = jones(d)
    if v != _ONE:
        return NotUnknot(("jones", v.serialize()))

    ceiling = d.n + 2
    tick = count()
    heap = [(d.n, 0, next(tick), d, ())]
    seen = {diagram_to_dt(d).serialize()}
    states = 0
    while heap and states < budget:
        _, depth, _, cur, trail = heapq.heappop(heap)
        states += 1
        for m in enumerate_moves(cur):
            if m.kind == "R1+" and cur.n + 1 > ceiling:
                continue
            if m.kind == "R2+" and cur.n + 2 > ceiling:
                continue
            child = apply_move(cur, m)
            if child.n == 0:
                return Unknot(trail + (m,))
            key = diagram_to_dt(child).serialize()
            if key in seen:
                continue
            seen.add(key)
            heapq.heappush(
                heap, (child.n, depth + 1, next(tick), child, trail + (m,))
            )
    return Undetermined(states)


# -- flypes ----------------------------------------------------------------


def _tangle_connected(d: Diagram, tangle) -> bool:
    first = next(iter(tangle))
    stack, seen = [first], {first}
    while stack:
        c = stack.pop()
        for s in range(4):
            nb = d.adj[4 * c + s] >> 2
            if nb in tangle and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(tangle)


def _flype_check(d: Diagram, f: FlypeMove):
    """Validate f against d; return (u0, u1, p0, p1, q0, q1)."""
    n = d.n
    tangle = f.tangle
    c = f.crossing
    if not 0 <= c < n or c in tangle:
        raise InapplicableMove("distinguished crossing must sit outside the tangle")
    if not tangle or any(not 0 <= t < n for t in tangle):
        raise InapplicableMove("tangle must be a nonempty set of crossings")
    boundary = [
        x
        for x in range(4 * n)
        if (x >> 2) in tangle and (d.adj[x] >> 2) not in tangle
    ]
    if len(boundary) != 4:
        raise InapplicableMove("tangle is not cut off by four edges")
    if not _tangle_connected(d, tangle):
        raise InapplicableMove("tangle is not connected")
    u0, u1 = f.direction
    if (u0 >> 2) != c or u1 != rotation_next(u0):
        raise InapplicableMove("direction darts must be slot-adjacent at the crossing")
    if d.adj[u0 ^ 2] == u1 ^ 2:
        # a reducible crossing: sliding it over the tangle is a kink slide,
        # not a flype, and has no inverse of this form
        raise InapplicableMove("crossing's outer strands loop back together")
    p0, p1 = d.adj[u0], d.adj[u1]
    at_c = sorted(x for x in boundary if (d.adj[x] >> 2) == c)
    if sorted((p0, p1)) != at_c:
        raise InapplicableMove("tangle does not hang on the crossing by two edges")
    q0, q1 = sorted(x for x in boundary if x not in (p0, p1))
    return u0, u1, p0, p1, q0, q1


def enumerate_flypes(d: Diagram) -> list[FlypeMove]:
    """All (crossing, tangle) flype patterns, by exhaustive 4-cut search."""
    n = d.n
    out = []
    if n < 2:
        return out
    adj = d.adj
    for mask in range(1, (1 << n) - 1):
        tangle = frozenset(c for c in range(n) if mask >> c & 1)
        boundary = [
            x
            for x in range(4 * n)
            if (x >> 2) in tangle and (adj[x] >> 2) not in tangle
        ]
        if len(boundary) != 4:
            continue
        partners = {}
        for x in boundary:
            partners.setdefault(adj[x] >> 2, []).append(adj[x])
        connected = None
        for c, darts in partners.items():
            if len(darts) != 2:
                continue
            d0, d1 = darts
            if rotation_next(d0) == d1:
                u0, u1 = d0, d1
            elif rotation_next(d1) == d0:
                u0, u1 = d1, d0
            else:
                continue  # tangle in line with the strand, not beside it
            if adj[u0 ^ 2] == u1 ^ 2:
                continue  # reducible crossing, kink slide rather than flype
            if connected is None:
                connected = _tangle_connected(d, tangle)
            if connected:
                out.append(FlypeMove(c, tangle, (u0, u1)))
    return out


def apply_flype(d: Diagram, f: FlypeMove) -> Diagram:
    """Reflect the tangle and carry the crossing to its far side.

    Crossing indices are preserved: tangle crossings keep their labels
    (slots reflected, over bits flipped) and the distinguished crossing
    is rebuilt, with its over bit chosen to keep its sign.
    """
    u0, u1, p0, p1, q0, q1 = _flype_check(d, f)
    tangle, c, n, adj = f.tangle, f.crossing, d.n, d.adj

    def ref(x):  # reflect tangle slots; identity elsewhere
        return (x & ~3) | (-x & 3) if (x >> 2) in tangle else x

    v0, v1 = u0 ^ 2, u1 ^ 2
    w0, w1 = adj[v0], adj[v1]
    r0, r1 = adj[q0], adj[q1]
    new = [-1] * (4 * n)
    for x in range(4 * n):
        y = adj[x]
        cx, cy = x >> 2, y >> 2
        if cx in tangle:
            if cy in tangle:
                new[ref(x)] = ref(y)
        elif cx != c and cy not in tangle and cy != c:
            new[x] = y
    _wire(new, w0, ref(p0))
    _wire(new, w1, ref(p1))
    base = 4 * c
    signs = d.crossing_signs()
    over = [bit ^ 1 if t in tangle else bit for t, bit in enumerate(d.over)]
    for q1_slot, r1_slot in ((base + 1, base + 3), (base + 3, base + 1)):
        trial = list(new)
        _wire(trial, base, ref(q0))
        _wire(trial, base + 2, r0)
        _wire(trial, q1_slot, ref(q1))
        _wire(trial, r1_slot, r1)
        try:
            cand = Diagram(trial, over)
        except Exception:
            continue
        if cand.crossing_signs()[c] != signs[c]:
            flipped = list(over)
            flipped[c] ^= 1
            cand = Diagram(trial, flipped, validate=False)
        return cand
    raise InapplicableMove("far boundary does not close into a crossing")


def flype_orbit(d: Diagram, cap: int = 10_000):
    """Canonical DT codes of every diagram reachable from d by flypes."""
    start = diagram_to_dt(d)
    seen = {start.serialize(): start}
    frontier = [d]
    while frontier:
        nxt = []
        for cur in frontier:
            for f in enumerate_flypes(cur):
                child = apply_flype(cur, f)
                code = diagram_to_dt(child)
                key = code.serialize()
                if key not in seen:
                    if len(seen) >= cap:
                        raise OrbitCapExceeded(f"flype orbit larger than {cap}")
                    seen[key] = code
                    nxt.append(child)
        frontier = nxt
    return set(seen.values())


def transport_crossing_change(d: Diagram, f: FlypeMove, i: int) -> int:
    """Index of the crossing change matching i across the flype f.

    Because apply_flype keeps crossing labels, the transported index is
    i itself in all three cases: untouched crossings stay put, tangle
    crossings are carried with their labels, and the rebuilt crossing
    absorbs a change of the distinguished one (the opposite flype acts
    on the same tangle here).  The commuting square

        apply_flype(d.change_crossing(i), f)
            == apply_flype(d, f).change_crossing(j)

    holds exactly, not just up to isomorphism.
    """
    _flype_check(d, f)
    if not 0 <= i < d.n:
        raise InapplicableMove(f"crossing index {i} out of range")
    return i

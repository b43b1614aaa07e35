"""Knot diagrams as combinatorial maps.

A diagram with n crossings is stored as a fixed-point-free involution
``adj`` on the 4n darts together with one over/under bit per crossing.
Dart ``4*c + s`` sits at crossing ``c`` in slot ``s``; slots run
counterclockwise, and the two strands through a crossing occupy the
slot pairs (0, 2) and (1, 3).  ``over[c]`` is the slot parity of the
strand that passes over.

This representation makes a crossing change a one-bit flip and leaves
the planar embedding (the rotation system) untouched by it.
"""

from __future__ import annotations

from .errors import InvalidDiagram
from ._kernels import face_count as _face_count


def opposite(dart: int) -> int:
    """Partner dart on the same strand through the crossing."""
    return dart ^ 2


def rotation_next(dart: int) -> int:
    """Next dart counterclockwise around the same crossing."""
    return (dart & ~3) | ((dart + 1) & 3)


def rotation_prev(dart: int) -> int:
    return (dart & ~3) | ((dart - 1) & 3)


class Diagram:
    """Immutable planar diagram of a knot (single closed curve)."""

    __slots__ = ("adj", "over", "_cache")

    def __init__(self, adj, over, validate: bool = True):
        self.adj = tuple(adj)
        self.over = tuple(over)
        self._cache = {}
        if validate:
            self.validate()

    # -- structure checks --------------------------------------------

    @property
    def n(self) -> int:
        return len(self.over)

    def validate(self) -> None:
        adj, n = self.adj, self.n
        if len(adj) != 4 * n:
            raise InvalidDiagram("adjacency length must be 4n")
        if any(b not in (0, 1) for b in self.over):
            raise InvalidDiagram("over bits must be 0 or 1")
        for d, a in enumerate(adj):
            if not 0 <= a < 4 * n or a == d or adj[a] != d:
                raise InvalidDiagram("adj must be a fixed-point-free involution")
        if n == 0:
            return
        seq = self.entering_darts()
        if len(seq) != 2 * n:
            raise InvalidDiagram("traversal does not close after 2n passages")
        visits: dict[int, int] = {}
        for e in seq:
            visits[e >> 2] = visits.get(e >> 2, 0) + 1
        if len(visits) != n or any(v != 2 for v in visits.values()):
            raise InvalidDiagram("each crossing must be passed exactly twice")
        if _face_count(adj) != n + 2:
            raise InvalidDiagram("rotation system is not planar")

    # -- traversal ---------------------------------------------------

    def entering_darts(self, start_dart: int = 0) -> tuple[int, ...]:
        """Darts entered along the traversal that first exits start_dart.

        Passage t enters at ``seq[t]`` and exits at ``seq[t] ^ 2``.
        """
        key = ("trav", start_dart)
        got = self._cache.get(key)
        if got is not None:
            return got
        adj = self.adj
        seq = []
        d = start_dart
        for _ in range(2 * self.n):
            e = adj[d]
            seq.append(e)
            d = e ^ 2
            if d == start_dart:
                break
        out = tuple(seq)
        self._cache[key] = out
        return out

    def visit_sequence(self, start_dart: int = 0):
        """(crossing ids, over bits) along the traversal from start_dart."""
        seq = self.entering_darts(start_dart)
        visits = tuple(e >> 2 for e in seq)
        overs = tuple(1 if self.passage_is_over(e) else 0 for e in seq)
        return visits, overs

    def passage_is_over(self, entering_dart: int) -> bool:
        return (entering_dart & 1) == self.over[entering_dart >> 2]

    def visit_times(self, start_dart: int = 0) -> dict[int, tuple[int, int]]:
        """Crossing id -> its two 0-based passage times."""
        out: dict[int, tuple] = {}
        for t, e in enumerate(self.entering_darts(start_dart)):
            c = e >> 2
            out[c] = out.get(c, ()) + (t,)
        return out  # type: ignore[return-value]

    # -- orientation and signs ----------------------------------------

    def crossing_signs(self) -> tuple[int, ...]:
        """Sign of each crossing; independent of traversal direction."""
        key = "signs"
        got = self._cache.get(key)
        if got is not None:
            return got
        enter_slot = {}
        for e in self.entering_darts():
            enter_slot[e >> 2] = enter_slot.get(e >> 2, ()) + (e & 3,)
        signs = []
        for c in range(self.n):
            s1, s2 = enter_slot[c]
            if (s1 & 1) == self.over[c]:
                o, u = s1, s2
            else:
                o, u = s2, s1
            signs.append(1 if (o - u) % 4 == 1 else -1)
        out = tuple(signs)
        self._cache[key] = out
        return out

    def writhe(self) -> int:
        return sum(self.crossing_signs())

    # -- faces ---------------------------------------------------------

    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Face orbits of the rotation system, as dart tuples."""
        key = "faces"
        got = self._cache.get(key)
        if got is not None:
            return got
        adj = self.adj
        seen = [False] * (4 * self.n)
        out = []
        for start in range(4 * self.n):
            if seen[start]:
                continue
            face = []
            d = start
            while not seen[d]:
                seen[d] = True
                face.append(d)
                d = rotation_next(adj[d])
            out.append(tuple(face))
        result = tuple(out)
        self._cache[key] = result
        return result

    # -- local modifications -------------------------------------------

    def change_crossing(self, i: int) -> "Diagram":
        if not 0 <= i < self.n:
            raise IndexError(f"crossing index {i} out of range")
        over = list(self.over)
        over[i] ^= 1
        return Diagram(self.adj, over, validate=False)

    def change_crossings(self, indices) -> "Diagram":
        over = list(self.over)
        for i in indices:
            if not 0 <= i < self.n:
                raise IndexError(f"crossing index {i} out of range")
            over[i] ^= 1
        return Diagram(self.adj, over, validate=False)

    def mirror(self) -> "Diagram":
        """Diagram of the mirror knot: every crossing changed."""
        return Diagram(self.adj, tuple(b ^ 1 for b in self.over), validate=False)

    # -- predicates ------------------------------------------------------

    def is_alternating(self) -> bool:
        if self.n == 0:
            return True
        seq = self.entering_darts()
        flags = [self.passage_is_over(e) for e in seq]
        return all(flags[t] != flags[t - 1] for t in range(len(flags)))

    def is_reduced(self) -> bool:
        """True when no crossing is nugatory.

        A crossing is nugatory exactly when its chord in the traversal
        interlaces no other chord, i.e. the crossing is a cut vertex of
        the shadow.
        """
        if self.n == 0:
            return True
        times = self.visit_times()
        chords = sorted(times.values())
        for a1, a2 in chords:
            if not any(
                (b1 < a1 < b2 < a2) or (a1 < b1 < a2 < b2) for b1, b2 in chords
            ):
                return False
        return True

    # -- equality ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.adj == other.adj and self.over == other.over

    def __hash__(self) -> int:
        return hash((self.adj, self.over))

    def __repr__(self) -> str:
        return f"Diagram(n={self.n}, adj={self.adj}, over={self.over})"


class Shadow:
    """A diagram with the over/under data forgotten."""

    __slots__ = ("adj",)

    def __init__(self, adj, validate: bool = True):
        self.adj = tuple(adj)
        if validate:
            # borrow the diagram checks with a dummy over assignment
            Diagram(self.adj, (0,) * (len(self.adj) // 4), validate=True)

    @property
    def n(self) -> int:
        return len(self.adj) // 4

    def __eq__(self, other) -> bool:
        if not isinstance(other, Shadow):
            return NotImplemented
        return self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def __repr__(self) -> str:
        return f"Shadow(n={self.n})"


def shadow_of(d: Diagram) -> Shadow:
    return Shadow(d.adj, validate=False)


def alternating_resolution(s: Shadow) -> Diagram:
    """The alternating diagram over a shadow, first passage over.

    Every planar knot shadow admits exactly two alternating over/under
    assignments (mirror images); this picks the one whose first passage
    from dart 0 goes over.
    """
    if s.n == 0:
        return Diagram((), ())
    probe = Diagram(s.adj, (0,) * s.n, validate=False)
    over = [None] * s.n
    for t, e in enumerate(probe.entering_darts()):
        c, slot = e >> 2, e & 3
        want_over = t % 2 == 0
        bit = (slot & 1) if want_over else (slot & 1) ^ 1
        if over[c] is None:
            over[c] = bit
        elif over[c] != bit:
            raise InvalidDiagram("shadow admits no alternating assignment")
    return Diagram(s.adj, over)  # type: ignore[arg-type]


def connected_sum(d1: Diagram, d2: Diagram, dart1: int = 0, dart2: int = 0) -> Diagram:
    """Splice d2 into the edge of d1 at dart1, at d2's edge at dart2."""
    if d2.n == 0:
        return d1
    if d1.n == 0:
        return d2
    shift = 4 * d1.n
    adj = list(d1.adj) + [a + shift for a in d2.adj]
    a1, b1 = dart1, d1.adj[dart1]
    a2, b2 = dart2 + shift, d2.adj[dart2] + shift
    adj[a1], adj[b2] = b2, a1
    adj[a2], adj[b1] = b1, a2
    return Diagram(adj, d1.over + d2.over)

"""Reference implementations of the hot kernels.

Everything here works on flat integer sequences so the compiled twin in
``_ckernels`` can mirror it line for line.  Dart encoding: dart ``d``
lives at crossing ``d // 4``, slot ``d % 4``, slots counterclockwise.
The strand through a crossing occupies opposite slots, so the partner
dart on the same strand is ``d ^ 2``.
"""

from __future__ import annotations

BACKEND = "pure"


def face_count(adj) -> int:
    """Number of faces of the rotation system given by ``adj``.

    ``adj`` is a fixed-point-free involution on 0..4n-1.  The face
    permutation sends a dart to the counterclockwise successor of its
    partner; orbits are faces.
    """
    m = len(adj)
    seen = bytearray(m)
    faces = 0
    for start in range(m):
        if seen[start]:
            continue
        faces += 1
        d = start
        while not seen[d]:
            seen[d] = 1
            a = adj[d]
            d = (a & ~3) | ((a + 1) & 3)
    return faces


def code_from_sequence(visits, overs, shift: int, reverse: bool):
    """Dowker-Thistlethwaite entries for one relabeling of a visit list.

    ``visits[t]`` is the crossing met at time ``t``; ``overs[t]`` is 1
    when that passage goes over.  The relabeling starts the clock at
    ``shift`` and optionally runs the traversal backwards.  Returns a
    list of signed even entries, or None when the odd/even pairing
    breaks (impossible for planar single-curve data, kept as a guard).
    """
    m = len(visits)
    n = m // 2
    pos = [0] * m
    ovr = [0] * m
    if reverse:
        for t in range(m):
            src = (shift - t) % m
            pos[t] = visits[src]
            ovr[t] = overs[src]
    else:
        for t in range(m):
            src = (shift + t) % m
            pos[t] = visits[src]
            ovr[t] = overs[src]
    first_time = {}
    partner = [0] * m
    for t in range(m):
        c = pos[t]
        if c in first_time:
            t0 = first_time[c]
            partner[t0] = t
            partner[t] = t0
        else:
            first_time[c] = t
    if len(first_time) != n:
        return None
    entries = []
    for i in range(n):
        t = 2 * i
        q = partner[t]
        if q % 2 == 0:
            return None
        label = q + 1
        entries.append(-label if ovr[q] else label)
    return entries


def _entry_key(e: int):
    return (e if e > 0 else -e, 1 if e < 0 else 0)


def canonical_code(visits, overs):
    """Lexicographically minimal DT entries over all 4n relabelings.

    Entries compare by (magnitude, sign) with positive preceding
    negative, matching the ordering used for canonical forms.
    """
    m = len(visits)
    if m == 0:
        return ()
    best = None
    best_key = None
    for reverse in (False, True):
        for shift in range(m):
            cand = code_from_sequence(visits, overs, shift, reverse)
            if cand is None:
                continue
            key = [_entry_key(e) for e in cand]
            if best_key is None or key < best_key:
                best_key = key
                best = cand
    if best is None:
        raise ValueError("no relabeling yields a valid odd/even pairing")
    return tuple(best)


def is_canonical_code(visits, overs, entries) -> bool:
    """True when ``entries`` is already the canonical form.

    Early-exits as soon as any relabeling beats the given entries, which
    makes it the workhorse of enumeration.
    """
    m = len(visits)
    ref = [_entry_key(e) for e in entries]
    for reverse in (False, True):
        for shift in range(m):
            cand = code_from_sequence(visits, overs, shift, reverse)
            if cand is None:
                continue
            key = [_entry_key(e) for e in cand]
            if key < ref:
                return False
    return True


def bracket_statesum(adj, over, a_joins_flag) -> dict:
    """Kauffman bracket by brute force over all 2^n smoothing states.

    ``a_joins_flag[c]`` tells which local reconnection the A-smoothing
    performs at crossing c: flag 1 joins slots (0,1) and (2,3), flag 0
    joins (0,3) and (1,2).  Returns {A-exponent: coefficient} for the
    bracket normalized to 1 on the round unknot.  Exponential in n;
    used as an oracle and for benchmarking, not on the production path.
    """
    m = len(adj)
    n = m // 4
    if n == 0:
        return {0: 1}
    counts: dict = {}
    for state in range(1 << n):
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        exp = 0
        for c in range(n):
            a_side = (state >> c) & 1
            exp += 1 if a_side else -1
            if a_side == a_joins_flag[c]:
                union(4 * c + 0, 4 * c + 1)
                union(4 * c + 2, 4 * c + 3)
            else:
                union(4 * c + 0, 4 * c + 3)
                union(4 * c + 1, 4 * c + 2)
        for d in range(m):
            union(d, adj[d])
        loops = len({find(d) for d in range(m)})
        # delta^(loops-1) with delta = -A^2 - A^-2, expanded right here
        # so the kernel needs no polynomial type.
        for k in range(loops):
            coeff = _binom(loops - 1, k) * (-1) ** (loops - 1)
            e = exp + 2 * (loops - 1 - k) - 2 * k
            counts[e] = counts.get(e, 0) + coeff
    return {e: c for e, c in counts.items() if c}


def _binom(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out

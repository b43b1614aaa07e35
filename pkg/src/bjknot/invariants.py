"""Exact polynomial and quadratic-form invariants of knot diagrams.

Conventions are pinned by fixtures rather than folklore: the closure of
the two-strand braid {1,1,1} (all crossing signs +1) has Jones
polynomial -t^-4 + t^-3 + t^-1 and signature -2, and every invariant
here is unchanged by the move engine.  Mirroring a diagram negates the
signature and sends the Jones polynomial to its reciprocal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .diagram import Diagram
from .errors import InvalidDiagram
from .laurent import LaurentPolynomial

_DELTA = LaurentPolynomial({2: -1, -2: -1})  # loop value -A^2 - A^-2


# -- Kauffman bracket ----------------------------------------------------


def _a_joins_flag(d: Diagram, c: int) -> int:
    """1 when the A-smoothing at c joins slots (0,1) and (2,3)."""
    return d.over[c] ^ 1


def kauffman_bracket_states(d: Diagram) -> LaurentPolynomial:
    """Bracket by full state expansion; exponential, oracle use only."""
    flags = [_a_joins_flag(d, c) for c in range(d.n)]
    counts = _kernels.bracket_statesum(d.adj, d.over, flags)
    return LaurentPolynomial(counts)


def kauffman_bracket(d: Diagram) -> LaurentPolynomial:
    """Bracket polynomial in A, round unknot normalized to 1.

    Contracts the diagram one crossing at a time, carrying a weighted
    sum over boundary matchings of the built region.  The frontier
    stays narrow under a greedy adjacency order, so the matching count
    never explodes at the sizes this package works with.
    """
    n = d.n
    if n == 0:
        return LaurentPolynomial.one()
    adj = d.adj
    order = _contraction_order(d)
    states: dict[tuple, LaurentPolynomial] = {(): LaurentPolynomial.one()}
    open_set: set[int] = set()
    for c in order:
        flag = _a_joins_flag(d, c)
        darts = (4 * c, 4 * c + 1, 4 * c + 2, 4 * c + 3)
        glue = [
            x
            for x in darts
            if adj[x] in open_set or (adj[x] >> 2 == c and adj[x] > x)
        ]
        new_states: dict[tuple, LaurentPolynomial] = {}
        for matching, coeff in states.items():
            partner = {}
            for a, b in matching:
                partner[a] = b
                partner[b] = a
            for a_side in (1, 0):
                if (a_side == 1) == (flag == 1):
                    arcs = ((darts[0], darts[1]), (darts[2], darts[3]))
                else:
                    arcs = ((darts[0], darts[3]), (darts[1], darts[2]))
                p2 = dict(partner)
                for x, y in arcs:
                    p2[x] = y
                    p2[y] = x
                weight = coeff.scale(1, 1 if a_side else -1)
                loops = 0
                for x in glue:
                    y = adj[x]
                    px = p2.pop(x)
                    py = p2.pop(y)
                    if px == y:
                        loops += 1
                    else:
                        p2[px] = py
                        p2[py] = px
                for _ in range(loops):
                    weight = weight * _DELTA
                key = tuple(sorted((a, b) for a, b in p2.items() if a < b))
                acc = new_states.get(key)
                new_states[key] = weight if acc is None else acc + weight
        states = {k: v for k, v in new_states.items() if not v.is_zero()}
        open_set.update(darts)
        for x in glue:
            open_set.discard(x)
            open_set.discard(adj[x])
    total = LaurentPolynomial.zero()
    for key, coeff in states.items():
        if key:
            raise InvalidDiagram("contraction left open strands")
        total = total + coeff
    return total.divexact(_DELTA)


def _contraction_order(d: Diagram) -> list[int]:
    """Greedy order keeping the open boundary short."""
    n = d.n
    adj = d.adj
    placed = [False] * n
    order = []
    current = 0
    for _ in range(n):
        placed[current] = True
        order.append(current)
        best = None
        best_score = (-1, 0)
        for c in range(n):
            if placed[c]:
                continue
            score = sum(1 for s in range(4) if placed[adj[4 * c + s] >> 2])
            if (score, -c) > best_score:
                best_score = (score, -c)
                best = c
        if best is None:
            break
        current = best
    return order


def writhe(d: Diagram) -> int:
    return d.writhe()


def jones(d: Diagram) -> LaurentPolynomial:
    """Jones polynomial in t, via the bracket and the writhe."""
    bracket = kauffman_bracket(d)
    w = d.writhe()
    f = bracket.scale(-1 if w % 2 else 1, -3 * w)
    out = {}
    for e, c in f.terms:
        if e % 4:
            raise InvalidDiagram("bracket exponents not divisible by 4")
        out[e // 4] = c
    return LaurentPolynomial(out)


def jones_span(d: Diagram) -> int:
    return jones(d).span()


# -- Goeritz form and signature ------------------------------------------


def _face_ids(d: Diagram):
    faces = d.faces()
    fid = [0] * (4 * d.n)
    for i, face in enumerate(faces):
        for dart in face:
            fid[dart] = i
    return faces, fid


def checkerboard_coloring(d: Diagram) -> list[int]:
    """0/1 per face, adjacent faces opposite; the face of dart 0 gets 0.

    The face across the edge carrying dart x is the orbit of adj[x].
    """
    faces, fid = _face_ids(d)
    color: list[int | None] = [None] * len(faces)
    color[fid[0]] = 0
    stack = [fid[0]]
    while stack:
        f = stack.pop()
        for dart in faces[f]:
            g = fid[d.adj[dart]]
            want = color[f] ^ 1  # type: ignore[operator]
            if color[g] is None:
                color[g] = want
                stack.append(g)
            elif color[g] != want:
                raise InvalidDiagram("no checkerboard coloring")
    return color  # type: ignore[return-value]


@dataclass(frozen=True)
class GoeritzData:
    """Reduced Goeritz matrix and the signature correction count."""

    matrix: tuple[tuple[int, ...], ...]
    correction: int
    white_faces: tuple[int, ...]


def goeritz_data(d: Diagram) -> GoeritzData:
    """Quadratic form of the white checkerboard surface, plus correction.

    Each crossing meets two opposite white corners and carries a sign:
    +1 when the over strand's slot parity differs from the white corner
    parity.  Crossings whose two entering directions wind the same way
    around the white axis are counted, with sign, into ``correction``;
    the signature of the knot is the form's signature minus that count.
    Both rules are fixed by the kink and torus fixtures in the tests.
    """
    if d.n == 0:
        return GoeritzData((), 0, (0,))
    faces, fid = _face_ids(d)
    color = checkerboard_coloring(d)
    white = [i for i, col in enumerate(color) if col == 0]
    windex = {f: k for k, f in enumerate(white)}
    m = len(white)
    G = [[0] * m for _ in range(m)]
    correction = 0
    enter_slot: dict[int, tuple] = {}
    for e in d.entering_darts():
        enter_slot[e >> 2] = enter_slot.get(e >> 2, ()) + (e & 3,)
    for c in range(d.n):
        corner = [fid[4 * c + s] for s in range(4)]
        white_parity = 0 if color[corner[0]] == 0 else 1
        eta = 1 if (white_parity ^ d.over[c]) else -1
        i = windex[corner[white_parity]]
        j = windex[corner[white_parity + 2]]
        if i != j:
            # a crossing between one white region and itself drops out
            G[i][j] -= eta
            G[j][i] -= eta
            G[i][i] += eta
            G[j][j] += eta
        s1, s2 = enter_slot[c]
        if s1 & 1:
            s1, s2 = s2, s1
        if ((s2 - s1) % 4 == 1) ^ white_parity:
            correction += eta
    reduced = tuple(tuple(row[1:]) for row in G[1:])
    return GoeritzData(reduced, correction, tuple(white))


def _symmetric_signature(M) -> int:
    """Signature of a symmetric integer matrix, exact over rationals."""
    k = len(M)
    m = [[Fraction(M[i][j]) for j in range(k)] for i in range(k)]
    sig = 0
    active = list(range(k))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = None
            for i in active:
                for j in active:
                    if i != j and m[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            for r in range(k):
                m[r][i] += m[r][j]
            for r in range(k):
                m[i][r] += m[j][r]
            piv = i
        p = m[piv][piv]
        sig += 1 if p > 0 else -1
        active.remove(piv)
        # the pivot row must stay intact until every row is reduced
        for i in active:
            f = m[i][piv] / p
            if f:
                for j in active:
                    m[i][j] -= f * m[piv][j]
    return sig


def signature(d: Diagram) -> int:
    data = goeritz_data(d)
    return _symmetric_signature(data.matrix) - data.correction


def determinant(d: Diagram) -> int:
    """|det| of the reduced Goeritz matrix; equals |Alexander at -1|."""
    data = goeritz_data(d)
    return abs(_int_det(data.matrix))


def _int_det(M) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    k = len(M)
    if k == 0:
        return 1
    m = [list(row) for row in M]
    prev = 1
    sign = 1
    for col in range(k - 1):
        piv = next((r for r in range(col, k) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for r in range(col + 1, k):
            for c2 in range(col + 1, k):
                m[r][c2] = (m[r][c2] * m[col][col] - m[r][col] * m[col][c2]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return sign * m[k - 1][k - 1]


# -- Alexander polynomial ------------------------------------------------


def _arc_relations(d: Diagram):
    """Wirtinger data per crossing: (under_in, over, under_out, sign)."""
    seq = d.entering_darts()
    signs = d.crossing_signs()
    arc_at = [0] * len(seq)
    cur = 0
    for t, e in enumerate(seq):
        arc_at[t] = cur
        if not d.passage_is_over(e):
            cur += 1
    n_arcs = cur
    # passages after the last under-crossing sit on the wrapped first arc
    arc_at = [a % n_arcs for a in arc_at]
    times: dict[int, list[int]] = {}
    for t, e in enumerate(seq):
        times.setdefault(e >> 2, []).append(t)
    rels = []
    for c in range(d.n):
        t1, t2 = times[c]
        t_over, t_under = (t1, t2) if d.passage_is_over(seq[t1]) else (t2, t1)
        a_in = arc_at[t_under]
        rels.append((a_in, arc_at[t_over], (a_in + 1) % n_arcs, signs[c]))
    return rels, n_arcs


def alexander(d: Diagram) -> LaurentPolynomial:
    """Alexander polynomial, symmetric with positive leading term.

    One generator and one relation of the Wirtinger presentation are
    dropped; the determinant is taken by integer evaluation at enough
    points followed by exact interpolation.
    """
    n = d.n
    if n == 0:
        return LaurentPolynomial.one()
    rels, n_arcs = _arc_relations(d)
    if n_arcs != n:
        raise InvalidDiagram("arc count must equal crossing count")
    size = n - 1
    if size == 0:
        return LaurentPolynomial.one()

    # relation: t^eps * a_in + (1 - t^eps) * over - a_out = 0, with rows
    # of negative sign scaled by t (a unit) to clear negative powers
    def fill(M, rel, tval):
        a_in, over_arc, a_out, eps = rel
        if eps > 0:
            pairs = ((a_in, tval), (over_arc, 1 - tval), (a_out, -1))
        else:
            pairs = ((a_in, 1), (over_arc, tval - 1), (a_out, -tval))
        row = M[-1]
        for arc, val in pairs:
            if arc < size:
                row[arc] += val

    points = list(range(2, size + 4))
    values = []
    for tval in points:
        M: list[list[int]] = []
        for rel in rels[:size]:
            M.append([0] * size)
            fill(M, rel, tval)
        values.append(_int_det(M))
    poly = _interpolate(points, values)
    return _normalize_alexander(poly)


def _interpolate(xs, ys) -> LaurentPolynomial:
    """Exact Lagrange interpolation; coefficients must be integers."""
    k = len(xs)
    coeffs = [Fraction(0)] * k
    for i in range(k):
        denom = 1
        for j in range(k):
            if j != i:
                denom *= xs[i] - xs[j]
        basis = [Fraction(1)]
        for j in range(k):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for p, cf in enumerate(basis):
                nxt[p + 1] += cf
                nxt[p] -= cf * xs[j]
            basis = nxt
        scale = Fraction(ys[i], denom)
        for p, cf in enumerate(basis):
            coeffs[p] += cf * scale
    out = {}
    for p, cf in enumerate(coeffs):
        if cf:
            if cf.denominator != 1:
                raise InvalidDiagram("determinant interpolation not integral")
            out[p] = int(cf)
    return LaurentPolynomial(out)


def _normalize_alexander(poly: LaurentPolynomial) -> LaurentPolynomial:
    if poly.is_zero():
        raise InvalidDiagram("vanishing Alexander determinant for a knot")
    poly = poly.scale(1, -poly.min_exponent())
    m = poly.max_exponent()
    coeffs = dict(poly.terms)
    if any(coeffs.get(e, 0) != coeffs.get(m - e, 0) for e in range(m + 1)):
        raise InvalidDiagram("Alexander determinant is not palindromic")
    if m % 2:
        raise InvalidDiagram("Alexander span must be even for a knot")
    poly = poly.scale(1, -(m // 2))
    if poly.terms[-1][1] < 0:
        poly = -poly
    if abs(poly.evaluate(1)) != 1:
        raise InvalidDiagram("Alexander value at 1 must be a unit")
    return poly


# -- fingerprints ---------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    """The invariant tuple used for identification."""

    determinant: int
    signature: int
    jones: LaurentPolynomial
    alexander: LaurentPolynomial

    def mirror(self) -> "Fingerprint":
        return Fingerprint(
            self.determinant,
            -self.signature,
            self.jones.substitute_reciprocal(),
            self.alexander,
        )

    def serialize(self) -> str:
        return (
            f"det={self.determinant};sig={self.signature};"
            f"jones={self.jones.serialize()};alex={self.alexander.serialize()}"
        )

    @classmethod
    def deserialize(cls, text: str) -> "Fingerprint":
        fields = dict(part.split("=", 1) for part in text.split(";"))
        return cls(
            int(fields["det"]),
            int(fields["sig"]),
            LaurentPolynomial.deserialize(fields["jones"]),
            LaurentPolynomial.deserialize(fields["alex"]),
        )

    def chirality_insensitive_key(self) -> str:
        a, b = self.serialize(), self.mirror().serialize()
        return a if a <= b else b

    def is_trivial(self) -> bool:
        return (
            self.determinant == 1
            and self.jones == LaurentPolynomial.one()
            and self.alexander == LaurentPolynomial.one()
        )


def fingerprint(d: Diagram) -> Fingerprint:
    return Fingerprint(determinant(d), signature(d), jones(d), alexander(d))

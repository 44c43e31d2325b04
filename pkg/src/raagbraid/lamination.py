"""Integral lamination coordinates on the m-punctured disk.

Punctures are numbered 1..m from left to right.  The reference arcs are

* ``up(j)`` / ``down(j)``: the vertical rays from puncture j to the boundary,
* ``mid(j)``: the vertical line between punctures j and j+1 (1 <= j < m).

For a multicurve in minimal position, write ``beta[j]`` for its intersection
with ``mid(j)`` and ``up[j]``, ``down[j]`` for the rays.  The coordinates are

    a_i = (down[i+1] - up[i+1]) / 2,    b_i = (beta[i] - beta[i+1]) / 2,

for i = 1..m-2.  They are integers, the zero vector is the empty multicurve,
and a disjoint union has the coordinate sum of its parts.  A curve around a
single puncture or around all of them is invisible (it is peripheral).

Action of the half twist ``sigma_k`` (punctures k, k+1 exchanged
counterclockwise); x+ = max(x, 0), x- = min(x, 0), primes are new values.

k = 1 (touches a_1, b_1)::

    b' = -a + b+                a' = b - b'+

k = m - 1 (touches a_{m-2}, b_{m-2})::

    b' = -a + b-                a' = b - b'-

1 < k < m - 1 (touches a_{k-1}, a_k, b_{k-1}, b_k; written a1, a2, b1, b2)::

    c    = a1 - b1- - a2 + b2+
    a1'  = a1 + b1+ + (b2+ - c)+
    a2'  = a2 + b2- + (b1- + c)-
    b1'  = b2 - c+
    b2'  = b1 + c+

and the inverse ``sigma_k^-1``::

    k = 1:       b' = a + b+               a' = -b + b'+
    k = m - 1:   b' = a + b-               a' = -b + b'-
    otherwise:   d    = a1 + b1- - a2 - b2+
                 a1'  = a1 - b1+ - (b2+ + d)+
                 a2'  = a2 - b2- - (b1- - d)-
                 b1'  = b2 + d-
                 b2'  = b1 - d-

Every quantity is an exact Python integer.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .polygons import (PunctureHit, SelfIntersection, _candidate_pairs, _clearly_disjoint,
                       _edges, _float_edges, _on_segment, _tolerance, check_simple,
                       segments_intersect)


class LaminationError(ValueError):
    pass


class HomotopicComponents(LaminationError):
    pass


class BudgetExhausted(LaminationError):
    def __init__(self, msg, best_norm=None, steps=0):
        super().__init__(msg)
        self.best_norm = best_norm
        self.steps = steps


class NotASingleCurve(LaminationError):
    pass


@dataclass(frozen=True)
class RoundSpec:
    """Convex curve around the consecutive punctures p..q."""
    p: int
    q: int

    def __post_init__(self):
        if not 1 <= self.p < self.q:
            raise LaminationError(f"bad interval ({self.p}, {self.q})")

    def nested_or_disjoint(self, other: "RoundSpec") -> bool:
        if self.q < other.p or other.q < self.p:
            return True
        return (self.p <= other.p and other.q <= self.q) or \
               (other.p <= self.p and self.q <= other.q)


@dataclass(frozen=True)
class LamCoords:
    m: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if self.m < 3:
            raise LaminationError("need at least 3 punctures")
        a, b = tuple(int(x) for x in self.a), tuple(int(x) for x in self.b)
        if len(a) != self.m - 2 or len(b) != self.m - 2:
            raise LaminationError("coordinate vectors must have length m - 2")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zero(cls, m: int) -> "LamCoords":
        return cls(m, (0,) * (m - 2), (0,) * (m - 2))

    def __add__(self, other: "LamCoords") -> "LamCoords":
        if self.m != other.m:
            raise LaminationError("puncture counts differ")
        return LamCoords(self.m, tuple(x + y for x, y in zip(self.a, other.a)),
                         tuple(x + y for x, y in zip(self.b, other.b)))

    def is_zero(self) -> bool:
        return not any(self.a) and not any(self.b)

    def dump(self) -> str:
        return " ".join(str(x) for x in (self.m, *self.a, *self.b))

    @classmethod
    def parse(cls, text: str) -> "LamCoords":
        vals = [int(t) for t in text.split()]
        if not vals:
            raise LaminationError("empty coordinate dump")
        m = vals[0]
        if len(vals) != 1 + 2 * (m - 2):
            raise LaminationError(f"expected {2 * (m - 2)} coordinates after m={m}")
        return cls(m, tuple(vals[1:m - 1]), tuple(vals[m - 1:]))


# ----------------------------------------------------------------------
# generator action
# ----------------------------------------------------------------------

def _act(a: list, b: list, m: int, k: int, sign: int) -> None:
    """Apply sigma_k**sign to coordinate lists in place."""
    if k == 1 or k == m - 1:
        i = 0 if k == 1 else m - 3
        x, y = a[i], b[i]
        if k == 1:
            if sign < 0:
                nb = x + (y if y > 0 else 0)
                a[i] = -y + (nb if nb > 0 else 0)
            else:
                nb = -x + (y if y > 0 else 0)
                a[i] = y - (nb if nb > 0 else 0)
        else:
            if sign < 0:
                nb = x + (y if y < 0 else 0)
                a[i] = -y + (nb if nb < 0 else 0)
            else:
                nb = -x + (y if y < 0 else 0)
                a[i] = y - (nb if nb < 0 else 0)
        b[i] = nb
        return
    i = k - 2
    a1, a2, b1, b2 = a[i], a[i + 1], b[i], b[i + 1]
    b1p = b1 if b1 > 0 else 0
    b1n = b1 if b1 < 0 else 0
    b2p = b2 if b2 > 0 else 0
    b2n = b2 if b2 < 0 else 0
    if sign > 0:
        c = a1 - b1n - a2 + b2p
        cp = c if c > 0 else 0
        t = b2p - c
        a[i] = a1 + b1p + (t if t > 0 else 0)
        t = b1n + c
        a[i + 1] = a2 + b2n + (t if t < 0 else 0)
        b[i] = b2 - cp
        b[i + 1] = b1 + cp
    else:
        d = a1 + b1n - a2 - b2p
        dn = d if d < 0 else 0
        t = b2p + d
        a[i] = a1 - b1p - (t if t > 0 else 0)
        t = b1n - d
        a[i + 1] = a2 - b2n - (t if t < 0 else 0)
        b[i] = b2 + dn
        b[i + 1] = b1 - dn


def _check_index(m: int, k: int):
    if not 1 <= k <= m - 1:
        raise LaminationError(f"generator index {k} out of range for m={m}")


def sigma_action(c: LamCoords, k: int, sign: int) -> LamCoords:
    """Image of ``c`` under the half twist sigma_k**sign."""
    _check_index(c.m, k)
    a, b = list(c.a), list(c.b)
    _act(a, b, c.m, k, 1 if sign > 0 else -1)
    return LamCoords(c.m, tuple(a), tuple(b))


def act_letters(c: LamCoords, letters) -> LamCoords:
    """Apply (index, sign) letters left to right: the first letter acts first."""
    a, b, m = list(c.a), list(c.b), c.m
    for k, s in letters:
        _check_index(m, k)
        _act(a, b, m, k, s)
    return LamCoords(m, tuple(a), tuple(b))


def norm(c: LamCoords) -> int:
    return sum(abs(x) for x in c.a) + sum(abs(x) for x in c.b)


# ----------------------------------------------------------------------
# intersection numbers and round curves
# ----------------------------------------------------------------------

def crossings(c: LamCoords) -> tuple[list[int], list[int], list[int]]:
    """Minimal intersections ``(up, down, beta)`` with the reference arcs.

    ``up`` and ``down`` are indexed by puncture 1..m (index 0 unused), ``beta``
    by mid-line 1..m-1 (index 0 unused).
    """
    m, a, b = c.m, c.a, c.b
    width = 0
    partial = 0
    for i in range(m - 2):
        width = max(width, abs(a[i]) + max(b[i], 0) + partial)
        partial += b[i]
    beta = [0] * m
    beta[1] = 2 * width
    for i in range(1, m - 1):
        beta[i + 1] = beta[i] - 2 * b[i - 1]
    up = [0] * (m + 1)
    down = [0] * (m + 1)
    up[1] = down[1] = beta[1] // 2
    up[m] = down[m] = beta[m - 1] // 2
    for i in range(1, m - 1):
        loops = abs(b[i - 1])
        through = beta[i] - 2 * max(b[i - 1], 0)
        up[i + 1] = loops + (through - 2 * a[i - 1]) // 2
        down[i + 1] = loops + (through + 2 * a[i - 1]) // 2
    return up, down, beta


def total_crossings(c: LamCoords) -> int:
    up, down, beta = crossings(c)
    return sum(up) + sum(down) + sum(beta)


def round_coords(m: int, r: RoundSpec) -> LamCoords:
    if r.q > m:
        raise LaminationError(f"interval ({r.p}, {r.q}) exceeds m={m}")
    b = [0] * (m - 2)
    if r.p >= 2:
        b[r.p - 2] -= 1
    if r.q <= m - 1:
        b[r.q - 2] += 1
    return LamCoords(m, (0,) * (m - 2), tuple(b))


def multi_round_coords(m: int, specs) -> LamCoords:
    specs = list(specs)
    for r, s in itertools.combinations(specs, 2):
        if r == s or not r.nested_or_disjoint(s):
            raise LaminationError(f"intervals {r} and {s} overlap")
    total = LamCoords.zero(m)
    for r in specs:
        total = total + round_coords(m, r)
    return total


def standard_family(m: int) -> list[RoundSpec]:
    """The nested curves (1, k), k = 2..m-1."""
    return [RoundSpec(1, k) for k in range(2, m)]


def standard_coords(m: int) -> LamCoords:
    return multi_round_coords(m, standard_family(m))


def as_round(c: LamCoords) -> RoundSpec | None:
    """The interval whose round curve has coordinates ``c``, if any."""
    if any(c.a):
        return None
    neg = [i for i, x in enumerate(c.b) if x]
    if not neg or len(neg) > 2:
        return None
    vals = [c.b[i] for i in neg]
    m = c.m
    if len(neg) == 1:
        i, v = neg[0], vals[0]
        if v == 1:
            return RoundSpec(1, i + 2)
        if v == -1:
            return RoundSpec(i + 2, m)
        return None
    (i, j), (u, v) = neg, vals
    if u == -1 and v == 1:
        return RoundSpec(i + 2, j + 2)
    return None


# ----------------------------------------------------------------------
# tracing polygonal curves
# ----------------------------------------------------------------------

def _crossing_word(poly, punctures, lines):
    """Cyclic sequence of signed reference-arc crossings of one polygon.

    A line at abscissa c is treated as sitting at c + epsilon, so vertices
    on it count as lying to its left.
    """
    word = []
    xs = [c for c, _ in lines]
    for p, q in _edges(poly):
        if p[0] == q[0]:
            continue
        lo, hi = (p[0], q[0]) if p[0] < q[0] else (q[0], p[0])
        # lines strictly crossed: lo <= c < hi
        hits = [t for t in range(len(xs)) if lo <= xs[t] < hi]
        if p[0] > q[0]:
            hits.reverse()
        direction = 1 if q[0] > p[0] else -1
        slope = (q[1] - p[1]) / (q[0] - p[0])
        for t in hits:
            c, kind = lines[t]
            if kind[0] == "mid":
                arc = kind
            else:
                j = kind[1]
                yc = p[1] + (c - p[0]) * slope
                py = punctures[j - 1][1]
                if yc == py:
                    raise PunctureHit(f"curve passes through puncture {j}")
                arc = ("up" if yc > py else "down", j)
            word.append((arc, direction))
    return word


def _cyclic_reduce(word):
    stack = []
    for arc, s in word:
        if stack and stack[-1][0] == arc and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((arc, s))
    dq = deque(stack)
    while len(dq) >= 2 and dq[0][0] == dq[-1][0] and dq[0][1] == -dq[-1][1]:
        dq.popleft()
        dq.pop()
    return list(dq)


def _reference_lines(punctures):
    lines = []
    for j, (x, _) in enumerate(punctures, start=1):
        lines.append((x, ("punct", j)))
        if j < len(punctures):
            lines.append(((x + punctures[j][0]) / 2, ("mid", j)))
    return lines


def trace_components(curves, punctures) -> list[LamCoords | None]:
    """Coordinates of each polygon separately (None for inessential ones)."""
    m = len(punctures)
    if m < 3:
        raise LaminationError("need at least three punctures")
    punctures = [(Fraction(x), Fraction(y)) for x, y in punctures]
    if any(punctures[i][0] >= punctures[i + 1][0] for i in range(m - 1)):
        raise LaminationError("punctures must have strictly increasing x-coordinates")
    curves = [[(Fraction(x), Fraction(y)) for x, y in poly] for poly in curves]
    for poly in curves:
        check_simple(poly)
        for p, q in _edges(poly):
            for j, pt in enumerate(punctures, start=1):
                if (min(p[0], q[0]) <= pt[0] <= max(p[0], q[0])
                        and _on_segment(p, q, pt)):
                    raise PunctureHit(f"curve passes through puncture {j}")
    for c1, c2 in itertools.combinations(curves, 2):
        e1, e2 = _edges(c1), _edges(c2)
        f1, f2 = _float_edges(e1), _float_edges(e2)
        tol = _tolerance(f1 + f2)
        for i, j in _candidate_pairs(f1, f2):
            if not _clearly_disjoint(*f1[i], *f2[j], tol) and segments_intersect(*e1[i], *e2[j]):
                raise SelfIntersection("components intersect")
    lines = _reference_lines(punctures)
    out = []
    for poly in curves:
        word = _cyclic_reduce(_crossing_word(poly, punctures, lines))
        if not word or (len(word) == 2 and {w[0][0] for w in word} == {"up", "down"}
                        and word[0][0][1] == word[1][0][1]):
            out.append(None)
            continue
        up = [0] * (m + 1)
        down = [0] * (m + 1)
        beta = [0] * m
        for (kind, j), _ in word:
            if kind == "mid":
                beta[j] += 1
            elif kind == "up":
                up[j] += 1
            else:
                down[j] += 1
        a = tuple((down[i + 1] - up[i + 1]) // 2 for i in range(1, m - 1))
        b = tuple((beta[i] - beta[i + 1]) // 2 for i in range(1, m - 1))
        out.append(LamCoords(m, a, b))
    return out


def trace(curves, punctures) -> LamCoords:
    """Coordinates of a polygonal multicurve.

    Raw crossings with the reference arcs are read off each polygon; pairs of
    consecutive crossings of the same arc bound a puncture-free bigon and are
    cancelled (cyclically) before counting.  Curves around no puncture, one
    puncture, or all of them contribute nothing.
    """
    comps = trace_components(curves, punctures)
    m = len(punctures)
    seen = []
    total = LamCoords.zero(m)
    for c in comps:
        if c is None or c.is_zero():
            continue
        if c in seen:
            raise HomotopicComponents("two components are isotopic")
        seen.append(c)
        total = total + c
    return total


# ----------------------------------------------------------------------
# relaxation
# ----------------------------------------------------------------------

def _moves(m):
    return [(k, s) for k in range(1, m) for s in (1, -1)]


def relax(c: LamCoords, budget: int = 10**6, lookahead: int | None = None, measure=None):
    """Untangle a single curve to a round one.

    Returns ``(conjugator, spec)``: applying the conjugator letters to ``c``
    (left to right) gives ``round_coords(m, spec)``.  The search is greedy
    steepest descent on the total crossing count with the reference arcs,
    falling back to a breadth-first lookahead of depth ``lookahead``
    (default m) on plateaus.
    """
    m = c.m
    if c.is_zero():
        raise NotASingleCurve("the empty multicurve has no round position")
    depth = m if lookahead is None else lookahead
    measure = total_crossings if measure is None else measure
    moves = _moves(m)
    word: list[tuple[int, int]] = []
    cur = c
    score = measure(cur)
    best_norm = norm(cur)
    while True:
        spec = as_round(cur)
        if spec is not None:
            return word, spec
        if len(word) >= budget:
            raise BudgetExhausted(f"no round position within {budget} letters",
                                  best_norm=best_norm, steps=len(word))
        step = None
        best = score
        for mv in moves:
            if word and word[-1] == (mv[0], -mv[1]):
                continue
            nxt = sigma_action(cur, *mv)
            s = measure(nxt)
            if s < best:
                best, step = s, [mv]
        if step is None:
            step = _lookahead(cur, score, moves, depth, measure)
            if step is None:
                _ensure_single(cur)
                raise BudgetExhausted("relaxation stuck on a plateau",
                                      best_norm=best_norm, steps=len(word))
        for mv in step:
            cur = sigma_action(cur, *mv)
            word.append(mv)
        score = measure(cur)
        best_norm = min(best_norm, norm(cur))


def _lookahead(cur, score, moves, depth, measure):
    """Shortest move sequence (length <= depth) that lowers the score."""
    frontier = [(cur, [])]
    seen = {cur}
    for _ in range(depth):
        nxt_frontier = []
        for state, path in frontier:
            for mv in moves:
                if path and path[-1] == (mv[0], -mv[1]):
                    continue
                nxt = sigma_action(state, *mv)
                if nxt in seen:
                    continue
                seen.add(nxt)
                s = measure(nxt)
                if s < score or as_round(nxt) is not None:
                    return path + [mv]
                if s == score:
                    nxt_frontier.append((nxt, path + [mv]))
        frontier = nxt_frontier
        if not frontier:
            return None
    return None


def _ensure_single(c: LamCoords):
    up, down, beta = crossings(c)
    if any(x % 2 for x in beta):
        raise NotASingleCurve("coordinates do not describe a closed multicurve")


# ----------------------------------------------------------------------
# growth bound
# ----------------------------------------------------------------------

class _Bound:
    """Abstract value: a bound sum(coef * |input|) on |value|."""

    def __init__(self, coef):
        self.coef = tuple(coef)

    def __add__(self, other):
        return _Bound(x + y for x, y in zip(self.coef, other.coef))

    __sub__ = __add__

    def __neg__(self):
        return self


def _abstract_update(x, sign, boundary):
    """The update formulas over abstract bounds (x+ and x- keep the bound)."""
    if boundary:
        a, b = x
        if sign > 0:
            nb = a + b
            na = -b + nb
        else:
            nb = -a + b
            na = b - nb
        return [na, nb]
    a1, a2, b1, b2 = x
    if sign > 0:
        c = a1 - b1 - a2 + b2
        return [a1 + b1 + (b2 - c), a2 + b2 + (b1 + c), b2 - c, b1 + c]
    d = a1 + b1 - a2 - b2
    return [a1 - b1 - (b2 + d), a2 - b2 - (b1 - d), b2 + d, b1 - d]


def amplification_factor(m: int) -> int:
    """Largest column sum of the abstract bound matrices over all generators.

    ``norm(sigma(c)) <= factor * norm(c)`` for every c, because coordinates
    away from the touched block are copied unchanged.
    """
    if m < 3:
        raise LaminationError("need at least three punctures")
    factor = 1
    cases = [True] if m == 3 else [True, False]
    for boundary in cases:
        n = 2 if boundary else 4
        inputs = [_Bound([int(i == j) for j in range(n)]) for i in range(n)]
        for sign in (1, -1):
            outs = _abstract_update(inputs, sign, boundary)
            cols = [sum(o.coef[j] for o in outs) for j in range(n)]
            factor = max(factor, *cols)
    return factor


def growth_constant(m: int, denominator: int = 1024) -> Fraction:
    """A rational kappa >= log2(amplification_factor(m)), rounded up."""
    f = amplification_factor(m)
    # smallest t with f**denominator <= 2**t
    t = (f ** denominator).bit_length()
    if f ** denominator == 1 << (t - 1):
        t -= 1
    return Fraction(t, denominator)


def log2_bounds(n: int, denominator: int = 1024) -> tuple[Fraction, Fraction]:
    """Rationals lo <= log2(n) <= hi with hi - lo <= 2/denominator (n >= 1)."""
    if n < 1:
        raise ValueError("log2 of a non-positive integer")
    shift = max(n.bit_length() - 64, 0)
    top = n >> shift
    lo_t = (top ** denominator).bit_length() - 1
    hi_t = ((top + (1 if shift else 0)) ** denominator).bit_length()
    return (Fraction(lo_t + shift * denominator, denominator),
            Fraction(hi_t + shift * denominator, denominator))

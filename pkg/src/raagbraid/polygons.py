"""Exact predicates for polygons with rational vertices.

Segment tests are first screened in floating point with a conservative error
margin; anything the screen cannot certify is decided with Fractions.
"""

from __future__ import annotations

from fractions import Fraction

Point = tuple[Fraction, Fraction]


class PolygonError(ValueError):
    pass


class SelfIntersection(PolygonError):
    pass


class PunctureHit(PolygonError):
    pass


class GeneralPositionError(PolygonError):
    pass


def _orient(p: Point, q: Point, r: Point) -> int:
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _on_segment(p: Point, q: Point, r: Point) -> bool:
    """Whether r lies on the closed segment pq."""
    return (_orient(p, q, r) == 0
            and min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Closed-segment intersection test, exact."""
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and _on_segment(p1, p2, q1)) or (o2 == 0 and _on_segment(p1, p2, q2))
            or (o3 == 0 and _on_segment(q1, q2, p1)) or (o4 == 0 and _on_segment(q1, q2, p2)))


def _edges(poly):
    n = len(poly)
    return [(poly[i], poly[(i + 1) % n]) for i in range(n)]


def _float_edges(edges):
    return [((float(p[0]), float(p[1])), (float(q[0]), float(q[1]))) for p, q in edges]


def _candidate_pairs(fa, fb=None, slack=1e-9):
    """Index pairs of edges whose (slightly inflated) bounding boxes overlap."""
    same = fb is None
    items = [(min(p[0], q[0]) - slack, max(p[0], q[0]) + slack,
              min(p[1], q[1]) - slack, max(p[1], q[1]) + slack, 0, i)
             for i, (p, q) in enumerate(fa)]
    if not same:
        items += [(min(p[0], q[0]) - slack, max(p[0], q[0]) + slack,
                   min(p[1], q[1]) - slack, max(p[1], q[1]) + slack, 1, i)
                  for i, (p, q) in enumerate(fb)]
    items.sort(key=lambda t: t[0])
    active = []
    for it in items:
        x0 = it[0]
        active = [o for o in active if o[1] >= x0]
        for o in active:
            if (same or o[4] != it[4]) and o[3] >= it[2] and it[3] >= o[2]:
                if same:
                    yield (min(o[5], it[5]), max(o[5], it[5]))
                else:
                    yield (o[5], it[5]) if o[4] == 0 else (it[5], o[5])
        active.append(it)


def _float_orient(p, q, r, tol):
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    if v > tol:
        return 1
    if v < -tol:
        return -1
    return None


def _clearly_disjoint(fp, fq, fr, fs, tol):
    """True if float orientation tests certify that two segments do not meet."""
    o1, o2 = _float_orient(fp, fq, fr, tol), _float_orient(fp, fq, fs, tol)
    if o1 is not None and o1 == o2:
        return True
    o3, o4 = _float_orient(fr, fs, fp, tol), _float_orient(fr, fs, fq, tol)
    return o3 is not None and o3 == o4


def _tolerance(fedges):
    big = max((max(abs(c) for pt in e for c in pt) for e in fedges), default=1.0)
    return 1e-12 * (1.0 + big) ** 2


def check_simple(poly) -> None:
    edges = _edges(poly)
    n = len(edges)
    if n < 3:
        raise SelfIntersection("a polygon needs at least three vertices")
    if len(set(poly)) != len(poly):
        raise SelfIntersection("repeated vertex")
    fe = _float_edges(edges)
    tol = _tolerance(fe)
    for i, j in _candidate_pairs(fe):
        p, q = edges[i]
        r, s = edges[j]
        if j == i + 1 or (i == 0 and j == n - 1):
            # adjacent edges may only share their common vertex
            other, far = (s, p) if j == i + 1 else (r, q)
            if _on_segment(p, q, other) or _on_segment(r, s, far):
                raise SelfIntersection("overlapping adjacent edges")
            continue
        if _clearly_disjoint(*fe[i], *fe[j], tol):
            continue
        if segments_intersect(p, q, r, s):
            raise SelfIntersection(f"edges {i} and {j} cross")


def count_crossings(poly1, poly2) -> int:
    """Number of transverse crossings between two polygons in general position."""
    total = 0
    for p, q in _edges(poly1):
        for r, s in _edges(poly2):
            if segments_intersect(p, q, r, s):
                if 0 in (_orient(p, q, r), _orient(p, q, s), _orient(r, s, p), _orient(r, s, q)):
                    raise GeneralPositionError("polygons are not in general position")
                total += 1
    return total


def point_in_polygon(pt: Point, poly) -> bool:
    """Exact even-odd test; ``pt`` must not lie on the polygon."""
    x, y = pt
    inside = False
    for p, q in _edges(poly):
        if _on_segment(p, q, pt):
            raise PunctureHit(f"point {pt} lies on the polygon")
        if (p[1] > y) != (q[1] > y):
            xc = p[0] + (y - p[1]) * (q[0] - p[0]) / (q[1] - p[1])
            if xc > x:
                inside = not inside
    return inside


def crossing_points(poly1, poly2) -> list[Point]:
    """Exact transverse crossing points of two polygons in general position."""
    fa, fb = _float_edges(_edges(poly1)), _float_edges(_edges(poly2))
    ea, eb = _edges(poly1), _edges(poly2)
    tol = _tolerance(fa + fb)
    out = []
    for i, j in _candidate_pairs(fa, fb):
        if _clearly_disjoint(*fa[i], *fb[j], tol):
            continue
        (p, q), (r, s) = ea[i], eb[j]
        if not segments_intersect(p, q, r, s):
            continue
        if 0 in (_orient(p, q, r), _orient(p, q, s), _orient(r, s, p), _orient(r, s, q)):
            raise GeneralPositionError("polygons are not in general position")
        dx1, dy1 = q[0] - p[0], q[1] - p[1]
        dx2, dy2 = s[0] - r[0], s[1] - r[1]
        t = ((r[0] - p[0]) * dy2 - (r[1] - p[1]) * dx2) / (dx1 * dy2 - dy1 * dx2)
        out.append((p[0] + t * dx1, p[1] + t * dy1))
    return out

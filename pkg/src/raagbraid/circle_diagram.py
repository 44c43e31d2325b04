"""Circle diagrams in the unit disk and the punctured surface they define.

Everything here is exact.  Crossing points of two circles are quadratic
irrationals ``alpha + beta * sqrt(H)``; their signs are decided exactly and
their angular order around a circle by interval refinement of sqrt(H), which
always terminates because distinct crossing points have distinct angles.

Surface construction: each circle i gets an annulus of half-width ``width``
and a pair of punctures at normal offsets -width/2 and +width/2 from a point
on a crossing-free arc; each bounded face of the arrangement gets one
puncture.  The twist curves are convex polygons, so their isotopy classes
are fixed by the sets of punctures they enclose, which are checked exactly.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .graph import Graph
from .polygons import (GeneralPositionError, PolygonError, check_simple, count_crossings,
                       crossing_points as polygon_crossings, point_in_polygon)

Q = Fraction
Point = tuple[Fraction, Fraction]

WIDTH_FLOOR = Fraction(1, 2**32)
PERTURB = Fraction(1, 2**40)
MAX_PRECISION = 1 << 14


class DiagramError(ValueError):
    pass


class Tangency(DiagramError):
    pass


class TripleIntersection(DiagramError):
    pass


class OutsideDisk(DiagramError):
    pass


class DegenerateWidth(DiagramError):
    pass


class ConstructionFailed(DiagramError):
    def __init__(self, msg, circle=None):
        super().__init__(msg)
        self.circle = circle


# ----------------------------------------------------------------------
# quadratic irrationals
# ----------------------------------------------------------------------

def sign_q2(alpha: Fraction, beta: Fraction, h: Fraction) -> int:
    """Exact sign of alpha + beta * sqrt(h), h >= 0."""
    sa = (alpha > 0) - (alpha < 0)
    sb = (beta > 0) - (beta < 0) if h else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs, rhs = alpha * alpha, beta * beta * h
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def sqrt_bounds(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """lo <= sqrt(x) <= hi with hi - lo <= 2**-bits / denominator(x)."""
    if x < 0:
        raise ValueError("square root of a negative number")
    n, d = x.numerator, x.denominator
    s = isqrt(n * d << (2 * bits))
    scale = d << bits
    lo = Fraction(s, scale)
    hi = lo if s * s == n * d << (2 * bits) else Fraction(s + 1, scale)
    return lo, hi


@dataclass(frozen=True)
class QuadNum:
    """alpha + beta * sqrt(h)."""
    alpha: Fraction
    beta: Fraction = Fraction(0)
    h: Fraction = Fraction(0)

    def sign(self) -> int:
        return sign_q2(self.alpha, self.beta, self.h)

    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        if not self.beta or not self.h:
            return self.alpha, self.alpha
        lo, hi = sqrt_bounds(self.h, bits)
        a, b = self.beta * lo, self.beta * hi
        return self.alpha + min(a, b), self.alpha + max(a, b)

    def __sub__(self, c: Fraction) -> "QuadNum":
        return QuadNum(self.alpha - c, self.beta, self.h)


@dataclass(frozen=True)
class CrossPoint:
    """A crossing point of circles i < j; ``side`` is +1 or -1."""
    i: int
    j: int
    side: int
    x: QuadNum
    y: QuadNum

    def interval(self, bits):
        return self.x.interval(bits), self.y.interval(bits)


def _quadrant(x: int, y: int) -> int:
    """Half-open quadrants 0..3 from exact signs of a nonzero vector."""
    if x > 0 and y >= 0:
        return 0
    if x <= 0 and y > 0:
        return 1
    if x < 0 and y <= 0:
        return 2
    return 3


def _rotate_to_first(q, xlo, xhi, ylo, yhi):
    """Rotate an interval box by -90 degrees q times."""
    for _ in range(q):
        xlo, xhi, ylo, yhi = ylo, yhi, -xhi, -xlo
    return xlo, xhi, ylo, yhi


class _Dir:
    """A direction vector (QuadNum components) with pseudo-angle queries."""

    def __init__(self, x: QuadNum, y: QuadNum):
        self.x, self.y = x, y
        sx, sy = x.sign(), y.sign()
        if sx == 0 and sy == 0:
            raise DiagramError("zero direction")
        self.q = _quadrant(sx, sy)
        self._cache = {}

    def pa(self, bits: int) -> tuple[Fraction, Fraction]:
        """Interval for the pseudo-angle in [0, 4) (monotone in the angle)."""
        if bits in self._cache:
            return self._cache[bits]
        (xlo, xhi), (ylo, yhi) = self.x.interval(bits), self.y.interval(bits)
        xlo, xhi, ylo, yhi = _rotate_to_first(self.q, xlo, xhi, ylo, yhi)
        # now x > 0, y >= 0 for the true vector; f = y / (x + y) is increasing
        # in y and decreasing in x
        ylo, xlo = max(ylo, Fraction(0)), max(xlo, Fraction(0))
        lo = ylo / (xhi + ylo) if xhi + ylo > 0 else Fraction(0)
        hi = yhi / (xlo + yhi) if xlo + yhi > 0 else Fraction(1)
        lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
        out = (self.q + lo, self.q + hi)
        self._cache[bits] = out
        return out


def _cmp_dir(u: _Dir, v: _Dir) -> int:
    if u.q != v.q:
        return -1 if u.q < v.q else 1
    bits = 32
    while bits <= MAX_PRECISION:
        (ulo, uhi), (vlo, vhi) = u.pa(bits), v.pa(bits)
        if uhi < vlo:
            return -1
        if vhi < ulo:
            return 1
        if ulo == uhi == vlo == vhi:
            return 0
        bits *= 2
    raise DiagramError("could not separate two directions (coincident points?)")


def _rational_dir(x: Fraction, y: Fraction) -> _Dir:
    return _Dir(QuadNum(Fraction(x)), QuadNum(Fraction(y)))


# ----------------------------------------------------------------------
# diagrams
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Circle:
    cx: Fraction
    cy: Fraction
    r: Fraction

    @property
    def center(self) -> Point:
        return (self.cx, self.cy)

    def power(self, p: Point) -> Fraction:
        """|p - c|^2 - r^2: negative inside, positive outside."""
        return (p[0] - self.cx) ** 2 + (p[1] - self.cy) ** 2 - self.r ** 2

    def point_at(self, t: Fraction, mirrored: bool = False) -> Point:
        """Rational point with half-angle tangent t (mirrored: x reflected)."""
        den = 1 + t * t
        ux, uy = (1 - t * t) / den, 2 * t / den
        if mirrored:
            ux = -ux
        return (self.cx + self.r * ux, self.cy + self.r * uy)

    def far_from(self, p: Point, gap: Fraction) -> bool:
        """Whether p is at distance > gap from this circle."""
        d2 = (p[0] - self.cx) ** 2 + (p[1] - self.cy) ** 2
        if d2 > (self.r + gap) ** 2:
            return True
        return self.r > gap and d2 < (self.r - gap) ** 2


def _parse_q(v) -> Fraction:
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise DiagramError(f"rational expected, got {v!r}")


@dataclass(frozen=True)
class CircleDiagram:
    circles: tuple[Circle, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        circles = tuple(c if isinstance(c, Circle) else Circle(*map(_parse_q, c))
                        for c in self.circles)
        object.__setattr__(self, "circles", circles)
        labels = self.labels
        if labels is None:
            labels = tuple(f"c{i + 1}" for i in range(len(circles)))
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(circles) or len(set(labels)) != len(labels):
            raise DiagramError("labels must be distinct, one per circle")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.circles)

    def to_json(self) -> dict:
        return {"circles": [{"cx": str(c.cx), "cy": str(c.cy), "r": str(c.r)}
                            for c in self.circles],
                "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data) -> "CircleDiagram":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            raw = data["circles"]
            circles = tuple(Circle(_parse_q(c["cx"]), _parse_q(c["cy"]), _parse_q(c["r"]))
                            for c in raw)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise DiagramError(f"malformed diagram: {exc}") from exc
        return cls(circles, tuple(data["labels"]) if data.get("labels") else None)

    @classmethod
    def load(cls, path) -> "CircleDiagram":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _relation(a: Circle, b: Circle) -> str:
    """'cross', 'apart', 'nested', 'tangent' or 'same'."""
    d2 = (a.cx - b.cx) ** 2 + (a.cy - b.cy) ** 2
    s2, t2 = (a.r + b.r) ** 2, (a.r - b.r) ** 2
    if d2 == 0 and a.r == b.r:
        return "same"
    if d2 == s2 or d2 == t2:
        return "tangent"
    if d2 > s2:
        return "apart"
    if d2 < t2:
        return "nested"
    return "cross"


def crossing_points(a: Circle, b: Circle, i: int = 0, j: int = 1) -> tuple[CrossPoint, CrossPoint]:
    """The two crossing points; side +1 has the tangents of a, b in ccw order."""
    vx, vy = b.cx - a.cx, b.cy - a.cy
    d2 = vx * vx + vy * vy
    al = (a.r ** 2 - b.r ** 2 + d2) / (2 * d2)
    h = a.r ** 2 / d2 - al * al
    if h <= 0:
        raise DiagramError("circles do not cross")
    out = []
    for side in (1, -1):
        x = QuadNum(a.cx + al * vx, -side * vy, h)
        y = QuadNum(a.cy + al * vy, side * vx, h)
        out.append(CrossPoint(i, j, side, x, y))
    return tuple(out)


def validate(d) -> None:
    if isinstance(d, PolygonDiagram):
        return _validate_polygons(d)
    for i, c in enumerate(d.circles):
        if c.r <= 0:
            raise DiagramError(f"circle {d.labels[i]} has non-positive radius")
        if c.r >= 1 or c.cx ** 2 + c.cy ** 2 >= (1 - c.r) ** 2:
            raise OutsideDisk(f"circle {d.labels[i]} leaves the unit disk")
    pts = {}
    for i, j in itertools.combinations(range(len(d)), 2):
        rel = _relation(d.circles[i], d.circles[j])
        if rel in ("tangent", "same"):
            raise Tangency(f"circles {d.labels[i]} and {d.labels[j]} are tangent or equal")
        if rel == "cross":
            pts[(i, j)] = crossing_points(d.circles[i], d.circles[j], i, j)
    for (i, j), pp in pts.items():
        for p in pp:
            for k, c in enumerate(d.circles):
                if k in (i, j):
                    continue
                # |P - c|^2 - r^2 as alpha + beta sqrt(h)
                dx, dy = p.x - c.cx, p.y - c.cy
                h = dx.h
                alpha = dx.alpha ** 2 + dx.beta ** 2 * h + dy.alpha ** 2 + dy.beta ** 2 * h - c.r ** 2
                beta = 2 * (dx.alpha * dx.beta + dy.alpha * dy.beta)
                if sign_q2(alpha, beta, h) == 0:
                    raise TripleIntersection(
                        f"circles {d.labels[i]}, {d.labels[j]}, {d.labels[k]} share a point")


def non_incidence_graph(d) -> Graph:
    """Edge between two curves iff they are disjoint (apart or nested)."""
    rel = _polygon_relation if isinstance(d, PolygonDiagram) else _relation
    items = d.polygons if isinstance(d, PolygonDiagram) else d.circles
    edges = [(d.labels[i], d.labels[j]) for i, j in itertools.combinations(range(len(d)), 2)
             if rel(items[i], items[j]) in ("apart", "nested")]
    return Graph.from_edges(d.labels, edges)


# ----------------------------------------------------------------------
# polygonal curve diagrams
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PolygonDiagram:
    """Simple closed polygonal curves with rational vertices in the unit disk.

    Used where round circles cannot realize the wanted crossing pattern.  The
    relations (cross, apart, nested), the non-incidence graph and the face
    count are computed exactly; the annulus surface is not built for these.
    """
    polygons: tuple[tuple[Point, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        polys = tuple(tuple((_parse_q(x), _parse_q(y)) for x, y in poly) for poly in self.polygons)
        object.__setattr__(self, "polygons", polys)
        labels = self.labels
        if labels is None:
            labels = tuple(f"c{i + 1}" for i in range(len(polys)))
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(polys) or len(set(labels)) != len(labels):
            raise DiagramError("labels must be distinct, one per curve")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.polygons)

    def to_json(self) -> dict:
        return {"polygons": [[[str(x), str(y)] for x, y in poly] for poly in self.polygons],
                "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data) -> "PolygonDiagram":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            polys = tuple(tuple((_parse_q(x), _parse_q(y)) for x, y in poly)
                          for poly in data["polygons"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise DiagramError(f"malformed diagram: {exc}") from exc
        return cls(polys, tuple(data["labels"]) if data.get("labels") else None)


def diagram_from_json(data):
    """A CircleDiagram or PolygonDiagram, by the keys present."""
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, dict) and "polygons" in data:
        return PolygonDiagram.from_json(data)
    return CircleDiagram.from_json(data)


def load_diagram(path):
    with open(path) as fh:
        return diagram_from_json(json.load(fh))


def _polygon_relation(a, b) -> str:
    try:
        if count_crossings(a, b):
            return "cross"
    except GeneralPositionError:
        return "tangent"
    if point_in_polygon(a[0], b) or point_in_polygon(b[0], a):
        return "nested"
    return "apart"


def _validate_polygons(d: PolygonDiagram) -> None:
    for label, poly in zip(d.labels, d.polygons):
        try:
            check_simple(poly)
        except PolygonError as exc:
            raise DiagramError(f"curve {label} is not simple: {exc}") from exc
        if any(x * x + y * y >= 1 for x, y in poly):
            raise OutsideDisk(f"curve {label} leaves the unit disk")
    seen = {}
    for i, j in itertools.combinations(range(len(d)), 2):
        a, b = d.polygons[i], d.polygons[j]
        try:
            pts = polygon_crossings(a, b)
        except GeneralPositionError as exc:
            raise Tangency(f"curves {d.labels[i]} and {d.labels[j]} touch") from exc
        except PolygonError as exc:
            raise Tangency(f"curves {d.labels[i]} and {d.labels[j]}: {exc}") from exc
        for p in pts:
            if p in seen:
                k = seen[p]
                raise TripleIntersection(
                    f"curves {d.labels[k[0]]}, {d.labels[k[1]]}, {d.labels[i]}, {d.labels[j]} "
                    "share a point")
            seen[p] = (i, j)
        if not pts:
            # a vertex of one on the other would have raised above
            point_in_polygon(a[0], b)
            point_in_polygon(b[0], a)


def _polygon_face_count(d: PolygonDiagram) -> int:
    """Bounded faces of the arrangement, from Euler's formula.

    Each crossing point is a vertex of degree four, so E = 2V, and a curve
    without crossings is one loop; bounded faces = V + #components.
    """
    n = len(d)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    v = 0
    for i, j in itertools.combinations(range(n), 2):
        k = len(polygon_crossings(d.polygons[i], d.polygons[j]))
        if k:
            v += k
            parent[find(i)] = find(j)
    return v + len({find(i) for i in range(n)})


def crossing_count(d) -> int:
    """Total number of crossing points, i.e. intersection squares."""
    if isinstance(d, PolygonDiagram):
        return sum(len(polygon_crossings(a, b))
                   for a, b in itertools.combinations(d.polygons, 2))
    return 2 * sum(1 for a, b in itertools.combinations(d.circles, 2) if _relation(a, b) == "cross")


# ----------------------------------------------------------------------
# arrangement faces
# ----------------------------------------------------------------------

@dataclass
class _Arrangement:
    diagram: CircleDiagram
    points: dict                     # (i, j) -> (P+, P-)
    order: dict                      # circle -> list of CrossPoint in ccw order
    cycles: list                     # list of list of half-edges (circle, arc, dir)
    inner: list                      # indices into cycles of bounded faces
    components: list                 # list of sets of circles


def _dir_on(circle: Circle, p: CrossPoint) -> _Dir:
    return _Dir(p.x - circle.cx, p.y - circle.cy)


def _sort_on_circle(circle: Circle, pts):
    dirs = {id(p): _dir_on(circle, p) for p in pts}
    return sorted(pts, key=functools.cmp_to_key(lambda u, v: _cmp_dir(dirs[id(u)], dirs[id(v)])))


def _arrangement(d: CircleDiagram) -> _Arrangement:
    n = len(d)
    points, order = {}, {}
    for i, j in itertools.combinations(range(n), 2):
        if _relation(d.circles[i], d.circles[j]) == "cross":
            points[(i, j)] = crossing_points(d.circles[i], d.circles[j], i, j)
    on = {i: [] for i in range(n)}
    for (i, j), pp in points.items():
        for p in pp:
            on[i].append(p)
            on[j].append(p)
    for i in range(n):
        order[i] = _sort_on_circle(d.circles[i], on[i])
    index = {(i, id(p)): t for i in range(n) for t, p in enumerate(order[i])}

    # components of the crossing graph
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for i, j in points:
        parent[find(i)] = find(j)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), set()).add(i)
    components = list(comps.values())

    def nxt(he):
        """Next half-edge along the face on the left of ``he``."""
        i, t, s = he
        k = len(order[i])
        v = order[i][(t + 1) % k] if s > 0 else order[i][t]
        j = v.j if v.i == i else v.i
        # cross(t_i, t_j) has the sign of v.side when i is the first circle
        ccw = v.side if v.i == i else -v.side
        # outgoing directions in ccw order, as (circle, dir)
        ring = [(i, 1), (j, 1), (i, -1), (j, -1)] if ccw > 0 else \
               [(i, 1), (j, -1), (i, -1), (j, 1)]
        twin = (i, -s)
        c, s2 = ring[(ring.index(twin) - 1) % 4]
        pos = index[(c, id(v))]
        kk = len(order[c])
        return (c, pos, 1) if s2 > 0 else (c, (pos - 1) % kk, -1)

    cycles, seen = [], set()
    owner = {}
    for i in range(n):
        k = len(order[i])
        if k == 0:
            for s in (1, -1):
                owner[(i, 0, s)] = len(cycles)
                cycles.append([(i, 0, s)])
            continue
        for t in range(k):
            for s in (1, -1):
                he = (i, t, s)
                if he in seen:
                    continue
                cyc = []
                cur = he
                while cur not in seen:
                    seen.add(cur)
                    owner[cur] = len(cycles)
                    cyc.append(cur)
                    cur = nxt(cur)
                if cur != he:
                    raise DiagramError("face tracing did not close up")
                cycles.append(cyc)

    outer = set()
    left = _rational_dir(-1, 0)
    for comp in components:
        i0 = min(comp, key=lambda i: (d.circles[i].cx - d.circles[i].r, i))
        pts = order[i0]
        if not pts:
            outer.add(owner[(i0, 0, -1)])
            continue
        circ = d.circles[i0]
        dirs = [_dir_on(circ, p) for p in pts]
        k = len(pts)
        arc = k - 1  # arc from the last point wraps through angle 0
        for t in range(k):
            if _cmp_dir(dirs[t], left) < 0 and _cmp_dir(left, dirs[(t + 1) % k]) < 0:
                arc = t
                break
            if t == k - 1:
                arc = k - 1
        # the arc through angle pi is the one whose start precedes it and whose
        # end follows it; when no such (non-wrapping) arc exists it is the wrap arc
        outer.add(owner[(i0, arc, -1)])
    inner = [c for c in range(len(cycles)) if c not in outer]
    if len(outer) != len(components):
        raise DiagramError("outer face identification failed")
    return _Arrangement(d, points, order, cycles, inner, components)


def bounded_face_count(d) -> int:
    validate(d)
    if isinstance(d, PolygonDiagram):
        return _polygon_face_count(d)
    return len(_arrangement(d).inner)


# ----------------------------------------------------------------------
# rational points on arcs
# ----------------------------------------------------------------------

def _point_near(circle: Circle, pa: Fraction) -> Point:
    """A rational point on ``circle`` whose direction is close to pseudo-angle pa."""
    q = int(pa) % 4
    f = pa - int(pa)
    wx, wy = 1 - f, f
    for _ in range(q):
        wx, wy = -wy, wx
    lo, _ = sqrt_bounds(wx * wx + wy * wy, 40)
    if wx >= 0:
        return circle.point_at(wy / (lo + wx))
    return circle.point_at(wy / (lo - wx), mirrored=True)


def _arc_point(circle: Circle, start: CrossPoint | None, end: CrossPoint | None,
               frac: Fraction = Fraction(1, 2)) -> Point:
    """A rational point strictly inside the ccw arc from start to end."""
    if start is None:
        return circle.point_at(Fraction(0))
    ds, de = _dir_on(circle, start), _dir_on(circle, end)
    bits = 64
    while bits <= MAX_PRECISION:
        (slo, shi), (elo, ehi) = ds.pa(bits), de.pa(bits)
        if start is end:
            elo, ehi = elo + 4, ehi + 4
        elif _cmp_dir(ds, de) > 0:
            elo, ehi = elo + 4, ehi + 4
        target = shi + (elo - shi) * frac
        if elo > shi:
            p = _point_near(circle, target % 4)
            dp = _rational_dir(p[0] - circle.cx, p[1] - circle.cy)
            if start is end:
                ok = _cmp_dir(dp, ds) != 0
            elif _cmp_dir(ds, de) < 0:
                ok = _cmp_dir(ds, dp) < 0 and _cmp_dir(dp, de) < 0
            else:
                ok = _cmp_dir(ds, dp) < 0 or _cmp_dir(dp, de) < 0
            if ok:
                return p
        bits *= 2
    raise ConstructionFailed("no rational point found on an arc")


# ----------------------------------------------------------------------
# surface data
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Square:
    i: int
    k: int
    point: CrossPoint
    radius: Fraction            # upper bound on the distance from the crossing point


@dataclass(frozen=True)
class SurfaceData:
    diagram: CircleDiagram
    width: Fraction
    squares: tuple[Square, ...]
    annulus_punctures: tuple[tuple[Point, Point], ...]   # (inside, outside) per circle
    face_punctures: tuple[Point, ...]
    puncture_order: tuple[Point, ...]
    anchors: tuple[Point, ...] = field(default=())      # base point on each circle

    @property
    def m(self) -> int:
        return len(self.puncture_order)

    def index_of(self, p: Point) -> int:
        return self.puncture_order.index(p) + 1

    def summary(self) -> dict:
        return {"circles": len(self.diagram), "width": str(self.width),
                "squares": len(self.squares), "face_punctures": len(self.face_punctures),
                "m": self.m}


def _corner_radius(ci: Circle, cj: Circle, p: CrossPoint, w: Fraction) -> Fraction | None:
    """Twice an upper bound on the distance from p to the corners of its square."""
    best = Fraction(0)
    for e1, e2 in itertools.product((1, -1), repeat=2):
        a = Circle(ci.cx, ci.cy, ci.r + e1 * w)
        b = Circle(cj.cx, cj.cy, cj.r + e2 * w)
        if a.r <= 0 or b.r <= 0 or _relation(a, b) != "cross":
            return None
        corner = [q for q in crossing_points(a, b) if q.side == p.side][0]
        (xlo, xhi), (ylo, yhi) = corner.interval(48)
        (pxl, pxh), (pyl, pyh) = p.interval(48)
        dx = max(abs(xhi - pxl), abs(xlo - pxh))
        dy = max(abs(yhi - pyl), abs(ylo - pyh))
        _, hi = sqrt_bounds(dx * dx + dy * dy, 48)
        best = max(best, hi)
    return 2 * best


def _dist2_interval(p: CrossPoint, q: Point | CrossPoint, bits=48):
    (xlo, xhi), (ylo, yhi) = p.interval(bits)
    if isinstance(q, CrossPoint):
        (qxl, qxh), (qyl, qyh) = q.interval(bits)
    else:
        qxl = qxh = q[0]
        qyl = qyh = q[1]
    dxl, dxh = xlo - qxh, xhi - qxl
    dyl, dyh = ylo - qyh, yhi - qyl

    def sq(lo, hi):
        if lo <= 0 <= hi:
            return Fraction(0), max(lo * lo, hi * hi)
        return min(lo * lo, hi * hi), max(lo * lo, hi * hi)
    a, b = sq(dxl, dxh)
    c, e = sq(dyl, dyh)
    return a + c, b + e


def _square_ok(arr: _Arrangement, w: Fraction):
    d = arr.diagram
    squares = []
    for (i, j), pp in arr.points.items():
        for p in pp:
            rad = _corner_radius(d.circles[i], d.circles[j], p, w)
            if rad is None:
                return None
            squares.append(Square(i, j, p, rad))
    for s in squares:
        for k, c in enumerate(d.circles):
            if k in (s.i, s.k):
                continue
            lo, hi = _dist2_interval(s.point, c.center)
            g = c.r + s.radius + w
            inner = c.r - s.radius - w
            if not (lo > g * g or (inner > 0 and hi < inner * inner)):
                return None
    for s, t in itertools.combinations(squares, 2):
        lo, _ = _dist2_interval(s.point, t.point)
        if not lo > (s.radius + t.radius) ** 2:
            return None
    return squares


def _pairs_ok(d: CircleDiagram, w: Fraction) -> bool:
    for a, b in itertools.combinations(d.circles, 2):
        rel = _relation(a, b)
        d2 = (a.cx - b.cx) ** 2 + (a.cy - b.cy) ** 2
        if rel == "apart" and not d2 > (a.r + b.r + 2 * w) ** 2:
            return False
        if rel == "nested":
            gap = abs(a.r - b.r) - 2 * w
            if not (gap > 0 and d2 < gap * gap):
                return False
    return True


def _face_points(arr: _Arrangement) -> list[Point]:
    """One rational point inside each bounded face, pushed off its boundary."""
    d = arr.diagram
    out = []
    for ci in arr.inner:
        i, t, s = arr.cycles[ci][0]
        circ = d.circles[i]
        pts = arr.order[i]
        if pts:
            k = len(pts)
            m = _arc_point(circ, pts[t], pts[(t + 1) % k])
        else:
            m = circ.point_at(Fraction(0))
        others = [c for j, c in enumerate(d.circles) if j != i]
        eta = Fraction(1, 2)
        while True:
            if all(c.far_from(m, eta * circ.r) for c in others):
                break
            eta /= 2
            if eta < WIDTH_FLOOR:
                raise ConstructionFailed("face too thin for a puncture", circle=i)
        f = 1 - eta if s > 0 else 1 + eta
        out.append((circ.cx + f * (m[0] - circ.cx), circ.cy + f * (m[1] - circ.cy)))
    return out


def _anchor(arr: _Arrangement, i: int) -> Point:
    """Midpoint of the widest crossing-free arc of circle i."""
    circ = arr.diagram.circles[i]
    pts = arr.order[i]
    if not pts:
        return circ.point_at(Fraction(0))
    k = len(pts)
    best, best_len = 0, Fraction(-1)
    for t in range(k):
        (slo, _), (elo, _) = _dir_on(circ, pts[t]).pa(32), _dir_on(circ, pts[(t + 1) % k]).pa(32)
        span = (elo - slo) % 4 if k > 1 else Fraction(4)
        if span > best_len:
            best, best_len = t, span
    return _arc_point(circ, pts[best], pts[(best + 1) % k])


def build_surface(d: CircleDiagram) -> SurfaceData:
    if isinstance(d, PolygonDiagram):
        raise DiagramError("annulus construction is implemented for round circles only")
    validate(d)
    arr = _arrangement(d)
    faces = _face_points(arr)
    anchors = [_anchor(arr, i) for i in range(len(d))]
    w = min(min(c.r for c in d.circles) / 4, Fraction(1, 16))
    while w >= WIDTH_FLOOR:
        res = _try_width(arr, faces, anchors, w)
        if res is not None:
            return res
        w /= 2
    raise DegenerateWidth(f"no admissible annulus width above {WIDTH_FLOOR}")


def _try_width(arr, faces, anchors, w):
    d = arr.diagram
    if not _pairs_ok(d, w):
        return None
    squares = _square_ok(arr, w)
    if squares is None:
        return None
    raw = []
    for i, (circ, m) in enumerate(zip(d.circles, anchors)):
        nx, ny = (m[0] - circ.cx) / circ.r, (m[1] - circ.cy) / circ.r
        raw.append((m[0] - w / 2 * nx, m[1] - w / 2 * ny))
        raw.append((m[0] + w / 2 * nx, m[1] + w / 2 * ny))
    raw.extend(faces)
    pert = [(x + idx * PERTURB, y) for idx, (x, y) in enumerate(raw, start=1)]
    if len({p[0] for p in pert}) != len(pert):
        return None
    n = len(d)
    for idx, p in enumerate(pert):
        own = idx // 2 if idx < 2 * n else None
        for k, c in enumerate(d.circles):
            if k == own:
                continue
            if not c.far_from(p, w):
                return None
        if own is not None:
            c = d.circles[own]
            pw = c.power(p)
            inside = idx % 2 == 0
            if (pw < 0) != inside or pw == 0 or c.far_from(p, w):
                return None
    ann = tuple((pert[2 * i], pert[2 * i + 1]) for i in range(n))
    return SurfaceData(d, w, tuple(squares), ann, tuple(pert[2 * n:]),
                       tuple(sorted(pert)), tuple(anchors))


# ----------------------------------------------------------------------
# twist curves
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TwistCurves:
    B: tuple[Point, ...]
    C: tuple[Point, ...]
    D: tuple[Point, ...]


@dataclass(frozen=True)
class TwistCurveSet:
    surface: SurfaceData
    curves: tuple[TwistCurves, ...]


def circle_polygon(circle: Circle, s: int) -> list[Point]:
    """A 4s-gon with rational vertices on the circle, counterclockwise."""
    right = [circle.point_at(Fraction(k, s)) for k in range(-s, s + 1)]
    left = [circle.point_at(Fraction(k, s), mirrored=True) for k in range(s - 1, -s, -1)]
    return right + left


def _enclosed(poly, punctures) -> frozenset:
    return frozenset(p for p in punctures if point_in_polygon(p, poly))


def twist_curves(s: SurfaceData, max_refine: int = 8) -> TwistCurveSet:
    d = s.diagram
    punct = s.puncture_order
    out = []
    for i, circ in enumerate(d.circles):
        p_in, p_out = s.annulus_punctures[i]
        inside = frozenset(p for p in punct if circ.power(p) < 0)
        big = Circle(circ.cx, circ.cy, circ.r + 3 * s.width / 4)
        want_d = inside | {p_out}
        C = D = None
        k = 16
        for _ in range(max_refine):
            C = circle_polygon(circ, k)
            if _enclosed(C, punct) == inside:
                break
            k *= 2
        else:
            raise ConstructionFailed(f"circle {d.labels[i]}: core polygon misses punctures", i)
        k = 16
        for _ in range(max_refine):
            D = circle_polygon(big, k)
            if _enclosed(D, punct) == want_d:
                break
            k *= 2
        else:
            raise ConstructionFailed(f"circle {d.labels[i]}: push-off polygon misses punctures", i)
        m = s.anchors[i]
        nx, ny = (m[0] - circ.cx) / circ.r, (m[1] - circ.cy) / circ.r
        tx, ty = -ny, nx
        a, h = 3 * s.width / 4, s.width / 4
        B = [(m[0] + e1 * a * nx + e2 * h * tx, m[1] + e1 * a * ny + e2 * h * ty)
             for e1, e2 in ((-1, -1), (1, -1), (1, 1), (-1, 1))]
        for poly in (B, C, D):
            check_simple(poly)
        if _enclosed(B, punct) != frozenset((p_in, p_out)):
            raise ConstructionFailed(f"circle {d.labels[i]}: band curve misses punctures", i)
        if count_crossings(B, C) != 2 or count_crossings(C, D) != 0:
            raise ConstructionFailed(f"circle {d.labels[i]}: unexpected curve crossings", i)
        out.append(TwistCurves(tuple(B), tuple(C), tuple(D)))
    return TwistCurveSet(s, tuple(out))


# ----------------------------------------------------------------------
# builtins
# ----------------------------------------------------------------------

def _diagram(rows, labels=None) -> CircleDiagram:
    return CircleDiagram(tuple(Circle(Q(x), Q(y), Q(r)) for x, y, r in rows),
                         tuple(labels) if labels else None)


BUILTIN_DIAGRAMS = {
    "single": lambda: _diagram([("0", "0", "1/2")]),
    "crossing_pair": lambda: _diagram([("-1/4", "0", "3/8"), ("1/4", "0", "3/8")]),
    "disjoint_pair": lambda: _diagram([("-2/5", "0", "1/4"), ("2/5", "0", "1/4")]),
    # each circle crosses exactly its two second neighbours in a-b-c-d-e-a
    "pentagon_c5": lambda: _diagram([
        ("9/188", "103/163", "12/37"),
        ("-23/60", "-21/40", "17/50"),
        ("-18/107", "1/9", "5/16"),
        ("-31/164", "-7/68", "79/102"),
        ("-28/197", "-23/178", "52/157"),
    ], labels="abcde"),
}


def thicken_path(points, eps: Fraction) -> tuple[Point, ...]:
    """Boundary of the eps-neighbourhood of an axis-parallel polyline.

    Consecutive points must differ in exactly one coordinate and consecutive
    segments must turn by a right angle.
    """
    pts = [(Q(x), Q(y)) for x, y in points]
    dirs = []
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if (x0 == x1) == (y0 == y1):
            raise DiagramError("path segments must be axis parallel and non-degenerate")
        dirs.append(((x1 > x0) - (x1 < x0), (y1 > y0) - (y1 < y0)))
    for d0, d1 in zip(dirs, dirs[1:]):
        if d0[0] * d1[0] + d0[1] * d1[1] != 0:
            raise DiagramError("consecutive path segments must be perpendicular")

    def side(sign):
        out = []
        for k, (x, y) in enumerate(pts):
            if k == 0:
                (dx, dy), (nx_, ny) = (-dirs[0][0], -dirs[0][1]), (-dirs[0][1], dirs[0][0])
            elif k == len(pts) - 1:
                (dx, dy), (nx_, ny) = dirs[-1], (-dirs[-1][1], dirs[-1][0])
            else:
                a, b = dirs[k - 1], dirs[k]
                dx, dy = 0, 0
                nx_, ny = -a[1] - b[1], a[0] + b[0]
            out.append((x + eps * (dx + sign * nx_), y + eps * (dy + sign * ny)))
        return out
    return tuple(side(1) + side(-1)[::-1])


def _zpath_diagram(rows, labels, scale, shift) -> PolygonDiagram:
    """Thin curves around paths (x0, y0) -> (x1, y0) -> (x1, y1) -> (x2, y1)."""
    polys = []
    for x0, y0, x1, y1, x2 in rows:
        path = [(x0, y0), (x1, y0), (x1, y1), (x2, y1)]
        poly = thicken_path(path, Q(1, 4))
        polys.append(tuple(((x - shift[0]) * scale, (y - shift[1]) * scale) for x, y in poly))
    return PolygonDiagram(tuple(polys), tuple(labels))


# Integer-rank coordinates of twelve three-segment paths.  Two paths meet
# exactly when the corresponding icosahedron vertices are not adjacent, so
# the thickened curves have the icosahedron as non-incidence graph.
ICOSA_PATHS = (
    ("u4", (31, 12, 24, 20, 3)), ("u3", (1, 23, 32, 11, 20)), ("l3", (25, 18, 13, 4, 12)),
    ("l2", (34, 15, 15, 6, 28)), ("u1", (27, 16, 19, 24, 6)), ("t", (26, 3, 10, 9, 30)),
    ("u2", (5, 21, 9, 2, 36)), ("l0", (33, 22, 2, 7, 16)), ("l4", (14, 1, 18, 17, 21)),
    ("b", (8, 8, 11, 19, 35)), ("l1", (7, 5, 29, 13, 23)), ("u0", (4, 10, 22, 14, 17)),
)

BUILTIN_DIAGRAMS["icosa"] = lambda: _zpath_diagram(
    [r for _, r in ICOSA_PATHS], [lab for lab, _ in ICOSA_PATHS], Q(1, 24), (Q(37, 2), Q(25, 2)))


def builtin_diagram(name: str):
    try:
        make = BUILTIN_DIAGRAMS[name]
    except KeyError:
        raise DiagramError(f"unknown diagram {name!r}; choose from {sorted(BUILTIN_DIAGRAMS)}")
    d = make()
    validate(d)
    return d

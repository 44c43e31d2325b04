"""The braid images of a circle diagram's right-angled Artin group.

For circle i with curves B_i, C_i, D_i the generator image is the product of
Dehn twists ``T_B * T_D^2 * T_C^-2 * T_B``.  Braid words act left to right,
so a product of mapping classes written with the rightmost factor acting
first is serialized right to left; since C_i and D_i are disjoint the middle
factors commute and the serialization below is the same element either way.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .artin_words import ArtinWord, WordError
from .braid import (BraidWord, dehn_twist_word, equal_braids, free_reduce, full_twist_word,
                    identity, is_pure, is_trivial)
from .circle_diagram import (CircleDiagram, SurfaceData, TwistCurveSet, build_surface,
                             non_incidence_graph, twist_curves, validate)
from .graph import Graph
from .lamination import (LamCoords, RoundSpec, act_letters, growth_constant, log2_bounds,
                         norm, standard_coords, trace_components)
from .polygons import point_in_polygon

# +1: the point push of the outer annulus puncture uses positive full twists
# on D and negative ones on C; -1 flips every twist at once.
ORIENTATION = 1


class RelationFailure(RuntimeError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


@dataclass(frozen=True)
class CurveRecord:
    name: str
    coords: str
    twist_length: int
    conjugator: str
    boundary: bool = False


@dataclass
class EmbeddingSpec:
    graph: Graph
    m: int
    gen_words: dict
    provenance: dict = field(default_factory=dict)
    surface: SurfaceData | None = None
    curves: TwistCurveSet | None = None

    def word(self, label: str, sign: int = 1) -> BraidWord:
        w = self.gen_words[label]
        return w if sign > 0 else w.inverse()

    def max_length(self) -> int:
        return max((len(w) for w in self.gen_words.values()), default=0)

    def to_json(self) -> dict:
        return {"graph": json.loads(self.graph.to_json()), "m": self.m,
                "gen_words": {k: str(v) for k, v in self.gen_words.items()},
                "provenance": self.provenance}

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def from_json(cls, data) -> "EmbeddingSpec":
        if isinstance(data, str):
            data = json.loads(data)
        g = data["graph"]
        g = Graph.from_json(g if isinstance(g, str) else json.dumps(g))
        m = int(data["m"])
        words = {k: BraidWord.parse(m, v) for k, v in data["gen_words"].items()}
        return cls(g, m, words, data.get("provenance", {}))


def _twist(poly, surface: SurfaceData, direction: int, budget: int, name: str):
    punct = surface.puncture_order
    m = len(punct)
    enclosed = sum(1 for p in punct if point_in_polygon(p, poly))
    if enclosed == m:
        # boundary parallel: its twist is the central full twist
        w = full_twist_word(m, RoundSpec(1, m)) ** direction
        return w, CurveRecord(name, LamCoords.zero(m).dump(), len(w), "", True)
    (c,) = trace_components([poly], punct)
    if c is None:
        return identity(m), CurveRecord(name, "", 0, "")
    w, conj = dehn_twist_word(c, direction, budget=budget)
    return w, CurveRecord(name, c.dump(), len(w), str(conj))


def generator_word(surface: SurfaceData, curves: TwistCurveSet, i: int,
                   budget: int = 10**6, orientation: int = ORIENTATION):
    label = surface.diagram.labels[i]
    cv = curves.curves[i]
    wb, rb = _twist(cv.B, surface, orientation, budget, f"B_{label}")
    wc, rc = _twist(cv.C, surface, orientation, budget, f"C_{label}")
    wd, rd = _twist(cv.D, surface, orientation, budget, f"D_{label}")
    f = free_reduce(wb * wd ** 2 * wc ** -2 * wb)
    return f, (rb, rc, rd)


def relation_audit(graph: Graph, words: dict) -> list[tuple[str, str, bool, bool]]:
    """(u, v, is_edge, commutes) for every pair of generators."""
    out = []
    for u, v in itertools.combinations(graph.vertices, 2):
        a, b = words[u], words[v]
        comm = is_trivial(a * b * a.inverse() * b.inverse())
        out.append((u, v, graph.has_edge(u, v), comm))
    return out


def build_embedding(d: CircleDiagram, budget: int = 10**6, orientation: int = ORIENTATION,
                    check: bool = True) -> EmbeddingSpec:
    validate(d)
    surface = build_surface(d)
    curves = twist_curves(surface)
    g = non_incidence_graph(d)
    words, records = {}, {}
    for i, label in enumerate(d.labels):
        f, recs = generator_word(surface, curves, i, budget, orientation)
        words[label] = f
        records[label] = [r.__dict__ for r in recs]
    spec = EmbeddingSpec(g, surface.m, words, {
        "diagram": d.to_json(), "surface": surface.summary(), "orientation": orientation,
        "curves": records}, surface, curves)
    if check:
        for label, w in words.items():
            if not is_pure(w):
                raise RelationFailure(f"image of {label} is not a pure braid", (label,))
        for u, v, edge, comm in relation_audit(g, words):
            if edge != comm:
                what = "do not commute" if edge else "commute"
                raise RelationFailure(f"images of {u} and {v} {what}", (u, v))
    return spec


def apply(e: EmbeddingSpec, w: ArtinWord) -> BraidWord:
    if w.graph != e.graph:
        raise WordError("word is over a different graph")
    letters = []
    for label, s in w.letters:
        letters.extend(e.word(label, s).letters)
    return free_reduce(BraidWord(e.m, tuple(letters)))


def _disjoint_annuli(surface: SurfaceData, i: int, j: int) -> bool:
    from .circle_diagram import _relation
    a, b = surface.diagram.circles[i], surface.diagram.circles[j]
    return _relation(a, b) in ("apart", "nested")


def support_check(e: EmbeddingSpec) -> list[dict]:
    """Test curves away from each annulus, and whether each f_i fixes them.

    For circle i the test curves are the core, push-off and band curves of
    every circle whose annulus misses A_i, and the band curve of every other
    circle whose anchor lies well away from circle i.  Returns one record per
    (generator, test curve) with ``fixed`` set accordingly.
    """
    s, tc = e.surface, e.curves
    if s is None or tc is None:
        raise ValueError("support_check needs an embedding built from a diagram")
    d = s.diagram
    punct = s.puncture_order
    report = []
    for i, label in enumerate(d.labels):
        f = e.gen_words[label]
        tests = []
        for j, other in enumerate(d.labels):
            if j == i:
                continue
            if _disjoint_annuli(s, i, j):
                cv = tc.curves[j]
                tests += [(f"C_{other}", cv.C), (f"D_{other}", cv.D), (f"B_{other}", cv.B)]
            elif d.circles[i].far_from(s.anchors[j], 2 * s.width):
                tests.append((f"B_{other}", tc.curves[j].B))
        for name, poly in tests:
            (c,) = trace_components([poly], punct)
            if c is None:
                continue
            report.append({"generator": label, "curve": name,
                           "fixed": act_letters(c, f.letters) == c})
    return report


# ----------------------------------------------------------------------
# complexity
# ----------------------------------------------------------------------

DENOM = 1024


def complexity_interval(m: int, beta: BraidWord) -> tuple[Fraction, Fraction]:
    """Certified bounds on log2 norm(beta E) - log2 norm(E)."""
    if beta.m != m:
        raise ValueError("strand count mismatch")
    e = standard_coords(m)
    img = act_letters(e, beta.letters)
    nlo, nhi = log2_bounds(norm(img), DENOM)
    elo, ehi = log2_bounds(norm(e), DENOM)
    return nlo - ehi, nhi - elo


def complexity(m: int | EmbeddingSpec, beta: BraidWord) -> Fraction:
    """log2 norm(beta E) - log2 norm(E), to within 1/1024."""
    if isinstance(m, EmbeddingSpec):
        m = m.m
    lo, hi = complexity_interval(m, beta)
    mid = (lo + hi) / 2
    return Fraction(round(mid * DENOM), DENOM)


def certified_lower_bound(m: int, beta: BraidWord) -> int:
    """ceil(complexity / kappa) using the certified lower end of the complexity."""
    lo, _ = complexity_interval(m, beta)
    if lo <= 0:
        return 0
    return ceil(lo / growth_constant(m))


def equal_images(e: EmbeddingSpec, u: ArtinWord, v: ArtinWord) -> bool:
    return equal_braids(apply(e, u), apply(e, v))

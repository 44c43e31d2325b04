import itertools
from fractions import Fraction as F

import pytest

from raagbraid.circle_diagram import (Circle, CircleDiagram, DiagramError, OutsideDisk,
                                      PolygonDiagram, Tangency, TripleIntersection,
                                      bounded_face_count, build_surface, builtin_diagram,
                                      crossing_count, diagram_from_json, non_incidence_graph,
                                      thicken_path, twist_curves, validate)
from raagbraid.graph import builtin, complement, is_isomorphic, is_planar
from raagbraid.polygons import count_crossings, point_in_polygon


def diagram(*rows):
    return CircleDiagram(tuple(Circle(F(x), F(y), F(r)) for x, y, r in rows))


def test_builtin_graphs():
    assert not non_incidence_graph(builtin_diagram("crossing_pair")).edges
    assert len(non_incidence_graph(builtin_diagram("disjoint_pair")).edges) == 1
    g = non_incidence_graph(builtin_diagram("pentagon_c5"))
    assert is_isomorphic(g, builtin("cycle_5")) is not None
    with pytest.raises(DiagramError):
        builtin_diagram("hexagon")


def test_nested_circles_are_disjoint():
    d = diagram(("0", "0", "1/2"), ("1/10", "0", "1/5"))
    validate(d)
    assert len(non_incidence_graph(d).edges) == 1
    assert bounded_face_count(d) == 2


def test_validation_errors():
    with pytest.raises(Tangency):
        validate(diagram(("-1/4", "0", "1/4"), ("1/4", "0", "1/4")))
    with pytest.raises(OutsideDisk):
        validate(diagram(("1/2", "0", "1/2")))
    with pytest.raises(TripleIntersection):
        validate(diagram(("1/4", "0", "1/4"), ("0", "1/4", "1/4"), ("3/20", "1/5", "1/4")))
    with pytest.raises(DiagramError):
        validate(diagram(("0", "0", "0")))


def test_face_counts_and_squares():
    expect = {"single": (0, 1), "crossing_pair": (2, 3), "disjoint_pair": (0, 2),
              "pentagon_c5": (10, 11)}
    for name, (squares, faces) in expect.items():
        d = builtin_diagram(name)
        assert crossing_count(d) == squares
        assert bounded_face_count(d) == faces


@pytest.mark.parametrize("name,m", [("single", 3), ("disjoint_pair", 6), ("crossing_pair", 7),
                                    ("pentagon_c5", 21)])
def test_surface(name, m):
    d = builtin_diagram(name)
    s = build_surface(d)
    assert s.m == m == 2 * len(d) + bounded_face_count(d)
    assert len(s.squares) == crossing_count(d)
    xs = [p[0] for p in s.puncture_order]
    assert xs == sorted(xs) and len(set(xs)) == len(xs)
    # the two punctures of an annulus sit on opposite sides of its circle
    for c, (p_in, p_out) in zip(d.circles, s.annulus_punctures):
        assert c.power(p_in) < 0 < c.power(p_out)
        assert c.far_from(p_in, s.width / 4) and c.far_from(p_out, s.width / 4)
    # every face puncture lies off every annulus
    for p in s.face_punctures:
        assert all(c.far_from(p, s.width) for c in d.circles)


def test_twist_curves_enclose_the_right_punctures():
    d = builtin_diagram("pentagon_c5")
    s = build_surface(d)
    tc = twist_curves(s)
    for i, (c, cv) in enumerate(zip(d.circles, tc.curves)):
        inside = {p for p in s.puncture_order if c.power(p) < 0}
        assert {p for p in s.puncture_order if point_in_polygon(p, cv.C)} == inside
        assert {p for p in s.puncture_order if point_in_polygon(p, cv.D)} == \
            inside | {s.annulus_punctures[i][1]}
        assert count_crossings(cv.B, cv.C) == 2
        assert count_crossings(cv.C, cv.D) == 0


def test_json_roundtrip(tmp_path):
    d = builtin_diagram("pentagon_c5")
    assert CircleDiagram.from_json(d.to_json()) == d
    assert diagram_from_json(d.to_json()) == d
    p = builtin_diagram("icosa")
    assert diagram_from_json(p.to_json()) == p
    with pytest.raises(DiagramError):
        CircleDiagram.from_json({"circles": [{"cx": "x"}]})


def test_icosa_diagram():
    d = builtin_diagram("icosa")
    assert isinstance(d, PolygonDiagram) and len(d) == 12
    g = non_incidence_graph(d)
    ico = builtin("icosahedron")
    assert g.edges == ico.edges
    assert all(g.degree(v) == 5 for v in g.vertices)
    assert not is_planar(complement(g)).planar
    # 36 crossing pairs; pairs cross in 4 or 8 points (thin curves around paths)
    crossing_pairs = [(a, b) for a, b in itertools.combinations(d.polygons, 2)
                      if count_crossings(a, b)]
    assert len(crossing_pairs) == 36
    assert crossing_count(d) == 172
    assert bounded_face_count(d) == 173
    with pytest.raises(DiagramError):
        build_surface(d)


def test_thicken_path():
    poly = thicken_path([(0, 0), (4, 0), (4, 3)], F(1, 4))
    assert len(poly) == 6
    assert point_in_polygon((F(2), F(0)), poly) and point_in_polygon((F(4), F(2)), poly)
    assert not point_in_polygon((F(2), F(1)), poly)
    with pytest.raises(DiagramError):
        thicken_path([(0, 0), (1, 1)], F(1, 4))
    with pytest.raises(DiagramError):
        thicken_path([(0, 0), (2, 0), (3, 0)], F(1, 4))


def test_polygon_diagram_errors():
    sq = [("0", "0"), ("1/2", "0"), ("1/2", "1/2"), ("0", "1/2")]
    touching = [("1/2", "0"), ("3/4", "0"), ("3/4", "1/2"), ("1/2", "1/2")]
    with pytest.raises(Tangency):
        validate(PolygonDiagram((sq, touching)))
    far = [("0", "0"), ("1", "0"), ("1", "1")]
    with pytest.raises(OutsideDisk):
        validate(PolygonDiagram((far,)))

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagbraid.graph import (Graph, GraphError, SizeLimitExceeded, builtin, classify_subdivision,
                             complement, is_isomorphic, is_planar, verify_rotation)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    vs = tuple(f"x{i}" for i in range(n))
    pairs = list(itertools.combinations(vs, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(vs, [p for p, keep in zip(pairs, mask) if keep])


def test_complement_examples():
    assert complement(builtin("complete_4")).edges == frozenset()
    c5 = builtin("cycle_5")
    assert is_isomorphic(c5, complement(c5)) is not None


def test_complement_of_icosahedron_adds_antipodal_edges():
    ico = builtin("icosahedron")
    comp = complement(ico)
    # icosahedron plus a perfect matching of antipodes: 6-regular after complementing twice
    assert all(comp.degree(v) == 6 for v in comp.vertices)
    antipode = {}
    for v in ico.vertices:
        far = [u for u in ico.vertices if u != v and not ico.has_edge(u, v)
               and not set(ico.neighbours(u)) & set(ico.neighbours(v))]
        assert len(far) == 1
        antipode[v] = far[0]
    extra = Graph(ico.vertices, ico.edges | {frozenset((v, antipode[v])) for v in ico.vertices})
    assert is_isomorphic(comp, extra) is not None


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_complement_involution(g):
    cc = complement(complement(g))
    assert cc.vertices == g.vertices and cc.edges == g.edges


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_planarity_certificates(g):
    res = is_planar(g)
    v, e = len(g), len(g.edges)
    if res.planar:
        assert verify_rotation(g, res.rotation)
        assert v < 3 or e <= 3 * v - 6
    else:
        assert res.witness.edges <= g.edges
        assert classify_subdivision(res.witness) == res.witness_kind


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_isomorphism_under_relabelling(g, rnd):
    perm = list(g.vertices)
    rnd.shuffle(perm)
    mapping = dict(zip(g.vertices, [f"y{p}" for p in perm]))
    h = g.relabel(mapping)
    iso = is_isomorphic(g, h)
    assert iso is not None
    assert {frozenset(iso[x] for x in e) for e in g.edges} == set(h.edges)


def test_isomorphism_examples():
    assert is_isomorphic(builtin("path_3"), builtin("cycle_3")) is None


def test_builtins():
    ico = builtin("icosahedron")
    assert len(ico) == 12 and len(ico.edges) == 30
    for v in ico.vertices:
        link = ico.induced(ico.neighbours(v))
        assert is_isomorphic(link, builtin("cycle_5")) is not None
    assert len(builtin("cycle_5").edges) == 5
    p1 = builtin("path_1")
    assert len(p1) == 1 and not p1.edges
    with pytest.raises(GraphError):
        builtin("wheel_5")


def test_planarity_examples():
    assert is_planar(builtin("cycle_5")).planar
    assert is_planar(builtin("icosahedron")).planar
    res = is_planar(complement(builtin("icosahedron")))
    assert not res.planar and res.witness_kind == "K3,3"
    assert is_planar(builtin("complete_5")).witness_kind == "K5"


def test_errors():
    with pytest.raises(GraphError):
        Graph(("a", "a"))
    with pytest.raises(GraphError):
        Graph.from_edges(("a", "b"), [("a", "c")])
    with pytest.raises(SizeLimitExceeded):
        is_planar(builtin("path_65"))


def test_json_roundtrip():
    g = builtin("icosahedron")
    assert Graph.from_json(g.to_json()) == g

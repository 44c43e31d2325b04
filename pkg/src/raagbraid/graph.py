"""Simplicial graphs: complements, planarity certificates, isomorphism, builtins.

Vertex labels are opaque strings and keep their construction order, so every
derived object (complements, words, reports) is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import networkx as nx

MAX_VERTICES = 64


class GraphError(ValueError):
    """Malformed graph data or an unsupported request."""


class SizeLimitExceeded(GraphError):
    pass


def _edge(u: str, v: str) -> frozenset:
    return frozenset((u, v))


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("vertex labels must be pairwise distinct")
        object.__setattr__(self, "vertices", verts)
        vset = set(verts)
        edges = set()
        for e in self.edges:
            e = frozenset(e)
            if len(e) != 2:
                raise GraphError(f"loop or malformed edge {sorted(e)}")
            if not e <= vset:
                raise GraphError(f"edge {sorted(e)} uses an unknown vertex")
            edges.add(e)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_edges(cls, vertices, edge_list) -> "Graph":
        seen = set()
        for u, v in edge_list:
            e = _edge(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {u}-{v}")
            seen.add(e)
        return cls(tuple(vertices), frozenset(seen))

    def __len__(self) -> int:
        return len(self.vertices)

    def has_edge(self, u: str, v: str) -> bool:
        return _edge(u, v) in self.edges

    def neighbours(self, v: str) -> list[str]:
        return [u for u in self.vertices if u != v and _edge(u, v) in self.edges]

    def degree(self, v: str) -> int:
        return len(self.neighbours(v))

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def edge_list(self) -> list[tuple[str, str]]:
        """Edges as pairs, ordered by vertex position."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        out = [tuple(sorted(e, key=pos.__getitem__)) for e in self.edges]
        return sorted(out, key=lambda e: (pos[e[0]], pos[e[1]]))

    def induced(self, vs) -> "Graph":
        keep = [v for v in self.vertices if v in set(vs)]
        return Graph(tuple(keep), frozenset(e for e in self.edges if e <= set(keep)))

    def relabel(self, mapping: dict) -> "Graph":
        return Graph(tuple(mapping[v] for v in self.vertices),
                     frozenset(frozenset(mapping[x] for x in e) for e in self.edges))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edge_list())
        return g

    # -- serialisation -------------------------------------------------
    def to_json(self) -> str:
        return json.dumps({"vertices": list(self.vertices),
                           "edges": [list(e) for e in self.edge_list()]})

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            data = json.loads(text)
            return cls.from_edges(data["vertices"], [tuple(e) for e in data["edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"bad graph file: {exc}") from exc

    @classmethod
    def load(cls, path) -> "Graph":
        return cls.from_json(Path(path).read_text())


def complement(g: Graph) -> Graph:
    """The opposite graph: same vertices, edges exactly on the non-edges of ``g``."""
    edges = frozenset(_edge(u, v) for u, v in combinations(g.vertices, 2)
                      if not g.has_edge(u, v))
    return Graph(g.vertices, edges)


# ----------------------------------------------------------------------
# Planarity
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    rotation: dict | None = None      # vertex -> neighbours in clockwise order
    witness: Graph | None = None      # subdivision of K5 or K3,3
    witness_kind: str | None = None   # "K5" or "K3,3"

    def __bool__(self):
        return self.planar


def _check_size(*graphs):
    for g in graphs:
        if len(g) > MAX_VERTICES:
            raise SizeLimitExceeded(f"{len(g)} vertices exceeds the limit of {MAX_VERTICES}")


def rotation_faces(g: Graph, rotation: dict) -> int:
    """Count the faces traced out by a rotation system (all components)."""
    darts = {(u, v) for e in g.edges for u, v in (tuple(e), tuple(e)[::-1])}
    faces = 0
    while darts:
        start = dart = next(iter(darts))
        while True:
            darts.discard(dart)
            u, v = dart
            nbrs = rotation[v]
            # next dart: the neighbour after u in v's clockwise order
            w = nbrs[(nbrs.index(u) + 1) % len(nbrs)]
            dart = (v, w)
            if dart == start:
                break
        faces += 1
    return faces


def _components(g: Graph) -> int:
    return nx.number_connected_components(g.to_networkx()) if len(g) else 0


def verify_rotation(g: Graph, rotation: dict) -> bool:
    """Euler check: V - E + F = 1 + C for a genus-zero rotation system."""
    for v in g.vertices:
        if sorted(rotation.get(v, [])) != sorted(g.neighbours(v)):
            return False
    isolated = sum(1 for v in g.vertices if g.degree(v) == 0)
    nontrivial = _components(g) - isolated
    # each nontrivial component contributes V_c - E_c + F_c = 2
    faces = rotation_faces(g, rotation)
    return (len(g) - isolated) - len(g.edges) + faces == 2 * nontrivial


def classify_subdivision(h: Graph) -> str | None:
    """Return "K5" or "K3,3" if ``h`` (isolated vertices ignored) subdivides one."""
    adj = {v: set(h.neighbours(v)) for v in h.vertices if h.degree(v) > 0}
    if any(len(n) == 1 for n in adj.values()):
        return None
    branch = [v for v, n in adj.items() if len(n) > 2]
    # follow each degree-2 chain between branch vertices
    links = []
    for b in branch:
        for nxt in adj[b]:
            prev, cur = b, nxt
            while cur not in branch:
                a, c = adj[cur]
                prev, cur = cur, (c if a == prev else a)
            links.append(frozenset((b, cur)) if cur != b else None)
    if None in links:
        return None
    # every chain was seen from both ends
    multiset = {}
    for lk in links:
        multiset[lk] = multiset.get(lk, 0) + 1
    if any(c != 2 for c in multiset.values()):
        return None
    # the chains must also cover every edge exactly once (no stray cycles)
    n_chain_edges = sum(1 for _ in links) // 2
    pairs = set(multiset)
    if n_chain_edges != len(pairs):
        return None
    reachable = set(branch)
    for b in branch:
        stack = [b]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in reachable:
                    reachable.add(y)
                    stack.append(y)
    if reachable != set(adj):
        return None
    if len(branch) == 5 and all(len(adj[b]) == 4 for b in branch):
        if pairs == {frozenset(p) for p in combinations(branch, 2)}:
            return "K5"
    if len(branch) == 6 and all(len(adj[b]) == 3 for b in branch):
        # bipartition from the first vertex's partners
        b0 = branch[0]
        other = {next(iter(p - {b0})) for p in pairs if b0 in p}
        side = set(branch) - other
        want = {frozenset((x, y)) for x in side for y in other}
        if len(side) == 3 and pairs == want:
            return "K3,3"
    return None


def is_planar(g: Graph) -> PlanarityResult:
    """Planarity with a certificate.

    Planar graphs come back with a clockwise rotation system that has been
    checked against Euler's formula; non-planar ones with a Kuratowski
    subgraph that has been checked to subdivide K5 or K3,3.
    """
    _check_size(g)
    v, e = len(g), len(g.edges)
    planar, cert = nx.check_planarity(g.to_networkx(), counterexample=True)
    if planar:
        rotation = {x: list(cert.neighbors_cw_order(x)) for x in g.vertices}
        if not verify_rotation(g, rotation):
            raise AssertionError("planarity backend returned an invalid embedding")
        assert v < 3 or e <= 3 * v - 6
        return PlanarityResult(True, rotation=rotation)
    witness = Graph(g.vertices, frozenset(_edge(a, b) for a, b in cert.edges()))
    if not witness.edges <= g.edges:
        raise AssertionError("witness is not a subgraph")
    kind = classify_subdivision(witness)
    if kind is None:
        raise AssertionError("planarity backend returned an invalid witness")
    return PlanarityResult(False, witness=witness, witness_kind=kind)


# ----------------------------------------------------------------------
# Isomorphism
# ----------------------------------------------------------------------

def is_isomorphic(g: Graph, h: Graph) -> dict | None:
    """A vertex bijection carrying edges of ``g`` onto edges of ``h``, or None."""
    _check_size(g, h)
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return None
    gadj = {v: set(g.neighbours(v)) for v in g.vertices}
    hadj = {v: set(h.neighbours(v)) for v in h.vertices}

    def refine(adj):
        # one round of degree refinement: (degree, sorted neighbour degrees)
        return {v: (len(n), tuple(sorted(len(adj[u]) for u in n))) for v, n in adj.items()}

    gcol, hcol = refine(gadj), refine(hadj)
    if sorted(gcol.values()) != sorted(hcol.values()):
        return None
    order = sorted(g.vertices, key=lambda v: (-len(gadj[v]), g.index(v)))
    # prefer vertices adjacent to already-placed ones
    placed_order = []
    remaining = list(order)
    while remaining:
        best = max(remaining, key=lambda v: (sum(u in placed_order for u in gadj[v]),
                                             len(gadj[v])))
        placed_order.append(best)
        remaining.remove(best)

    mapping: dict = {}
    used: set = set()

    def extend(k):
        if k == len(placed_order):
            return True
        v = placed_order[k]
        for w in h.vertices:
            if w in used or hcol[w] != gcol[v]:
                continue
            if all((u in gadj[v]) == (mapping[u] in hadj[w]) for u in mapping):
                mapping[v] = w
                used.add(w)
                if extend(k + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    if not extend(0):
        return None
    assert {_edge(mapping[a], mapping[b]) for a, b in map(tuple, g.edges)} == set(h.edges)
    return dict(mapping)


# ----------------------------------------------------------------------
# Builtins
# ----------------------------------------------------------------------

def _labels(n):
    return tuple(f"v{i}" for i in range(1, n + 1))


def path_graph(n: int) -> Graph:
    vs = _labels(n)
    return Graph.from_edges(vs, list(zip(vs, vs[1:])))


def cycle_graph(n: int) -> Graph:
    vs = _labels(n)
    if n < 3:
        raise GraphError("a simple cycle needs at least 3 vertices")
    return Graph.from_edges(vs, list(zip(vs, vs[1:] + vs[:1])))


def complete_graph(n: int) -> Graph:
    vs = _labels(n)
    return Graph.from_edges(vs, list(combinations(vs, 2)))


# top vertex, upper pentagon u0..u4, lower pentagon l0..l4, bottom vertex
ICOSAHEDRON_EDGES = (
    [("t", f"u{i}") for i in range(5)]
    + [(f"u{i}", f"u{(i + 1) % 5}") for i in range(5)]
    + [(f"u{i}", f"l{i}") for i in range(5)]
    + [(f"u{i}", f"l{(i + 1) % 5}") for i in range(5)]
    + [(f"l{i}", f"l{(i + 1) % 5}") for i in range(5)]
    + [("b", f"l{i}") for i in range(5)]
)
ICOSAHEDRON_VERTICES = ("t",) + tuple(f"u{i}" for i in range(5)) \
    + tuple(f"l{i}" for i in range(5)) + ("b",)


def icosahedron() -> Graph:
    return Graph.from_edges(ICOSAHEDRON_VERTICES, ICOSAHEDRON_EDGES)


def builtin(name: str) -> Graph:
    """``path_n``, ``cycle_n``, ``complete_n`` or ``icosahedron``."""
    if name == "icosahedron":
        return icosahedron()
    kind, _, num = name.rpartition("_")
    makers = {"path": path_graph, "cycle": cycle_graph, "complete": complete_graph}
    if kind not in makers or not num.isdigit() or int(num) < 1:
        raise GraphError(f"unknown builtin graph {name!r}")
    return makers[kind](int(num))

"""Experiment harness and command line front end.

Every experiment returns an ExperimentReport: a table of rows plus fitted
constants and named pass/fail verdicts.  Randomized experiments derive one
seed per sample from the master seed, so reruns are byte-identical.

Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 bad input,
3 relaxation budget exhausted.
"""

from __future__ import annotations

import argparse
import functools
import io
import itertools
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .artin_words import ArtinWord, WordError, equal, geodesic_length, random_geodesic, reduce
from .braid import BraidError, BraidWord, exponent_sum, is_pure, test_curves
from .circle_diagram import (BUILTIN_DIAGRAMS, DiagramError, PolygonDiagram, bounded_face_count,
                             builtin_diagram, crossing_count, load_diagram, non_incidence_graph,
                             validate)
from .coxeter import (commutator_index_check, cox_length, cox_to_artin, in_commutator,
                      random_commutator_element)
from .embedding import (EmbeddingSpec, RelationFailure, apply, build_embedding,
                        certified_lower_bound, complexity, relation_audit, support_check)
from .graph import Graph, GraphError, builtin, complement, is_isomorphic, is_planar
from .lamination import BudgetExhausted, LaminationError, growth_constant
from .polygons import PolygonError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

# the non-incidence graph each builtin diagram is meant to realize
EXPECTED_GRAPH = {
    "single": lambda: Graph(("c1",)),
    "crossing_pair": lambda: Graph(("c1", "c2")),
    "disjoint_pair": lambda: Graph.from_edges(("c1", "c2"), [("c1", "c2")]),
    "pentagon_c5": lambda: builtin("cycle_5"),
    "icosa": lambda: builtin("icosahedron"),
}


def _q(x) -> str:
    return str(x) if isinstance(x, Fraction) else repr(x) if isinstance(x, float) else str(x)


@dataclass
class ExperimentReport:
    name: str
    params: dict
    columns: list
    rows: list = field(default_factory=list)
    fitted: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)     # (name, passed, detail)
    notes: dict = field(default_factory=dict)

    def add(self, *row):
        self.rows.append(tuple(row))

    def verdict(self, name: str, passed: bool, detail: str = ""):
        self.verdicts.append((name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.verdicts)

    def to_tsv(self) -> str:
        buf = io.StringIO()
        buf.write("\t".join(self.columns) + "\n")
        for row in self.rows:
            buf.write("\t".join(_q(x) for x in row) + "\n")
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"experiment": self.name, "params": self.params,
                "fitted": {k: _q(v) for k, v in self.fitted.items()},
                "verdicts": [{"name": n, "pass": ok, "detail": d} for n, ok, d in self.verdicts],
                "notes": self.notes, "rows": len(self.rows), "passed": self.passed}

    def write(self, out_dir: str) -> None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"{self.name}.tsv"), "w") as fh:
            fh.write(self.to_tsv())
        with open(os.path.join(out_dir, f"{self.name}.json"), "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            data = self.to_json()
            data["columns"] = self.columns
            data["table"] = [[_q(x) for x in r] for r in self.rows]
            return json.dumps(data, indent=1, sort_keys=True)
        lines = [self.to_tsv().rstrip("\n")]
        for n, ok, d in self.verdicts:
            lines.append(f"# {'PASS' if ok else 'FAIL'} {n} {d}".rstrip())
        return "\n".join(lines)


def sample_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


# ----------------------------------------------------------------------
# presentations
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[tuple[str, int], ...], ...] = ()

    def __post_init__(self):
        gens = set(self.generators)
        for rel in self.relators:
            for g, s in rel:
                if g not in gens:
                    raise WordError(f"relator uses undeclared generator {g!r}")
                if s not in (1, -1):
                    raise WordError(f"bad sign {s}")

    @classmethod
    def parse(cls, generators, relators) -> "Presentation":
        """Relators as text, e.g. ``"x y x^-1 y^-1"``."""
        rels = []
        for text in relators:
            rel = []
            for tok in text.split():
                if tok.endswith("^-1"):
                    rel.append((tok[:-3], -1))
                else:
                    rel.append((tok, 1))
            rels.append(tuple(rel))
        return cls(tuple(generators), tuple(rels))


def check_presentation_hom(p: Presentation, images: dict, g: Graph) -> dict:
    """Whether generator images in G(g) kill every relator."""
    missing = [x for x in p.generators if x not in images]
    if missing:
        raise WordError(f"no image for generators {missing}")
    imgs = {x: (w if isinstance(w, ArtinWord) else ArtinWord.parse(g, w))
            for x, w in images.items()}
    failures = []
    for rel in p.relators:
        letters = []
        for x, s in rel:
            w = imgs[x] if s > 0 else imgs[x].inverse()
            letters.extend(w.letters)
        img = ArtinWord(g, tuple(letters))
        if not equal(img, ArtinWord(g, ())):
            failures.append(" ".join(x if s > 0 else f"{x}^-1" for x, s in rel))
    return {"ok": not failures, "failures": failures, "relators": len(p.relators)}


# ----------------------------------------------------------------------
# inputs
# ----------------------------------------------------------------------

def load_graph(spec: str) -> Graph:
    if os.path.exists(spec):
        return Graph.load(spec)
    return builtin(spec)


def load_diagram_arg(spec: str):
    if spec in BUILTIN_DIAGRAMS:
        return builtin_diagram(spec)
    if os.path.exists(spec):
        d = load_diagram(spec)
        validate(d)
        return d
    raise DiagramError(f"no builtin diagram or file named {spec!r}")


@functools.lru_cache(maxsize=None)
def builtin_embedding(name: str, budget: int = 10**6) -> EmbeddingSpec:
    return build_embedding(builtin_diagram(name), budget=budget)


def load_embedding(spec: str, budget: int = 10**6) -> EmbeddingSpec:
    if spec in BUILTIN_DIAGRAMS:
        return builtin_embedding(spec, budget)
    with open(spec) as fh:
        data = json.load(fh)
    if "gen_words" in data:
        return EmbeddingSpec.from_json(data)
    return build_embedding(load_diagram(spec), budget=budget)


# ----------------------------------------------------------------------
# fitting
# ----------------------------------------------------------------------

def fit_line(xs, ys) -> tuple[float, float, float]:
    """Least squares slope, intercept and R^2."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    ss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss if ss > 0 else 1.0
    return float(slope), float(icept), r2


# ----------------------------------------------------------------------
# experiments
# ----------------------------------------------------------------------

GROWTH_STEP = 1 - Fraction(1, 16)


def cmd_growth(diagram: str, generator: str | None, p_max: int,
               budget: int = 10**6) -> ExperimentReport:
    e = load_embedding(diagram, budget)
    gens = [generator] if generator else list(e.graph.vertices)
    rep = ExperimentReport("growth", {"diagram": diagram, "generators": gens, "p_max": p_max},
                           ["generator", "p", "complexity", "step"])
    worst = None
    for g in gens:
        if g not in e.gen_words:
            raise WordError(f"{g!r} is not a generator of {diagram}")
        prev = Fraction(0)
        w = e.gen_words[g]
        beta = BraidWord(e.m, ())
        for p in range(1, p_max + 1):
            beta = beta * w
            c = complexity(e.m, beta)
            step = c - prev
            rep.add(g, p, c, step)
            if p >= 2 and (worst is None or step < worst):
                worst = step
            prev = c
    rep.fitted["min_step"] = worst if worst is not None else Fraction(0)
    rep.verdict("step >= 15/16 for p >= 2", worst is None or worst >= GROWTH_STEP,
                f"min step {worst}")
    return rep


def cmd_sandwich(diagram: str, l_max: int, samples: int, seed: int,
                 budget: int = 10**6) -> ExperimentReport:
    e = load_embedding(diagram, budget)
    kappa = growth_constant(e.m)
    fmax = e.max_length()
    rep = ExperimentReport("sandwich", {"diagram": diagram, "l_max": l_max, "samples": samples,
                                        "seed": seed},
                           ["L", "sample", "word", "braid_length", "complexity"])
    upper_ok = True
    mins, lengths, allx, ally = [], [], [], []
    for L in range(1, l_max + 1):
        lo = None
        for k in range(samples):
            w = random_geodesic(e.graph, L, sample_seed(seed, L * samples + k))
            beta = apply(e, w)
            c = complexity(e.m, beta)
            rep.add(L, k, str(w), len(beta), c)
            if c > kappa * fmax * L + 1:
                upper_ok = False
            lo = c if lo is None else min(lo, c)
            allx.append(L)
            ally.append(float(c))
        mins.append(lo)
        lengths.append(L)
    slope, icept, r2 = fit_line(lengths, [float(x) for x in mins])
    aslope, aicept, ar2 = fit_line(allx, ally)
    rep.fitted.update({"kappa": kappa, "f_max": fmax, "min_slope": slope,
                       "min_intercept": icept, "min_r2": r2, "mean_slope": aslope,
                       "mean_intercept": aicept, "mean_r2": ar2,
                       "n_generators": len(e.graph),
                       "log2_curves": float(np.log2(3 * len(e.graph)))})
    rep.notes["per_L_min"] = [_q(x) for x in mins]
    rep.verdict("upper: complexity <= kappa*|f|max*L + 1", upper_ok)
    mono = all(a <= b for a, b in zip(mins, mins[1:]))
    rep.verdict("lower: per-L minimum nondecreasing", mono)
    rep.verdict("lower: slope of minima >= 0.05", slope >= 0.05, f"slope {slope:.4f}")
    rep.verdict("lower: R^2 of minima >= 0.9", r2 >= 0.9, f"R2 {r2:.4f}")
    return rep


def cmd_lowerbound(m: int, braid: str) -> ExperimentReport:
    beta = BraidWord.parse(m, braid)
    rep = ExperimentReport("lowerbound", {"m": m, "braid": braid},
                           ["length", "complexity", "kappa", "bound"])
    b = certified_lower_bound(m, beta)
    rep.add(len(beta), complexity(m, beta), growth_constant(m), b)
    rep.verdict("bound <= word length", b <= len(beta))
    return rep


def cmd_complexity(m: int, braid: str) -> ExperimentReport:
    beta = BraidWord.parse(m, braid)
    rep = ExperimentReport("complexity", {"m": m, "braid": braid},
                           ["length", "exponent_sum", "pure", "complexity"])
    rep.add(len(beta), exponent_sum(beta), is_pure(beta), complexity(m, beta))
    return rep


def cmd_cox(graph: str, length: int, samples: int, seed: int) -> ExperimentReport:
    g = load_graph(graph)
    rep = ExperimentReport("cox", {"graph": graph, "length": length, "samples": samples,
                                   "seed": seed},
                           ["sample", "word", "len_W", "len_G", "image"])
    ok = True
    for k in range(samples):
        rng = random.Random(sample_seed(seed, k))
        w = random_commutator_element(g, length, rng)
        img = cox_to_artin(w)
        lw, lg = cox_length(w), geodesic_length(img)
        ok &= lw == lg and in_commutator(w)
        rep.add(k, str(w), lw, lg, str(img))
    rep.fitted["index"] = commutator_index_check(g)
    rep.verdict("len_G(phi(w)) == len_W(w)", ok)
    return rep


def cmd_diagram(action: str, diagram: str) -> ExperimentReport:
    d = load_diagram_arg(diagram)
    g = non_incidence_graph(d)
    rep = ExperimentReport(f"diagram_{action}", {"diagram": diagram}, ["key", "value"])
    if action == "info":
        kind = "polygons" if isinstance(d, PolygonDiagram) else "circles"
        rep.add("kind", kind)
        rep.add("curves", len(d))
        rep.add("crossing_points", crossing_count(d))
        rep.add("bounded_faces", bounded_face_count(d))
        rep.add("m", 2 * len(d) + bounded_face_count(d))
    elif action == "graph":
        for u, v in g.edge_list():
            rep.add("edge", f"{u} {v}")
        rep.notes["graph"] = json.loads(g.to_json())
    elif action == "check":
        if diagram in EXPECTED_GRAPH:
            iso = is_isomorphic(g, EXPECTED_GRAPH[diagram]())
            rep.add("isomorphic_to_expected", iso is not None)
            rep.verdict("non-incidence graph matches", iso is not None)
        pl = is_planar(g)
        rep.add("graph_planar", pl.planar)
        cp = is_planar(complement(g))
        rep.add("complement_planar", cp.planar)
        if not cp.planar:
            rep.add("complement_witness", cp.witness_kind)
            rep.add("witness_edges", len(cp.witness.edges))
        rep.verdict("planarity certificates verified", True)
    else:
        raise DiagramError(f"unknown diagram action {action!r}")
    return rep


def cmd_relations(diagram: str, budget: int = 10**6) -> ExperimentReport:
    d = load_diagram_arg(diagram)
    e = build_embedding(d, budget=budget, check=False)
    rep = ExperimentReport("relations", {"diagram": diagram, "m": e.m},
                           ["u", "v", "edge", "commute"])
    ok = True
    for u, v, edge, comm in relation_audit(e.graph, e.gen_words):
        rep.add(u, v, edge, comm)
        ok &= edge == comm
    pure = all(is_pure(w) for w in e.gen_words.values())
    rep.verdict("commutation pattern equals the graph", ok)
    rep.verdict("generator images are pure", pure)
    return rep


def cmd_support(diagram: str, budget: int = 10**6) -> ExperimentReport:
    e = load_embedding(diagram, budget)
    rep = ExperimentReport("support", {"diagram": diagram}, ["generator", "curve", "fixed"])
    recs = support_check(e)
    for r in recs:
        rep.add(r["generator"], r["curve"], r["fixed"])
    rep.verdict("every generator fixes its test curves", all(r["fixed"] for r in recs))
    return rep


def braid_signature(beta: BraidWord) -> tuple:
    """Complete invariant for equal_braids: exponent sum and test-curve images."""
    return (exponent_sum(beta),) + tuple(beta.act(c) for c in test_curves(beta.m))


def reduced_ball(g: Graph, radius: int) -> list[ArtinWord]:
    """One reduced representative of every element of length <= radius."""
    seen, out = set(), []
    gens = [(v, s) for v in g.vertices for s in (1, -1)]
    for n in range(radius + 1):
        for letters in itertools.product(gens, repeat=n):
            w = reduce(ArtinWord(g, letters))
            if len(w) == n and w.letters not in seen:
                seen.add(w.letters)
                out.append(w)
    return out


def cmd_injectivity(diagram: str, radius: int, budget: int = 10**6) -> ExperimentReport:
    e = load_embedding(diagram, budget)
    ball = reduced_ball(e.graph, radius)
    rep = ExperimentReport("injectivity", {"diagram": diagram, "radius": radius},
                           ["word", "braid_length"])
    sigs = {}
    clashes = []
    for w in ball:
        beta = apply(e, w)
        rep.add(str(w), len(beta))
        s = braid_signature(beta)
        if s in sigs:
            clashes.append((str(sigs[s]), str(w)))
        else:
            sigs[s] = w
    rep.fitted["elements"] = len(ball)
    rep.fitted["pairs"] = len(ball) * (len(ball) - 1) // 2
    rep.notes["clashes"] = clashes
    rep.verdict("distinct words have distinct images", not clashes, f"{len(clashes)} clashes")
    return rep


# ----------------------------------------------------------------------
# CLI
# ----------------------------------------------------------------------

def _emit(rep: ExperimentReport, args) -> int:
    if args.out:
        rep.write(args.out)
    print(rep.render(args.format))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_graph(args):
    g = load_graph(args.graph)
    if args.complement:
        g = complement(g)
    rep = ExperimentReport("graph", {"graph": args.graph, "complement": args.complement},
                           ["key", "value"])
    rep.add("vertices", len(g))
    rep.add("edges", len(g.edges))
    pl = is_planar(g)
    rep.add("planar", pl.planar)
    if not pl.planar:
        rep.add("witness", pl.witness_kind)
    if args.iso:
        iso = is_isomorphic(g, load_graph(args.iso))
        rep.add("isomorphism", json.dumps(iso, sort_keys=True) if iso else "none")
    rep.notes["graph"] = json.loads(g.to_json())
    return _emit(rep, args)


def _cmd_raag(args):
    g = load_graph(args.graph)
    w = ArtinWord.parse(g, args.word)
    r = reduce(w)
    rep = ExperimentReport("raag", {"graph": args.graph, "word": args.word},
                           ["word", "reduced", "length"] + [f"l_{v}" for v in g.vertices])
    counts = [sum(1 for x, _ in r.letters if x == v) for v in g.vertices]
    rep.add(str(w), str(r), len(r), *counts)
    return _emit(rep, args)


def _cmd_embed(args):
    d = load_diagram_arg(args.diagram)
    e = build_embedding(d, budget=args.budget)
    rep = ExperimentReport("embed", {"diagram": args.diagram, "m": e.m},
                           ["generator", "length", "word"])
    for k, w in e.gen_words.items():
        rep.add(k, len(w), str(w))
    rep.verdict("relation audit", True)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        e.dump(os.path.join(args.out, "embedding.json"))
    return _emit(rep, args)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="raagbraid",
                                 description="RAAG embeddings into braid groups and their checks")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=10**6)
    common.add_argument("--out", default=None, help="directory for .tsv/.json reports")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", parents=[common], help="graph facts and planarity")
    p.add_argument("graph", help="builtin name (path_n, cycle_n, complete_n, icosahedron) or file")
    p.add_argument("--complement", action="store_true")
    p.add_argument("--iso", default=None, help="second graph to test for isomorphism")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("raag", parents=[common], help="reduce a word in G(graph)")
    p.add_argument("graph")
    p.add_argument("word")
    p.set_defaults(func=_cmd_raag)

    p = sub.add_parser("cox", parents=[common], help="commutator subgroup into G(graph)")
    p.add_argument("graph")
    p.add_argument("--length", type=int, default=20)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=lambda a: _emit(cmd_cox(a.graph, a.length, a.samples, a.seed), a))

    p = sub.add_parser("diagram", parents=[common], help="circle diagram facts")
    p.add_argument("action", choices=("info", "graph", "check"))
    p.add_argument("diagram")
    p.set_defaults(func=lambda a: _emit(cmd_diagram(a.action, a.diagram), a))

    p = sub.add_parser("embed", parents=[common], help="build the braid images of a diagram")
    p.add_argument("diagram")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("complexity", parents=[common], help="complexity of a braid word")
    p.add_argument("m", type=int)
    p.add_argument("braid")
    p.set_defaults(func=lambda a: _emit(cmd_complexity(a.m, a.braid), a))

    p = sub.add_parser("lowerbound", parents=[common], help="certified word length lower bound")
    p.add_argument("m", type=int)
    p.add_argument("braid")
    p.set_defaults(func=lambda a: _emit(cmd_lowerbound(a.m, a.braid), a))

    p = sub.add_parser("verify", parents=[common], help="run a verification experiment")
    p.add_argument("experiment",
                   choices=("growth", "sandwich", "relations", "support", "injectivity"))
    p.add_argument("diagram")
    p.add_argument("--generator", default=None)
    p.add_argument("--pmax", type=int, default=12)
    p.add_argument("--lmax", type=int, default=25)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--radius", type=int, default=3)
    p.set_defaults(func=_cmd_verify)
    return ap


def _cmd_verify(a):
    if a.experiment == "growth":
        rep = cmd_growth(a.diagram, a.generator, a.pmax, a.budget)
    elif a.experiment == "sandwich":
        rep = cmd_sandwich(a.diagram, a.lmax, a.samples, a.seed, a.budget)
    elif a.experiment == "relations":
        rep = cmd_relations(a.diagram, a.budget)
    elif a.experiment == "support":
        rep = cmd_support(a.diagram, a.budget)
    else:
        rep = cmd_injectivity(a.diagram, a.radius, a.budget)
    return _emit(rep, a)


INPUT_ERRORS = (GraphError, WordError, DiagramError, BraidError, PolygonError, LaminationError,
                ValueError, OSError, KeyError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except RelationFailure as exc:
        print(f"relation failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

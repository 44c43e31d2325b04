"""Acceptance criteria 1-10.

Each test records one PASS/FAIL line (printed, and repeated in the terminal
summary) and then asserts it.  Wall-clock limits are part of each criterion.
"""

import itertools
import random
import time
from collections import Counter

import networkx as nx
import numba
import numpy as np

from raagbraid.artin_words import equal, reduce_codes
from raagbraid.braid import BraidWord, permutation
from raagbraid.coxeter import (CoxeterWord, commutator_index_check, cox_reduce, cox_to_artin,
                               random_commutator_element)
from raagbraid.embedding import certified_lower_bound, relation_audit, support_check
from raagbraid.graph import Graph, builtin, complement, is_isomorphic, is_planar
from raagbraid.harness_cli import (builtin_embedding, cmd_cox, cmd_diagram, cmd_growth,
                                   cmd_injectivity, cmd_sandwich, fit_line, sample_seed)
from raagbraid.lamination import (BudgetExhausted, LamCoords, RoundSpec, act_letters, as_round,
                                  relax, round_coords, sigma_action)
from raagbraid.circle_diagram import builtin_diagram, non_incidence_graph


def four_vertex_graphs():
    """One graph per isomorphism class on 4 vertices (11 classes)."""
    out = []
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() == 4:
            out.append(Graph.from_edges("abcd", [("abcd"[u], "abcd"[v]) for u, v in h.edges()]))
    assert len(out) == 11
    return out


# ----------------------------------------------------------------------
# 1. RAAG normal form against shuffle/cancellation closure
# ----------------------------------------------------------------------
#
# Every word of length <= 8 over 4 generators and their inverses (19173961
# words) is a node; swaps of adjacent commuting letters and deletion of
# adjacent inverse pairs are edges.  Neither move lengthens a word, so the
# components are exactly the BFS closures.  reduce-equality coincides with
# closure-equivalence iff reduce(w) lies in the component of w and each
# component yields a single reduced word.

_reduce_jit = numba.njit(reduce_codes)


@numba.njit
def _find(par, x):
    r = x
    while par[r] != r:
        r = par[r]
    while par[x] != r:
        nxt = par[x]
        par[x] = r
        x = nxt
    return r


@numba.njit
def _union(par, x, y):
    rx = _find(par, x)
    ry = _find(par, y)
    if rx < ry:
        par[ry] = rx
    elif ry < rx:
        par[rx] = ry


@numba.njit
def _closure_mismatches(commute, maxlen):
    off = np.zeros(maxlen + 2, dtype=np.int64)
    for n in range(1, maxlen + 2):
        off[n] = off[n - 1] + 8 ** (n - 1)
    total = off[maxlen + 1]
    par = np.arange(total).astype(np.int32)
    word = np.empty(maxlen, dtype=np.int64)
    # letters are 3-bit digits of the index, position 0 least significant
    for n in range(2, maxlen + 1):
        for idx in range(8 ** n):
            for k in range(n):
                word[k] = (idx >> (3 * k)) & 7
            me = off[n] + idx
            for p in range(n - 1):
                x = word[p]
                y = word[p + 1]
                if x == (y ^ 1):
                    low = idx & ((1 << (3 * p)) - 1)
                    high = idx >> (3 * (p + 2))
                    _union(par, me, off[n - 2] + (low | (high << (3 * p))))
                elif (x >> 1) != (y >> 1) and commute[x >> 1, y >> 1]:
                    sw = idx ^ ((x ^ y) << (3 * p)) ^ ((x ^ y) << (3 * (p + 1)))
                    if sw > idx:
                        _union(par, me, off[n] + sw)
    key = np.full(total, -1, dtype=np.int64)
    out = np.empty(maxlen, dtype=np.int64)
    bad = 0
    for n in range(maxlen + 1):
        for idx in range(8 ** n):
            for k in range(n):
                word[k] = (idx >> (3 * k)) & 7
            r = _reduce_jit(word[:n].copy(), commute, out)
            kidx = 0
            for k in range(r):
                kidx |= out[k] << (3 * k)
            kid = off[r] + kidx
            root = _find(par, off[n] + idx)
            if _find(par, kid) != root:
                bad += 1
            if key[root] == -1:
                key[root] = kid
            elif key[root] != kid:
                bad += 1
    return total, bad


def test_criterion_01_normal_form_oracle(criterion):
    t0 = time.perf_counter()
    words, bad = 0, 0
    for g in four_vertex_graphs():
        commute = np.zeros((4, 4), dtype=np.bool_)
        for u, v in g.edges:
            i, j = g.vertices.index(u), g.vertices.index(v)
            commute[i, j] = commute[j, i] = True
        n, b = _closure_mismatches(commute, 8)
        words += n
        bad += b
    dt = time.perf_counter() - t0
    criterion(1, bad == 0 and dt < 120,
              f"11 graphs, {words} words of length <= 8, {bad} mismatches, {dt:.1f}s (< 120s)")


# ----------------------------------------------------------------------
# 2. Coxeter embedding
# ----------------------------------------------------------------------

def _commutator_words(g, max_length):
    """All words of length <= max_length with every letter used evenly."""
    vs = g.vertices
    for n in range(0, max_length + 1, 2):
        for w in itertools.product(vs, repeat=n):
            if all(c % 2 == 0 for c in Counter(w).values()):
                yield CoxeterWord(g, w)


def test_criterion_02_coxeter_embedding(criterion):
    t0 = time.perf_counter()
    rep = cmd_cox("icosahedron", 20, 10_000, 7)
    lengths_ok = rep.passed
    g = builtin("icosahedron")
    hom_bad = 0
    for k in range(1000):
        rng = random.Random(sample_seed(11, k))
        u = random_commutator_element(g, 20, rng)
        v = random_commutator_element(g, 20, rng)
        if not equal(cox_to_artin(u * v), cox_to_artin(u) * cox_to_artin(v)):
            hom_bad += 1
    inj_bad, classes = 0, 0
    for h in four_vertex_graphs():
        image_of = {}
        for w in _commutator_words(h, 8):
            key = cox_reduce(w).letters
            img = cox_to_artin(w).letters
            if image_of.setdefault(key, img) != img:
                inj_bad += 1
        # well defined on classes; now distinct classes need distinct images
        inj_bad += len(image_of) - len(set(image_of.values()))
        classes += len(image_of)
    dt = time.perf_counter() - t0
    criterion(2, lengths_ok and hom_bad == 0 and inj_bad == 0 and dt < 120,
              f"lengths {'ok' if lengths_ok else 'BAD'} on 10^4 samples, "
              f"{hom_bad}/1000 hom failures, {inj_bad} injectivity failures over "
              f"{classes} classes, {dt:.1f}s (< 120s)")


# ----------------------------------------------------------------------
# 3. lamination action relations
# ----------------------------------------------------------------------

def test_criterion_03_lamination_relations(criterion):
    t0 = time.perf_counter()
    rng = random.Random(3)
    bad, checks = 0, 0
    for _ in range(1000):
        m = rng.randint(3, 12)
        c = LamCoords(m, tuple(rng.randint(-10**6, 10**6) for _ in range(m - 2)),
                      tuple(rng.randint(-10**6, 10**6) for _ in range(m - 2)))
        for i in range(1, m):
            for s in (1, -1):
                checks += 1
                bad += sigma_action(sigma_action(c, i, s), i, -s) != c
        for i in range(1, m - 1):
            for s in (1, -1):
                checks += 1
                w1 = [(i, s), (i + 1, s), (i, s)]
                w2 = [(i + 1, s), (i, s), (i + 1, s)]
                bad += act_letters(c, w1) != act_letters(c, w2)
        for i, j in itertools.combinations(range(1, m), 2):
            if j - i >= 2:
                checks += 1
                s, t = rng.choice((1, -1)), rng.choice((1, -1))
                bad += act_letters(c, [(i, s), (j, t)]) != act_letters(c, [(j, t), (i, s)])
    dt = time.perf_counter() - t0
    criterion(3, bad == 0 and dt < 60,
              f"{checks} relation checks on 1000 vectors, {bad} failures, {dt:.1f}s (< 60s)")


# ----------------------------------------------------------------------
# 4. relaxation round trip
# ----------------------------------------------------------------------

def test_criterion_04_relax_round_trip(criterion):
    t0 = time.perf_counter()
    rng = random.Random(4)
    bad, exhausted, longest = 0, 0, 0
    for _ in range(1000):
        m = rng.randint(3, 9)
        p, q = sorted(rng.sample(range(1, m + 1), 2))
        if (p, q) == (1, m):
            p, q = 1, m - 1
        start = round_coords(m, RoundSpec(p, q))
        beta = [(rng.randint(1, m - 1), rng.choice((1, -1))) for _ in range(rng.randint(0, 20))]
        c = act_letters(start, beta)
        try:
            conj, spec = relax(c, budget=10**5)
        except BudgetExhausted:
            exhausted += 1
            continue
        longest = max(longest, len(conj))
        back = act_letters(c, conj)
        bad += back != round_coords(m, spec) or as_round(back) != spec
    dt = time.perf_counter() - t0
    criterion(4, bad == 0 and exhausted == 0 and dt < 180,
              f"1000 cases, {bad} wrong, {exhausted} budget exhausted, longest conjugator "
              f"{longest}, {dt:.1f}s (< 180s)")


# ----------------------------------------------------------------------
# 5. embedding relation audit
# ----------------------------------------------------------------------

def test_criterion_05_relation_audit(criterion):
    t0 = time.perf_counter()
    parts, ok = [], True
    for name in ("disjoint_pair", "crossing_pair", "pentagon_c5"):
        e = builtin_embedding(name)
        audit = relation_audit(e.graph, e.gen_words)
        wrong = sum(edge != comm for _, _, edge, comm in audit)
        impure = sum(permutation(w) != tuple(range(1, e.m + 1)) for w in e.gen_words.values())
        support = support_check(e)
        moved = sum(not r["fixed"] for r in support)
        ok &= wrong == 0 and impure == 0 and moved == 0 and len(support) > 0
        parts.append(f"{name}: {len(audit)} pairs/{wrong} wrong, {impure} impure, "
                     f"{len(support)} support curves/{moved} moved")
    dt = time.perf_counter() - t0
    criterion(5, ok and dt < 300, "; ".join(parts) + f", {dt:.1f}s (< 300s)")


# ----------------------------------------------------------------------
# 6. exponential growth of powers
# ----------------------------------------------------------------------

def test_criterion_06_growth(criterion):
    t0 = time.perf_counter()
    a = cmd_growth("crossing_pair", "c1", 12)
    b = cmd_growth("pentagon_c5", None, 8)
    dt = time.perf_counter() - t0
    criterion(6, a.passed and b.passed and dt < 300,
              f"crossing_pair min step {float(a.fitted['min_step']):.4f}, pentagon_c5 min step "
              f"{float(b.fitted['min_step']):.4f} (>= 0.9375), {dt:.1f}s (< 300s)")


# ----------------------------------------------------------------------
# 7. sandwich
# ----------------------------------------------------------------------

def test_criterion_07_sandwich(criterion):
    t0 = time.perf_counter()
    rep = cmd_sandwich("pentagon_c5", 25, 200, 0)
    dt = time.perf_counter() - t0
    verdicts = "; ".join(f"{name} {'ok' if ok else 'FAILED'}" for name, ok, *_ in rep.verdicts)
    criterion(7, rep.passed and dt < 600,
              f"{verdicts}; min slope {float(rep.fitted['min_slope']):.4f}, "
              f"R^2 {float(rep.fitted['min_r2']):.4f}, {dt:.1f}s (< 600s)")


# ----------------------------------------------------------------------
# 8. injectivity evidence
# ----------------------------------------------------------------------

def test_criterion_08_injectivity(criterion):
    t0 = time.perf_counter()
    rep = cmd_injectivity("crossing_pair", 3)
    dt = time.perf_counter() - t0
    n = len(rep.rows)
    criterion(8, rep.passed and n == 53 and dt < 300,
              f"{n} reduced words, {n * (n - 1) // 2} pairs, "
              f"{len(rep.notes['clashes'])} clashes, {dt:.1f}s (< 300s)")


# ----------------------------------------------------------------------
# 9. lower bound soundness
# ----------------------------------------------------------------------

def test_criterion_09_lower_bound(criterion):
    t0 = time.perf_counter()
    rng = random.Random(9)
    over = 0
    for _ in range(1000):
        m = rng.randint(3, 7)
        w = BraidWord(m, tuple((rng.randint(1, m - 1), rng.choice((1, -1)))
                               for _ in range(rng.randint(0, 50))))
        over += certified_lower_bound(m, w) > len(w)
    pa = BraidWord.parse(3, "s1 s2^-1")
    ks = list(range(1, 201))
    bounds = [certified_lower_bound(3, pa ** k) for k in ks]
    slope, _, _ = fit_line(ks, bounds)
    dt = time.perf_counter() - t0
    criterion(9, over == 0 and slope > 0.1 and dt < 120,
              f"{over}/1000 bounds exceed word length, (s1 s2^-1)^k slope {slope:.4f} (> 0.1), "
              f"{dt:.1f}s (< 120s)")


# ----------------------------------------------------------------------
# 10. icosahedral diagram
# ----------------------------------------------------------------------

def _contract_degree_two(h: nx.Graph) -> nx.Graph:
    h = h.copy()
    while True:
        v = next((x for x in h if h.degree(x) == 2), None)
        if v is None:
            return h
        a, b = list(h[v])
        h.remove_node(v)
        h.add_edge(a, b)


def test_criterion_10_icosahedron(criterion):
    t0 = time.perf_counter()
    g = non_incidence_graph(builtin_diagram("icosa"))
    ico = builtin("icosahedron")
    iso = is_isomorphic(g, ico)
    iso_ok = iso is not None and len(set(iso.values())) == len(ico) and all(
        ico.has_edge(iso[u], iso[v]) for u, v in g.edges) and len(g.edges) == len(ico.edges)
    cp = is_planar(complement(g))
    witness_ok = False
    if not cp.planar and cp.witness_kind == "K3,3" and cp.witness.edges <= complement(g).edges:
        core = _contract_degree_two(cp.witness.to_networkx())
        core.remove_nodes_from([x for x in list(core) if core.degree(x) == 0])
        witness_ok = nx.is_isomorphic(core, nx.complete_bipartite_graph(3, 3))
    index = commutator_index_check(ico)
    report_ok = cmd_diagram("check", "icosa").passed
    dt = time.perf_counter() - t0
    criterion(10, iso_ok and witness_ok and index == 4096 and report_ok and dt < 60,
              f"isomorphism {'verified' if iso_ok else 'MISSING'}, complement "
              f"{'non-planar' if not cp.planar else 'planar'} with "
              f"{'verified' if witness_ok else 'UNVERIFIED'} K3,3 witness, index {index}, "
              f"{dt:.1f}s (< 60s)")

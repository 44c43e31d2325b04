"""Right-angled Coxeter groups W(Δ) and the embedding [W, W] -> G(Δ).

A Coxeter word is a sequence of generator labels; every generator is an
involution, so reduction is Artin reduction with each letter treated as its
own inverse.  Elements of the commutator subgroup are exactly the words in
which every generator occurs an even number of times, and they are sent into
the Artin group by signing the d-th occurrence of each letter with
(-1)**(d + 1).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .artin_words import ArtinWord, WordError, commute_matrix, reduce, reduce_codes
from .graph import Graph


@dataclass(frozen=True)
class CoxeterWord:
    graph: Graph
    letters: tuple[str, ...] = ()

    def __post_init__(self):
        verts = set(self.graph.vertices)
        letters = tuple(str(x) for x in self.letters)
        for x in letters:
            if x not in verts:
                raise WordError(f"{x!r} is not a generator")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, graph: Graph, text: str) -> "CoxeterWord":
        toks = text.split()
        for t in toks:
            if "^" in t:
                raise WordError(f"exponents are not allowed in Coxeter words: {t!r}")
        return cls(graph, tuple(toks))

    def __str__(self):
        return " ".join(self.letters)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "CoxeterWord") -> "CoxeterWord":
        if self.graph != other.graph:
            raise WordError("words live over different graphs")
        return CoxeterWord(self.graph, self.letters + other.letters)

    def inverse(self) -> "CoxeterWord":
        return CoxeterWord(self.graph, self.letters[::-1])


def cox_reduce(w: CoxeterWord) -> CoxeterWord:
    """Geodesic canonical representative in W(Δ)."""
    pos = {v: i for i, v in enumerate(w.graph.vertices)}
    # all letters positive: x ^ 1 never matches, so cancel squares by hand
    codes = np.array([2 * pos[x] for x in w.letters], dtype=np.int64)
    commute = commute_matrix(w.graph)
    out = np.empty(len(codes), dtype=np.int64)
    n = 0
    for x in codes:
        j = n - 1
        cancelled = False
        while j >= 0:
            if out[j] == x:
                out[j:n - 1] = out[j + 1:n].copy()
                n -= 1
                cancelled = True
                break
            if not commute[x >> 1, out[j] >> 1]:
                break
            j -= 1
        if not cancelled:
            out[n] = x
            n += 1
    # the Artin normal form of a square-free positive word is its Coxeter one
    canon = np.empty(n, dtype=np.int64)
    m = reduce_codes(out[:n].copy(), commute, canon)
    assert m == n
    vs = w.graph.vertices
    return CoxeterWord(w.graph, tuple(vs[int(c) >> 1] for c in canon[:m]))


def cox_length(w: CoxeterWord) -> int:
    return len(cox_reduce(w))


def cox_equal(u: CoxeterWord, v: CoxeterWord) -> bool:
    return cox_reduce(u).letters == cox_reduce(v).letters


def in_commutator(w: CoxeterWord) -> bool:
    return all(c % 2 == 0 for c in Counter(w.letters).values())


def cox_to_artin(w: CoxeterWord) -> ArtinWord:
    """The image of ``w`` in G(Δ), reduced.  Requires ``w`` in [W, W]."""
    if not in_commutator(w):
        raise WordError(f"{w} is not in the commutator subgroup")
    seen: Counter = Counter()
    letters = []
    for x in w.letters:
        seen[x] += 1
        letters.append((x, 1 if seen[x] % 2 else -1))
    return reduce(ArtinWord(w.graph, tuple(letters)))


def commutator_index_check(g: Graph) -> int:
    """Index of [W, W] in W: the abelianisation is (Z/2)^n."""
    return 2 ** len(g)


def random_commutator_element(g: Graph, max_length: int, rng: random.Random) -> CoxeterWord:
    """A cox-reduced element of [W, W] of length at most ``max_length``.

    Built by drawing random letters, reducing, and closing up the parity with
    a reduced tail; retried until the length fits.
    """
    vs = g.vertices
    while True:
        target = rng.randrange(0, max_length + 1)
        w = cox_reduce(CoxeterWord(g, tuple(rng.choice(vs) for _ in range(target))))
        odd = sorted((x for x, c in Counter(w.letters).items() if c % 2), key=vs.index)
        rng.shuffle(odd)
        w = cox_reduce(CoxeterWord(g, w.letters + tuple(odd)))
        if len(w) <= max_length:
            assert in_commutator(w)
            return w

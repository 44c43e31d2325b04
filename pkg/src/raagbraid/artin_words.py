"""Words in right-angled Artin groups G(Δ).

Letters are (label, sign) pairs.  Internally a letter is coded as the integer
``2*i + (sign < 0)`` where ``i`` is the generator's position in the graph, so
the inverse of a code is ``code ^ 1``.

Reduction cancels a letter against the nearest earlier occurrence of the same
generator whenever everything in between commutes with it; the surviving word
is geodesic.  It is then written in the lexicographically least order of its
shuffle class: each position takes the smallest code that can be commuted
forward to it.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import Graph


class WordError(ValueError):
    pass


def reduce_codes(word, commute, out):
    """Reduce the coded ``word`` into ``out`` and return the reduced length.

    ``commute[g, h]`` must be true exactly for distinct adjacent generators.
    The body sticks to plain loops over integer arrays so the same function
    can be handed to a JIT compiler for bulk enumeration.
    """
    n = 0
    for x in word:
        g = x >> 1
        cancelled = False
        j = n - 1
        while j >= 0:
            y = out[j]
            h = y >> 1
            if h == g:
                if y == (x ^ 1):
                    for t in range(j, n - 1):
                        out[t] = out[t + 1]
                    n -= 1
                    cancelled = True
                break
            if not commute[g, h]:
                break
            j -= 1
        if not cancelled:
            out[n] = x
            n += 1
    # lexicographically least shuffle, in place
    for t in range(n):
        best = t
        for i in range(t + 1, n):
            if out[i] < out[best]:
                ok = True
                for j in range(t, i):
                    if not commute[out[i] >> 1, out[j] >> 1]:
                        ok = False
                        break
                if ok:
                    best = i
        x = out[best]
        for i in range(best, t, -1):
            out[i] = out[i - 1]
        out[t] = x
    return n


@lru_cache(maxsize=256)
def commute_matrix(graph: Graph) -> np.ndarray:
    n = len(graph)
    mat = np.zeros((n, n), dtype=np.bool_)
    for i, u in enumerate(graph.vertices):
        for j, v in enumerate(graph.vertices):
            if i != j and graph.has_edge(u, v):
                mat[i, j] = True
    return mat


_TOKEN = re.compile(r"^(.+?)(\^-1|\^\+?1)?$")


@dataclass(frozen=True)
class ArtinWord:
    graph: Graph
    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        verts = set(self.graph.vertices)
        letters = tuple((str(g), int(s)) for g, s in self.letters)
        for g, s in letters:
            if g not in verts:
                raise WordError(f"{g!r} is not a generator")
            if s not in (1, -1):
                raise WordError(f"bad sign {s} on {g!r}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, graph: Graph, text: str) -> "ArtinWord":
        letters = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if m is None:
                raise WordError(f"cannot parse letter {tok!r}")
            label, suffix = m.group(1), m.group(2)
            letters.append((label, -1 if suffix == "^-1" else 1))
        return cls(graph, tuple(letters))

    @classmethod
    def from_codes(cls, graph: Graph, codes) -> "ArtinWord":
        vs = graph.vertices
        return cls(graph, tuple((vs[int(c) >> 1], -1 if int(c) & 1 else 1) for c in codes))

    def codes(self) -> np.ndarray:
        pos = {v: i for i, v in enumerate(self.graph.vertices)}
        return np.array([2 * pos[g] + (s < 0) for g, s in self.letters], dtype=np.int64)

    def __str__(self):
        return " ".join(g if s > 0 else f"{g}^-1" for g, s in self.letters)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "ArtinWord") -> "ArtinWord":
        _same_graph(self, other)
        return ArtinWord(self.graph, self.letters + other.letters)

    def inverse(self) -> "ArtinWord":
        return ArtinWord(self.graph, tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, k: int) -> "ArtinWord":
        base = self if k >= 0 else self.inverse()
        return ArtinWord(self.graph, base.letters * abs(k))


def _same_graph(u: ArtinWord, v: ArtinWord):
    if u.graph != v.graph:
        raise WordError("words live over different graphs")


def generator(graph: Graph, label: str, sign: int = 1) -> ArtinWord:
    return ArtinWord(graph, ((label, sign),))


def reduce(w: ArtinWord) -> ArtinWord:
    """Canonical geodesic representative of ``w``."""
    codes = w.codes()
    out = np.empty(len(codes), dtype=np.int64)
    n = reduce_codes(codes, commute_matrix(w.graph), out)
    return ArtinWord.from_codes(w.graph, out[:n])


def equal(u: ArtinWord, v: ArtinWord) -> bool:
    _same_graph(u, v)
    return reduce(u).letters == reduce(v).letters


def geodesic_length(w: ArtinWord) -> int:
    return len(reduce(w))


def letter_count(w: ArtinWord, j: str) -> int:
    """Occurrences of ``j`` and its inverse in any reduced word for ``w``."""
    if j not in w.graph.vertices:
        raise WordError(f"{j!r} is not a generator")
    return sum(1 for g, _ in reduce(w).letters if g == j)


def is_reduced(w: ArtinWord) -> bool:
    return geodesic_length(w) == len(w)


def random_geodesic(graph: Graph, length: int, seed: int) -> ArtinWord:
    """A word of geodesic length exactly ``length``.

    Letters are drawn uniformly from the signed generators; a draw is
    rejected when it would shorten the word.
    """
    if length < 0:
        raise WordError("length must be non-negative")
    if length and not len(graph):
        raise WordError("graph has no generators")
    rng = random.Random(seed)
    commute = commute_matrix(graph)
    buf = np.empty(length + 1, dtype=np.int64)
    cur: list[int] = []
    ncodes = 2 * len(graph)
    while len(cur) < length:
        x = rng.randrange(ncodes)
        trial = np.array(cur + [x], dtype=np.int64)
        if reduce_codes(trial, commute, buf) == len(cur) + 1:
            cur.append(x)
    return ArtinWord.from_codes(graph, cur)

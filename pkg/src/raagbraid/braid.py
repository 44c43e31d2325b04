"""Braid words in the sigma generators and Dehn twist synthesis.

A braid word acts on laminations letter by letter from left to right, so
``(u * v).act(c) == v.act(u.act(c))``.  The letter ``s_k`` is the
counterclockwise half twist exchanging punctures k and k+1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lamination import (LamCoords, LaminationError, RoundSpec, act_letters, relax,
                         round_coords, standard_coords)


class BraidError(ValueError):
    pass


_TOKEN = re.compile(r"^s(\d+)(\^-1|\^\+?1)?$")


@dataclass(frozen=True)
class BraidWord:
    m: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.m < 2:
            raise BraidError("need at least two strands")
        letters = tuple((int(k), int(s)) for k, s in self.letters)
        for k, s in letters:
            if not 1 <= k <= self.m - 1:
                raise BraidError(f"generator s{k} out of range for m={self.m}")
            if s not in (1, -1):
                raise BraidError(f"bad sign {s}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, m: int, text: str) -> "BraidWord":
        letters = []
        for tok in text.split():
            mt = _TOKEN.match(tok)
            if mt is None:
                raise BraidError(f"cannot parse braid letter {tok!r}")
            letters.append((int(mt.group(1)), -1 if mt.group(2) == "^-1" else 1))
        return cls(m, tuple(letters))

    def __str__(self):
        return " ".join(f"s{k}" if s > 0 else f"s{k}^-1" for k, s in self.letters)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        _same_m(self, other)
        return BraidWord(self.m, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.m, tuple((k, -s) for k, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "BraidWord":
        base = self if n >= 0 else self.inverse()
        return BraidWord(self.m, base.letters * abs(n))

    def act(self, c: LamCoords) -> LamCoords:
        if c.m != self.m:
            raise BraidError(f"coordinates on {c.m} punctures, braid on {self.m} strands")
        return act_letters(c, self.letters)


def _same_m(u: BraidWord, v: BraidWord):
    if u.m != v.m:
        raise BraidError(f"strand counts differ ({u.m} vs {v.m})")


def identity(m: int) -> BraidWord:
    return BraidWord(m, ())


def compose(u: BraidWord, v: BraidWord) -> BraidWord:
    return u * v


def inverse(w: BraidWord) -> BraidWord:
    return w.inverse()


def free_reduce(w: BraidWord) -> BraidWord:
    out: list[tuple[int, int]] = []
    for k, s in w.letters:
        if out and out[-1] == (k, -s):
            out.pop()
        else:
            out.append((k, s))
    return BraidWord(w.m, tuple(out))


def permutation(w: BraidWord) -> tuple[int, ...]:
    """``perm[i-1]`` is the final position of the strand starting at i."""
    pos = list(range(1, w.m + 1))
    at = list(range(1, w.m + 1))  # at[p-1] = strand currently at position p
    for k, _ in w.letters:
        at[k - 1], at[k] = at[k], at[k - 1]
    for p, strand in enumerate(at, start=1):
        pos[strand - 1] = p
    return tuple(pos)


def is_pure(w: BraidWord) -> bool:
    return permutation(w) == tuple(range(1, w.m + 1))


def exponent_sum(w: BraidWord) -> int:
    return sum(s for _, s in w.letters)


def full_twist_word(m: int, r: RoundSpec) -> BraidWord:
    """(s_p s_{p+1} ... s_{q-1})^(q-p+1), the positive full twist on p..q."""
    if r.q > m:
        raise BraidError(f"interval ({r.p}, {r.q}) exceeds m={m}")
    row = tuple((k, 1) for k in range(r.p, r.q))
    return BraidWord(m, row * (r.q - r.p + 1))


def dehn_twist_word(c: LamCoords, direction: int, budget: int = 10**6):
    """A braid word acting as the Dehn twist about the single curve ``c``.

    With ``(w, r) = relax(c)`` the word ``w`` carries ``c`` to the round curve
    ``r``; the twist is ``w * T_r**direction * w^-1``.  Returns the word and
    the conjugator.
    """
    if direction not in (1, -1):
        raise BraidError("direction must be +1 or -1")
    conj, r = relax(c, budget=budget)
    w = BraidWord(c.m, tuple(conj))
    return free_reduce(w * full_twist_word(c.m, r) ** direction * w.inverse()), w


def test_curves(m: int) -> list[LamCoords]:
    """The standard multicurve and every round curve except the boundary one."""
    curves = [standard_coords(m)]
    for p in range(1, m):
        for q in range(p + 1, m + 1):
            if (p, q) != (1, m):
                curves.append(round_coords(m, RoundSpec(p, q)))
    return curves


def equal_braids(u: BraidWord, v: BraidWord) -> bool:
    """Equality in B_m: same action on the test curves and same exponent sum."""
    _same_m(u, v)
    if exponent_sum(u) != exponent_sum(v):
        return False
    if u.m == 2:
        return True
    for c in test_curves(u.m):
        if u.act(c) != v.act(c):
            return False
    return True


def is_trivial(w: BraidWord) -> bool:
    return equal_braids(w, identity(w.m))


def commutator(u: BraidWord, v: BraidWord) -> BraidWord:
    return u * v * u.inverse() * v.inverse()


__all__ = [
    "BraidError", "BraidWord", "LaminationError", "commutator", "compose", "dehn_twist_word",
    "equal_braids", "exponent_sum", "free_reduce", "full_twist_word", "identity", "inverse",
    "is_pure", "is_trivial", "permutation", "test_curves",
]

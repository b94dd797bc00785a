"""Brute-force model of e_n*(r) as a quotient, degree by degree.

Nothing here touches the rewriting code in :mod:`swisscheese.arnold`.  In
generator-degree p the spanning set is every product of p distinct oriented
generators w_ij (i < j); squares are dropped, which is the same as adding
the square relators.  The relation space is spanned by every Arnold relator
w_ij w_jk + w_jk w_ki + w_ki w_ij (all ordered triples) times every spanning
monomial of degree p - 2.  Dimensions and normal coordinates come from plain
exact elimination.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = ["ResourceGuardError", "quotient_dims", "oracle_normal_form", "oracle_coordinates",
           "complement_basis", "MAX_ARITY"]

MAX_ARITY = 7


class ResourceGuardError(ValueError):
    pass


def _guard(n: int, r: int) -> None:
    if n < 2:
        raise ValueError("oracle needs n >= 2")
    if r < 0:
        raise ValueError("arity must be non-negative")
    if r > MAX_ARITY:
        raise ResourceGuardError(f"oracle refuses r = {r} > {MAX_ARITY}")


def _permutation_parity(seq: list) -> int:
    # parity via cycle decomposition of the sorting permutation
    order = sorted(range(len(seq)), key=lambda t: seq[t])
    seen = [False] * len(seq)
    parity = 0
    for start in range(len(seq)):
        length = 0
        t = start
        while not seen[t]:
            seen[t] = True
            t = order[t]
            length += 1
        if length:
            parity ^= (length - 1) & 1
    return parity


def _canonical(n: int, word: Iterable[tuple[int, int]]):
    """(sign, sorted oriented word) or (0, None) if a square appears."""
    sign = 1
    oriented = []
    for i, j in word:
        if i == j:
            raise ValueError("generator with equal indices")
        if i > j:
            i, j = j, i
            if n % 2:
                sign = -sign
        oriented.append((i, j))
    if len(set(oriented)) < len(oriented):
        return 0, None
    if (n - 1) % 2 and _permutation_parity(oriented):
        sign = -sign
    return sign, tuple(sorted(oriented))


class _Degree:
    """Row-echelon form of the relation space in one generator-degree."""

    def __init__(self, n: int, r: int, p: int):
        gens = list(itertools.combinations(range(1, r + 1), 2))
        self.words = list(itertools.combinations(gens, p))
        self.index = {w: t for t, w in enumerate(self.words)}
        self.pivots: dict[int, dict[int, Fraction]] = {}
        if p >= 2:
            lower = list(itertools.combinations(gens, p - 2))
            for i, j, k in itertools.permutations(range(1, r + 1), 3):
                relator = [((i, j), (j, k)), ((j, k), (k, i)), ((k, i), (i, j))]
                for mono in lower:
                    row: dict[int, Fraction] = {}
                    for pair in relator:
                        s, w = _canonical(n, list(pair) + list(mono))
                        if s:
                            t = self.index[w]
                            row[t] = row.get(t, 0) + s
                    self._insert({t: Fraction(v) for t, v in row.items() if v})
        self.complement = [t for t in range(len(self.words)) if t not in self.pivots]

    def _insert(self, row: dict[int, Fraction]) -> None:
        while row:
            top = max(row)
            piv = self.pivots.get(top)
            if piv is None:
                c = row[top]
                self.pivots[top] = {t: v / c for t, v in row.items()}
                return
            c = row[top]
            for t, v in piv.items():
                x = row.get(t, 0) - c * v
                if x:
                    row[t] = x
                else:
                    row.pop(t, None)

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        v = {t: Fraction(x) for t, x in vec.items() if x}
        for top in sorted(self.pivots, reverse=True):
            c = v.get(top)
            if not c:
                continue
            for t, x in self.pivots[top].items():
                y = v.get(t, 0) - c * x
                if y:
                    v[t] = y
                else:
                    v.pop(t, None)
        return v

    @property
    def dim(self) -> int:
        return len(self.complement)


@lru_cache(maxsize=None)
def _degree(n: int, r: int, p: int) -> _Degree:
    return _Degree(n, r, p)


def quotient_dims(n: int, r: int, max_degree: int | None = None) -> dict[int, int]:
    """Dimensions {cohomological degree: dim} for degrees p(n-1) <= max_degree.

    Without ``max_degree`` every generator-degree that has spanning words is
    computed, so the (vanishing) top degrees are checked too.
    """
    _guard(n, r)
    top = r * (r - 1) // 2
    if max_degree is not None:
        top = min(top, max_degree // (n - 1))
    return {p * (n - 1): _degree(n, r, p).dim for p in range(top + 1)}


def complement_basis(n: int, r: int, p: int) -> list[tuple]:
    """Spanning words (sorted oriented pairs) not eliminated by the relators."""
    _guard(n, r)
    d = _degree(n, r, p)
    return [d.words[t] for t in d.complement]


def oracle_normal_form(word: Iterable[tuple[int, int]], n: int, r: int) -> dict[tuple, Fraction]:
    """Coordinates of a product of generators on the complement basis."""
    _guard(n, r)
    word = list(word)
    for i, j in word:
        if not (1 <= i <= r and 1 <= j <= r):
            raise ValueError(f"index out of range in w_{i},{j}")
    return oracle_coordinates({tuple(word): 1}, n, r)


def oracle_coordinates(terms: Mapping[tuple, object], n: int, r: int) -> dict[tuple, Fraction]:
    """Coordinates of a combination of words (each a sequence of pairs, any order)."""
    _guard(n, r)
    by_degree: dict[int, dict[int, Fraction]] = {}
    for word, c in terms.items():
        s, w = _canonical(n, word)
        if not s:
            continue
        d = _degree(n, r, len(w))
        vec = by_degree.setdefault(len(w), {})
        t = d.index[w]
        vec[t] = vec.get(t, 0) + s * Fraction(c)
    out: dict[tuple, Fraction] = {}
    for p, vec in sorted(by_degree.items()):
        d = _degree(n, r, p)
        for t, v in sorted(d.reduce(vec).items()):
            out[d.words[t]] = v
    return out

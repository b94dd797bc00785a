"""Pure-Python elimination kernels.

Matrices are given column-wise: each column is a list of ``(row, value)``
pairs with nonzero integer values and distinct rows.  All routines are exact;
rationals are handled by the callers, which clear denominators per column
(this does not change the rank).
"""
from __future__ import annotations

from math import gcd

__all__ = ["rank_int", "echelon_lower_bound", "first_nonzero_product"]


def _primitive(col: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in col.values():
        g = gcd(g, v)
        if g == 1:
            return col
    if g > 1:
        return {r: v // g for r, v in col.items()}
    return col


def rank_int(columns) -> int:
    """Rank over Q by fraction-free column reduction, pivoting on the largest row."""
    pivots: dict[int, dict[int, int]] = {}
    for raw in columns:
        col = {r: v for r, v in raw if v}
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = _primitive(col)
                break
            a = col[low]
            b = piv[low]
            # col <- b*col - a*piv, which clears row `low`
            new = {r: b * v for r, v in col.items()}
            for r, v in piv.items():
                w = new.get(r, 0) - a * v
                if w:
                    new[r] = w
                else:
                    new.pop(r, None)
            col = _primitive(new)
    return len(pivots)


def echelon_lower_bound(columns) -> int:
    """Count columns whose largest row is not already claimed by an earlier column.

    The accepted columns are in echelon form with distinct pivots, hence
    linearly independent; the count is a certified lower bound for the rank.
    """
    taken: set[int] = set()
    for raw in columns:
        low = -1
        for r, v in raw:
            if v and r > low:
                low = r
        if low >= 0 and low not in taken:
            taken.add(low)
    return len(taken)


def first_nonzero_product(left, right) -> int:
    """Index of the first column of ``left @ right`` that is nonzero, or -1."""
    for j, raw in enumerate(right):
        acc: dict[int, int] = {}
        for k, v in raw:
            for r, w in left[k]:
                acc[r] = acc.get(r, 0) + v * w
        for x in acc.values():
            if x:
                return j
    return -1

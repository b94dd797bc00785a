"""The m = 1 components: functions on permutations (cohomology of D_1(l)).

A permutation label is the one-line tuple of points read left to right on
the line, so ``(2, 1)`` is the configuration with point 2 left of point 1.
The algebra is Q^{S_l} with the pointwise product; delta functions form the
basis and the unit is the constant function 1.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

from .algebra import Component, Element, TensorElement, add_into

__all__ = ["PermComponent", "PermFunction", "PermFamily", "perm_component", "delta", "constant",
           "cocompose", "relabel"]

Perm = tuple[int, ...]


class PermComponent(Component):
    def __init__(self, l: int):
        if l < 0:
            raise ValueError("arity must be non-negative")
        self.l = l
        self.key = ("perm", l)
        self.basis = tuple(itertools.permutations(range(1, l + 1)))
        self.unit = None

    def degree(self, label: Perm) -> int:
        return 0

    def product(self, x: Perm, y: Perm) -> dict:
        return {x: 1} if x == y else {}

    def one_terms(self) -> dict:
        return {s: 1 for s in self.basis}


@lru_cache(maxsize=None)
def perm_component(l: int) -> PermComponent:
    return PermComponent(l)


class PermFunction(Element):
    __slots__ = ()

    @property
    def l(self) -> int:
        return self.component.l

    def __call__(self, sigma: Sequence[int]):
        return self.coefficient(tuple(sigma))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*d{list(s)}" for s, c in self.sorted_terms())


def delta(l: int, sigma: Sequence[int]) -> PermFunction:
    comp = perm_component(l)
    sigma = tuple(sigma)
    try:
        comp.index(sigma)
    except KeyError:
        raise ValueError(f"{sigma} is not a permutation of 1..{l}") from None
    return PermFunction(comp, {sigma: 1})


def constant(l: int, c=1) -> PermFunction:
    comp = perm_component(l)
    return PermFunction(comp, {s: c for s in comp.basis})


@lru_cache(maxsize=None)
def _cocompose_label(pi: Perm, sizes: tuple[int, ...]) -> tuple[tuple[tuple, int], ...]:
    block_of = {}
    start = 0
    for a, size in enumerate(sizes, start=1):
        for loc in range(1, size + 1):
            block_of[start + loc] = (a, loc)
        start += size
    runs: list[int] = []
    local: dict[int, list[int]] = {a: [] for a in range(1, len(sizes) + 1)}
    for x in pi:
        a, loc = block_of[x]
        if not runs or runs[-1] != a:
            if a in runs:
                return ()  # block not contiguous: no configuration composes to pi
            runs.append(a)
        local[a].append(loc)
    taus = tuple(tuple(local[a]) for a in range(1, len(sizes) + 1))
    out = []
    for sigma in itertools.permutations(range(1, len(sizes) + 1)):
        if [a for a in sigma if sizes[a - 1] > 0] == runs:
            out.append(((sigma,) + taus, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _relabel_label(sigma: Perm, images: tuple[int, ...], target: int) -> tuple[tuple[Perm, int], ...]:
    inverse = {y: i + 1 for i, y in enumerate(images)}
    out = []
    for pi in perm_component(target).basis:
        if tuple(inverse[x] for x in pi if x in inverse) == sigma:
            out.append((pi, 1))
    return tuple(out)


def cocompose(x: PermFunction, blocks: Sequence[int]) -> TensorElement:
    """Pull back along block composition of permutations (consecutive blocks)."""
    sizes = tuple(blocks)
    if sum(sizes) != x.l or any(b < 0 for b in sizes):
        raise ValueError(f"blocks {sizes} do not partition 1..{x.l}")
    comps = [perm_component(len(sizes))] + [perm_component(b) for b in sizes]
    acc: dict = {}
    for pi, c in x.terms.items():
        for key, k in _cocompose_label(pi, sizes):
            add_into(acc, key, c * k)
    return TensorElement(comps, acc)


def relabel(x: PermFunction, injection) -> PermFunction:
    """Pull back along the map forgetting the points outside the image."""
    if injection.source != x.l:
        raise ValueError("injection domain does not match arity")
    acc: dict = {}
    for s, c in x.terms.items():
        for pi, k in _relabel_label(s, injection.images, injection.target):
            add_into(acc, pi, c * k)
    return PermFunction(perm_component(injection.target), acc)


class PermFamily:
    """e_1* as a family of components."""

    key = ("perm",)
    generator_degree = 0
    n = 1

    def component(self, l: int) -> PermComponent:
        return perm_component(l)

    def relabel_label(self, label: Perm, injection) -> dict:
        return dict(_relabel_label(label, injection.images, injection.target))

    def cocompose_label(self, label: Perm, sizes: Sequence[int]) -> dict:
        return dict(_cocompose_label(label, tuple(sizes)))

    def __eq__(self, other):
        return isinstance(other, PermFamily)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "PermFamily()"

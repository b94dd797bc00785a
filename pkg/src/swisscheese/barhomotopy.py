"""Two-sided bar complexes B ⊗ Ā^{⊗p} ⊗ C and their Tor.

A cell ``b[a_1|...|a_p]c`` has internal degree q = |b| + Σ|a_i| + |c| and
total (cohomological) degree q - p.  The differential merges neighbours:

    d = Σ_i (-1)^{|x_0| + ... + |x_i|} μ_i

with x_0 = b, x_i = s a_i of degree |a_i| - 1, and μ_i the product of x_i
with x_{i+1} (through φ: A -> B on the left end and ψ: A -> C on the right).
Because d preserves q, each internal degree is a finite complex in the
weight p, and truncating at q <= bound is exact in every degree kept.

Ranks are obtained in two ways.  Cells within (q, p) are ordered by B-degree
first, so a column's largest row index is its pivot; columns with distinct
pivots are independent, which gives lower bounds L_p.  Since d∘d = 0,
rank_p + rank_{p+1} <= dim W_p, so whenever L_p + L_{p+1} = dim W_p both
ranks are exact.  Any rank not pinned down this way is computed by exact
elimination.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

from . import kernels
from .algebra import Component, add_into
from .arnold import Injection, _relabel_label, e_n
from .escoperad import EscContext, constrained_family, esc_hilbert

__all__ = [
    "GroundField",
    "TruncatedPolynomial",
    "AlgebraMap",
    "NotConnectedError",
    "BarComplex",
    "TorTable",
    "CollapseCertificate",
    "build_bar",
    "tor_dimensions",
    "em_collapse_check",
    "relabel_map",
    "restrict_map",
    "collapse_map",
    "unit_map",
    "control_example",
    "MAX_POINTS",
]

MAX_POINTS = 5


class NotConnectedError(ValueError):
    """The middle algebra has positive-dimensional degree 0 ideal (or negative degrees)."""


class GroundField(Component):
    def __init__(self):
        self.key = ("ground",)
        self.basis = ((),)
        self.unit = ()

    def degree(self, label):
        return 0

    def product(self, x, y):
        return {(): 1}


class TruncatedPolynomial(Component):
    """Q[x]/(x^{top+1}) with |x| = degree; labels are exponents."""

    def __init__(self, degree: int = 2, top: int = 1):
        if degree < 1 or top < 0:
            raise ValueError("need degree >= 1 and top >= 0")
        if degree % 2 and top > 1:
            raise ValueError("odd generators square to zero")
        self.key = ("trunc", degree, top)
        self.basis = tuple(range(top + 1))
        self.unit = 0
        self.gen_degree = degree

    def degree(self, label):
        return label * self.gen_degree

    def product(self, x, y):
        return {x + y: 1} if x + y < len(self.basis) else {}


@dataclass(frozen=True)
class AlgebraMap:
    """A unital degree-0 algebra map given on basis labels."""

    source: Component
    target: Component
    fn: Callable[[object], Mapping]
    name: str = "map"

    def __call__(self, label) -> Mapping:
        return self.fn(label)

    def is_unital(self) -> bool:
        return dict(_images(self, self.source.one_terms())) == {k: v for k, v in self.target.one_terms().items()}

    def check_multiplicative(self) -> tuple | None:
        """First pair of basis labels where f(xy) != f(x)f(y), or None."""
        src, tgt = self.source, self.target
        for x, y in itertools.product(src.basis, repeat=2):
            lhs = _images(self, src.product(x, y))
            rhs: dict = {}
            for u, a in self(x).items():
                for v, b in self(y).items():
                    for w, c in tgt.product(u, v).items():
                        add_into(rhs, w, a * b * c)
            if lhs != rhs:
                return x, y
        return None


def _images(f: AlgebraMap, terms: Mapping) -> dict:
    out: dict = {}
    for x, a in terms.items():
        for y, b in f(x).items():
            add_into(out, y, a * b)
    return out


def unit_map(source: Component, target: Component) -> AlgebraMap:
    """The augmentation followed by the unit: kills every positive-degree label."""
    one = target.one_terms()
    aug = source.one_terms()

    def fn(label):
        # augmentation of a connected algebra: coefficient of the unit
        if source.degree(label) == 0 and label in aug:
            return dict(one)
        return {}

    return AlgebraMap(source, target, fn, "unit")


def relabel_map(n: int, l: int, k: int) -> AlgebraMap:
    """e_n*(l) -> e_n*(k+l), point i to point k+i (the subalgebra of the last l points)."""
    src, tgt = e_n(n, l), e_n(n, k + l)
    images = Injection.shift(l, k).images

    def fn(label):
        return dict(_relabel_label(n, label, images))

    return AlgebraMap(src, tgt, fn, f"relabel+{k}")


def restrict_map(n: int, m: int, l: int) -> AlgebraMap:
    """e_n*(l) -> e_m*(l): all generators to zero."""
    if not 1 <= m < n:
        raise ValueError("restriction needs n > m >= 1")
    f = unit_map(e_n(n, l), constrained_family(m).component(l))
    return AlgebraMap(f.source, f.target, f.fn, "restrict")


def collapse_map(n: int, l: int, k: int) -> AlgebraMap:
    """Deliberate fault: every generator of e_n*(l) goes to w_12 in e_n*(k+l).

    This is a unital algebra map (all products of two generators land on
    w_12^2 = 0), but e_n*(k+l) is not free over it once l >= 2.
    """
    if k + l < 2:
        raise ValueError("need at least two points in the target")
    src, tgt = e_n(n, l), e_n(n, k + l)
    w12 = ((1, 2),)

    def fn(label):
        if label == ():
            return {(): 1}
        if len(label) == 1:
            return {w12: 1}
        return {}

    return AlgebraMap(src, tgt, fn, "collapse")


# ----------------------------------------------------------------------------


@dataclass
class BarBlock:
    """All cells of one internal degree q, split by weight."""

    q: int
    cells: dict[int, list[tuple]]
    # d_p : W_p -> W_{p-1}, integer columns [(row, value)]
    diff: dict[int, list[list[tuple[int, int]]]]


@dataclass
class BarComplex:
    B: Component
    A: Component
    C: Component
    phi: AlgebraMap
    psi: AlgebraMap
    bound: int
    blocks: dict[int, BarBlock]

    def dims(self) -> dict[tuple[int, int], int]:
        """{(q, p): number of cells}."""
        return {(q, p): len(cells) for q, blk in self.blocks.items() for p, cells in blk.cells.items() if cells}

    def total_cells(self) -> int:
        return sum(self.dims().values())

    def max_weight(self) -> int:
        return max((p for (q, p) in self.dims()), default=0)


def _check_connected(A: Component) -> list:
    degs = [A.degree(x) for x in A.basis]
    if any(d < 0 for d in degs):
        raise NotConnectedError("middle algebra has negative degrees")
    zero = [x for x in A.basis if A.degree(x) == 0]
    if zero != [A.unit] or A.one_terms() != {A.unit: 1}:
        raise NotConnectedError(
            "middle algebra is not connected: the weight is unbounded at fixed degree"
        )
    return [x for x in A.basis if A.degree(x) > 0]


def _by_degree(comp: Component, labels) -> dict[int, list]:
    out: dict[int, list] = {}
    for x in labels:
        out.setdefault(comp.degree(x), []).append(x)
    return out


def _sequences(ideal_by_deg: dict[int, list], total: int, p: int):
    """Ordered p-tuples of ideal labels with degree sum ``total``."""
    if p == 0:
        if total == 0:
            yield ()
        return
    for d, labels in ideal_by_deg.items():
        if d > total:
            continue
        for rest in _sequences(ideal_by_deg, total - d, p - 1):
            for x in labels:
                yield (x,) + rest


def build_bar(B: Component, A: Component, C: Component, phi: AlgebraMap, psi: AlgebraMap,
              bound: int, check: bool = True) -> BarComplex:
    """Cells and differential for internal degrees 0..bound; d∘d = 0 is verified."""
    ideal = _check_connected(A)
    if check:
        for f in (phi, psi):
            if not f.is_unital():
                raise ValueError(f"{f.name} is not unital")
    min_deg = min((A.degree(x) for x in ideal), default=1)
    ideal_by_deg = _by_degree(A, ideal)
    B_by_deg = _by_degree(B, B.basis)
    C_by_deg = _by_degree(C, C.basis)
    bidx = {x: i for i, x in enumerate(B.basis)}
    aidx = {x: i for i, x in enumerate(ideal)}
    cidx = {x: i for i, x in enumerate(C.basis)}
    bdeg = [B.degree(x) for x in B.basis]
    adeg = [A.degree(x) for x in ideal]
    cdeg = [C.degree(x) for x in C.basis]

    @lru_cache(maxsize=None)
    def left(b: int, a: int):
        acc: dict = {}
        for y, v in phi(ideal[a]).items():
            for z, w in B.product(B.basis[b], y).items():
                add_into(acc, bidx[z], v * w)
        return tuple(acc.items())

    @lru_cache(maxsize=None)
    def mid(a: int, a2: int):
        out = []
        for z, w in A.product(ideal[a], ideal[a2]).items():
            if A.degree(z) == 0:
                raise ValueError("product of ideal elements left the ideal")
            out.append((aidx[z], w))
        return tuple(out)

    @lru_cache(maxsize=None)
    def right(a: int, c: int):
        acc: dict = {}
        for y, v in psi(ideal[a]).items():
            for z, w in C.product(y, C.basis[c]).items():
                add_into(acc, cidx[z], v * w)
        return tuple(acc.items())

    blocks = {}
    for q in range(bound + 1):
        cells: dict[int, list[tuple]] = {}
        for p in range(q // min_deg + 1):
            found = []
            for db, bs in B_by_deg.items():
                for dc, cs in C_by_deg.items():
                    rest = q - db - dc
                    if rest < p * min_deg:
                        continue
                    for seq in _sequences(ideal_by_deg, rest, p):
                        aseq = tuple(aidx[x] for x in seq)
                        for b in bs:
                            for c in cs:
                                found.append((bidx[b], aseq, cidx[c]))
            if found:
                found.sort(key=lambda cell: (bdeg[cell[0]], cell))
                cells[p] = found
        diff = {}
        for p, cols in cells.items():
            if p == 0:
                continue
            rows = {cell: i for i, cell in enumerate(cells.get(p - 1, []))}
            mat = []
            for b, aseq, c in cols:
                acc: dict[int, int] = {}
                # running degree |x_0| + ... + |x_i|
                run = bdeg[b]
                # μ_0: b with a_1
                for b2, v in left(b, aseq[0]):
                    add_into(acc, rows[(b2, aseq[1:], c)], (-1 if run & 1 else 1) * v)
                for i in range(p - 1):
                    run += adeg[aseq[i]] - 1
                    s = -1 if run & 1 else 1
                    for a2, v in mid(aseq[i], aseq[i + 1]):
                        add_into(acc, rows[(b, aseq[:i] + (a2,) + aseq[i + 2:], c)], s * v)
                run += adeg[aseq[-1]] - 1
                s = -1 if run & 1 else 1
                for c2, v in right(aseq[-1], c):
                    add_into(acc, rows[(b, aseq[:-1], c2)], s * v)
                mat.append(sorted((r, int(v)) for r, v in acc.items()))
            diff[p] = mat
        if check:
            for p in diff:
                if p + 1 in diff:
                    bad = kernels.first_nonzero_product(diff[p], diff[p + 1])
                    if bad >= 0:
                        raise ArithmeticError(f"d∘d != 0 at internal degree {q}, weight {p + 1}, column {bad}")
        blocks[q] = BarBlock(q, cells, diff)
    return BarComplex(B, A, C, phi, psi, bound, blocks)


@dataclass
class TorTable:
    bound: int
    # {(q, p): dim Tor_p in internal degree q}
    dims: dict[tuple[int, int], int]
    certified: int = 0
    eliminated: int = 0

    def tor0(self) -> list[int]:
        out = [self.dims.get((q, 0), 0) for q in range(self.bound + 1)]
        while out and out[-1] == 0:
            out.pop()
        return out

    def higher(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.dims.items()) if k[1] > 0 and v}

    def higher_total(self) -> int:
        return sum(self.higher().values())

    def by_total_degree(self) -> dict[int, dict[str, int]]:
        """{total degree q - p: {"tor0": .., "higher": ..}}."""
        out: dict[int, dict[str, int]] = {}
        for (q, p), v in sorted(self.dims.items()):
            if not v:
                continue
            row = out.setdefault(q - p, {"tor0": 0, "higher": 0})
            row["tor0" if p == 0 else "higher"] += v
        return out

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "tor0": self.tor0(),
            "higher_total": self.higher_total(),
            "cells": [[q, p, v] for (q, p), v in sorted(self.dims.items()) if v],
        }


def _block_ranks(blk: BarBlock) -> tuple[dict[int, int], int, int]:
    ws = {p: len(c) for p, c in blk.cells.items()}
    top = max(ws, default=0)
    lower = {p: kernels.echelon_lower_bound(m) for p, m in blk.diff.items()}
    exact: dict[int, int] = {}
    for p in range(top + 1):
        lp = lower.get(p, 0)
        lp1 = lower.get(p + 1, 0)
        if lp + lp1 == ws.get(p, 0):
            exact[p] = lp
            exact[p + 1] = lp1
    exact[0] = 0
    certified = sum(1 for p in blk.diff if p in exact)
    eliminated = 0
    for p, m in blk.diff.items():
        if p not in exact:
            exact[p] = kernels.rank_int(m)
            eliminated += 1
    return exact, certified, eliminated


def tor_dimensions(bar: BarComplex) -> TorTable:
    dims = {}
    cert = elim = 0
    for q, blk in bar.blocks.items():
        ranks, c, e = _block_ranks(blk)
        cert += c
        elim += e
        for p, cells in blk.cells.items():
            dims[(q, p)] = len(cells) - ranks.get(p, 0) - ranks.get(p + 1, 0)
    return TorTable(bar.bound, dims, cert, elim)


def _convolve(table: TorTable, hilbert: list[int]) -> TorTable:
    dims: dict[tuple[int, int], int] = {}
    for (q, p), v in table.dims.items():
        for d, h in enumerate(hilbert):
            if q + d <= table.bound and v and h:
                dims[(q + d, p)] = dims.get((q + d, p), 0) + v * h
    return TorTable(table.bound, dims, table.certified, table.eliminated)


def _kills_ideal(psi: AlgebraMap) -> bool:
    return all(not psi(x) for x in psi.source.basis if psi.source.degree(x) > 0)


@lru_cache(maxsize=16)
def _left_tor(n: int, k: int, l: int, bound: int, fault: bool) -> TorTable:
    B, A = e_n(n, k + l), e_n(n, l)
    phi = collapse_map(n, l, k) if fault else relabel_map(n, l, k)
    ground = GroundField()
    bar = build_bar(B, A, ground, phi, unit_map(A, ground), bound)
    return tor_dimensions(bar)


@dataclass
class CollapseCertificate:
    m: int
    n: int
    k: int
    l: int
    bound: int
    passed: bool
    tor0: list[int]
    expected: list[int]
    higher: dict[tuple[int, int], int] = field(default_factory=dict)
    witness: str | None = None
    fault: str | None = None

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "k": self.k, "l": self.l, "bound": self.bound,
            "fault": self.fault,
            "passed": self.passed,
            "tor0": self.tor0,
            "expected_tor0": self.expected,
            "higher": [[q, p, v] for (q, p), v in sorted(self.higher.items())],
            "witness": self.witness,
        }


def em_collapse_check(m: int, n: int, k: int, l: int, bound: int = 6, fault: str | None = None) -> CollapseCertificate:
    """Bar complex of e_n*(k+l) <- e_n*(l) -> e_m*(l): higher Tor must vanish and Tor_0 match ESC.

    ``fault="collapse"`` replaces the subalgebra inclusion by :func:`collapse_map`.
    The right map is the restriction, which kills the augmentation ideal, so
    the complex is the one with trivial right coefficients tensored with
    e_m*(l); Tor is computed on that factor and convolved with the Hilbert
    series of e_m*(l).
    """
    if not 1 <= m < n:
        raise ValueError("need n > m >= 1")
    if k < 0 or l < 0 or k + l > MAX_POINTS:
        raise ValueError(f"resource guard: k + l must be at most {MAX_POINTS}")
    if fault not in (None, "collapse"):
        raise ValueError(f"unknown fault {fault!r}")
    psi = restrict_map(n, m, l)
    assert _kills_ideal(psi)
    base = _left_tor(n, k, l, bound, fault == "collapse")
    C = constrained_family(m).component(l)
    table = _convolve(base, C.hilbert())
    expected = esc_hilbert(EscContext(m, n, k, l))
    expected = [expected[q] if q < len(expected) else 0 for q in range(bound + 1)]
    while expected and expected[-1] == 0:
        expected.pop()
    tor0 = table.tor0()
    higher = table.higher()
    witness = None
    if higher:
        (q, p), v = next(iter(higher.items()))
        witness = f"Tor_{p} has dimension {v} in internal degree {q}"
    elif tor0 != expected:
        witness = f"Tor_0 = {tor0} but the pushout has {expected}"
    return CollapseCertificate(m, n, k, l, bound, witness is None, tor0, expected, higher, witness, fault)


def control_example(bound: int = 6, degree: int = 2) -> TorTable:
    """Q ⊗ Q[x]/(x^2) ⊗ Q: every bar differential vanishes, Tor_p = Q in degree q = 2p."""
    A = TruncatedPolynomial(degree, 1)
    k = GroundField()
    return tor_dimensions(build_bar(k, A, k, unit_map(A, k), unit_map(A, k), bound))

"""The two-colored Hopf cooperad ESC^c for the restriction e_n* -> e_m*.

Mixed-color components are the pushouts e_n*(k+l) ⊗_{e_n*(l)} e_m*(l).  By
freeness of e_n*(k+l) over the subalgebra on the last l points, a basis is

    (A, c)   A admissible with every first index in {1..k},  c a basis label of e_m*(l)

and a product is computed by normal-forming the free parts and dropping any
monomial with a first index > k (its subalgebra coefficient has positive
degree, and the restriction kills it).  The free color in arity k is e_n*(k).

Point conventions for an arity (k, l): free points 1..k, constrained points
k+1..k+l.  For a composite shape, free points are numbered slot by slot,
free slots first and then the free points sitting in constrained slots;
constrained points are numbered slot by slot.  Inside a constrained slot the
local numbering is again free points first.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from . import arnold
from .algebra import Component, Element, TensorElement, ZeroComponent, add_into, koszul_sign
from .arnold import ArnoldFamily, Injection, _nf_pairs, _nf_word, e_n
from .exactlin import format_rational
from .perm import PermFamily

__all__ = [
    "EscContext",
    "EscComponent",
    "EscElement",
    "ColoredBlocks",
    "ColoredInjection",
    "constrained_family",
    "esc_component",
    "esc_basis",
    "esc_hilbert",
    "esc_multiply",
    "esc_cocompose",
    "esc_colambda",
    "esc_generator",
    "esc_pure",
    "triv_component",
    "paint_component",
    "component_to_json",
    "verify_hopf_cooperad",
    "CheckResult",
    "HopfReport",
    "enumerate_blocks",
    "clear_caches",
]

FREE = "free"
MIXED = "mixed"


def constrained_family(m: int):
    if m < 1:
        raise ValueError("m must be >= 1")
    return PermFamily() if m == 1 else ArnoldFamily(m)


@dataclass(frozen=True)
class EscContext:
    m: int
    n: int
    k: int
    l: int
    color: str = MIXED

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise ValueError(f"need n > m >= 1 (got m={self.m}, n={self.n})")
        if self.k < 0 or self.l < 0:
            raise ValueError("arities must be non-negative")
        if self.color not in (FREE, MIXED):
            raise ValueError(f"unknown color {self.color!r}")
        if self.color == FREE and self.l:
            raise ValueError("free output color admits no constrained inputs")

    @property
    def component(self) -> "EscComponent":
        return esc_component(self)

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "k": self.k, "l": self.l, "color": self.color}


class EscComponent(Component):
    def __init__(self, ctx: EscContext):
        self.context = ctx
        self.key = ("esc", ctx.m, ctx.n, ctx.k, ctx.l, ctx.color)
        n = ctx.n
        if ctx.color == FREE:
            base = e_n(n, ctx.k)
            self.basis = base.basis
            self.unit = ()
            self._cdeg = None
        else:
            cfam = constrained_family(ctx.m)
            ccomp = cfam.component(ctx.l)
            amb = e_n(n, ctx.k + ctx.l)
            frees = [A for A in amb.basis if all(i <= ctx.k for i, _ in A)]
            aidx = {A: t for t, A in enumerate(frees)}
            labels = [(A, c) for A in frees for c in ccomp.basis]
            self._cdeg = ccomp.degree
            labels.sort(key=lambda x: (self.degree(x), aidx[x[0]], ccomp.index(x[1])))
            self.basis = tuple(labels)
            self.unit = ((), ccomp.unit) if ccomp.unit is not None else None
            self._ccomp = ccomp

    def degree(self, label) -> int:
        n = self.context.n
        if self._cdeg is None:
            return len(label) * (n - 1)
        A, c = label
        return len(A) * (n - 1) + self._cdeg(c)

    def product(self, x, y) -> dict:
        ctx = self.context
        if ctx.color == FREE:
            return dict(_nf_word(ctx.n, x + y))
        return _esc_product(ctx.m, ctx.n, ctx.k, ctx.l, x, y)

    def one_terms(self) -> dict:
        if self.context.color == FREE:
            return {(): 1}
        return {((), c): v for c, v in self._ccomp.one_terms().items()}

    def __repr__(self) -> str:
        c = self.context
        return f"ESC[{c.m},{c.n}]({c.k},{c.l},{c.color})"


_CACHED = []


def _cached(fn):
    wrapped = lru_cache(maxsize=None)(fn)
    _CACHED.append(wrapped)
    return wrapped


def clear_caches() -> None:
    for fn in _CACHED:
        fn.cache_clear()


@_cached
def _component(ctx: EscContext) -> EscComponent:
    return EscComponent(ctx)


def esc_component(ctx: EscContext | tuple) -> EscComponent:
    if not isinstance(ctx, EscContext):
        ctx = EscContext(*ctx)
    return _component(ctx)


def _keep(mono, k: int) -> bool:
    return all(i <= k for i, _ in mono)


@_cached
def _esc_product(m: int, n: int, k: int, l: int, x, y) -> dict:
    A, c = x
    B, d = y
    ccomp = constrained_family(m).component(l)
    sign = -1 if (ccomp.degree(c) * len(B) * (n - 1)) & 1 else 1
    cd = ccomp.product(c, d)
    if not cd:
        return {}
    out: dict = {}
    for AB, u in _nf_word(n, A + B):
        if _keep(AB, k):
            for e, v in cd.items():
                add_into(out, (AB, e), sign * u * v)
    return out


class EscElement(Element):
    __slots__ = ()

    @property
    def context(self) -> EscContext:
        return self.component.context

    def __str__(self) -> str:
        return render(self)


def render(x: EscElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for lab, c in x.sorted_terms():
        if x.context.color == FREE:
            A, cl = lab, None
        else:
            A, cl = lab
        mono = "*".join(f"w[{i},{j}]" for i, j in A) or "1"
        if cl is not None:
            if x.context.m == 1:
                mono += f" (x) d{list(cl)}"
            else:
                mono += " (x) " + ("*".join(f"v[{i},{j}]" for i, j in cl) or "1")
        parts.append(f"{format_rational(c)}*{mono}")
    return " + ".join(parts)


def esc_basis(ctx) -> list:
    return list(esc_component(ctx).basis)


def esc_hilbert(ctx) -> list[int]:
    return esc_component(ctx).hilbert()


def esc_element(ctx, terms) -> EscElement:
    return EscElement(esc_component(ctx), terms)


def esc_one(ctx) -> EscElement:
    comp = esc_component(ctx)
    return EscElement(comp, comp.one_terms())


def esc_pure(ctx, free_part: Element, constrained_part: Element | None = None) -> EscElement:
    """Image of free_part ⊗ constrained_part (free_part in e_n*(k+l))."""
    ctx = ctx if isinstance(ctx, EscContext) else EscContext(*ctx)
    comp = esc_component(ctx)
    if ctx.color == FREE:
        return EscElement(comp, free_part.terms)
    if constrained_part is None:
        constrained_part = constrained_family(ctx.m).component(ctx.l).one()
    terms: dict = {}
    for A, a in free_part.terms.items():
        if not _keep(A, ctx.k):
            continue
        for c, b in constrained_part.terms.items():
            add_into(terms, (A, c), a * b)
    return EscElement(comp, terms)


def esc_generator(ctx, i: int, j: int, kind: str = "n") -> EscElement:
    """The class of w_ij (kind ``"n"``, points of 1..k+l) or of the constrained
    generator on constrained points i, j (kind ``"m"``, local 1..l, m >= 2)."""
    ctx = ctx if isinstance(ctx, EscContext) else EscContext(*ctx)
    if kind == "n":
        return esc_pure(ctx, arnold.normal_form([(i, j)], (ctx.n, ctx.k + ctx.l)))
    if ctx.m == 1:
        raise ValueError("e_1* has no generators of positive degree")
    amb = e_n(ctx.n, ctx.k + ctx.l).one()
    return esc_pure(ctx, amb, arnold.normal_form([(i, j)], (ctx.m, ctx.l)))


def esc_multiply(a: EscElement, b: EscElement) -> EscElement:
    if a.component != b.component:
        raise ValueError(f"context mismatch: {a.component!r} vs {b.component!r}")
    return a * b


# ----------------------------------------------------------------------------
# trivial and painted colored cooperads


_ZERO = ZeroComponent()


def triv_component(family, k: int, l: int, color: str = MIXED) -> Component:
    """C_triv: C(l) in the mixed color, zero elsewhere."""
    if color == MIXED:
        return family.component(l)
    return _ZERO


def paint_component(family, k: int, l: int, color: str = MIXED) -> Component:
    """C_paint: C(k) for free output with no constrained inputs, C(k+l) for mixed output."""
    if color == FREE:
        return family.component(k) if l == 0 else _ZERO
    return family.component(k + l)


# ----------------------------------------------------------------------------
# cocomposition


@dataclass(frozen=True)
class ColoredBlocks:
    """Shape of a two-colored cocomposition.

    ``free_counts[a]`` points go into free slot a (output color free);
    ``mixed_counts[b] = (k', l')`` free and constrained points go into
    constrained slot b.  The base shape is (len(free_counts), len(mixed_counts)).
    """

    free_counts: tuple[int, ...]
    mixed_counts: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "free_counts", tuple(int(x) for x in self.free_counts))
        object.__setattr__(self, "mixed_counts", tuple((int(a), int(b)) for a, b in self.mixed_counts))
        if any(x < 1 for x in self.free_counts):
            raise ValueError(f"free slots need at least one point: {self.free_counts}")
        for a, b in self.mixed_counts:
            if a < 0 or b < 0 or a + b < 1:
                raise ValueError(f"constrained slots need at least one point: {self.mixed_counts}")
        if not self.free_counts and not self.mixed_counts:
            raise ValueError("no slots")

    @property
    def base(self) -> tuple[int, int]:
        return len(self.free_counts), len(self.mixed_counts)

    @property
    def composite(self) -> tuple[int, int]:
        K = sum(self.free_counts) + sum(a for a, _ in self.mixed_counts)
        L = sum(b for _, b in self.mixed_counts)
        return K, L

    def point_table(self) -> dict[int, tuple[tuple[str, int], int]]:
        """Composite point -> ((slot kind, slot index), local index)."""
        K, _ = self.composite
        table = {}
        u = 0
        for a, size in enumerate(self.free_counts, 1):
            for loc in range(1, size + 1):
                u += 1
                table[u] = (("f", a), loc)
        for b, (kf, _) in enumerate(self.mixed_counts, 1):
            for loc in range(1, kf + 1):
                u += 1
                table[u] = (("c", b), loc)
        v = K
        for b, (kf, lc) in enumerate(self.mixed_counts, 1):
            for loc in range(1, lc + 1):
                v += 1
                table[v] = (("c", b), kf + loc)
        return table

    def to_json(self) -> dict:
        return {"free": list(self.free_counts), "mixed": [list(x) for x in self.mixed_counts]}


def _slot_contexts(ctx: EscContext, blocks: ColoredBlocks) -> list[EscContext]:
    k, l = blocks.base
    color = ctx.color
    out = [EscContext(ctx.m, ctx.n, k, l, color)]
    out += [EscContext(ctx.m, ctx.n, s, 0, FREE) for s in blocks.free_counts]
    out += [EscContext(ctx.m, ctx.n, a, b, MIXED) for a, b in blocks.mixed_counts]
    return out


def _check_shape(ctx: EscContext, blocks: ColoredBlocks) -> None:
    if blocks.composite != (ctx.k, ctx.l):
        raise ValueError(f"blocks of composite arity {blocks.composite} do not fit {(ctx.k, ctx.l)}")
    if ctx.color == FREE and blocks.mixed_counts:
        raise ValueError("free output color has no constrained slots")


@_cached
def _cocompose_label(ctx: EscContext, label, blocks: ColoredBlocks) -> tuple:
    n = ctx.n
    k, l = blocks.base
    table = blocks.point_table()
    nfree = len(blocks.free_counts)
    # atomic n-factors: 0 = base, a = free slot a, nfree + b = constrained slot b
    pos = {("f", a): a for a in range(1, nfree + 1)}
    pos.update({("c", b): k + b for b in range(1, l + 1)})
    A, c = (label, None) if ctx.color == FREE else label
    slots, gens = [], []
    for u, v in A:
        su, lu = table[u]
        sv, lv = table[v]
        if su == sv:
            slots.append(su[1] if su[0] == "f" else nfree + su[1])
            gens.append((lu, lv))
        elif su[0] == "c" and sv[0] == "c":
            return ()
        else:
            slots.append(0)
            gens.append((pos[su], pos[sv]))
    odd = (n - 1) & 1
    sign = koszul_sign(slots, [1] * len(slots)) if odd else 1
    words: list[list] = [[] for _ in range(1 + nfree + l)]
    for s, g in zip(slots, gens):
        words[s].append(g)
    limits = [k] + [None] * nfree + [kf for kf, _ in blocks.mixed_counts]
    parts = []
    for s, w in enumerate(words):
        nf = _nf_pairs(n, w)
        if limits[s] is not None:
            nf = {mono: v for mono, v in nf.items() if _keep(mono, limits[s])}
        if not nf:
            return ()
        parts.append(nf)
    if ctx.color == FREE:
        out: dict = {}
        for combo in itertools.product(*(p.items() for p in parts)):
            coef = sign
            for _, v in combo:
                coef *= v
            add_into(out, tuple(mono for mono, _ in combo), coef)
        return tuple(out.items())
    cfam = constrained_family(ctx.m)
    cparts = cfam.cocompose_label(c, tuple(b for _, b in blocks.mixed_counts))
    cdeg = cfam.component  # degree lookup per arity
    base_c = cdeg(l).degree
    slot_c = [cdeg(b).degree for _, b in blocks.mixed_counts]
    out = {}
    for combo in itertools.product(*(p.items() for p in parts)):
        coef = sign
        for _, v in combo:
            coef *= v
        monos = [mono for mono, _ in combo]
        ndeg = [len(mono) * (n - 1) for mono in monos]
        for ckey, cv in cparts.items():
            # m-part of factor g passes the n-parts of all later factors
            par = base_c(ckey[0]) * sum(ndeg[1:])
            for b in range(1, l + 1):
                par += slot_c[b - 1](ckey[b]) * sum(ndeg[nfree + b + 1:])
            s = -1 if par & 1 else 1
            key = ((monos[0], ckey[0]),) + tuple(monos[1:nfree + 1]) + tuple(
                (monos[nfree + b], ckey[b]) for b in range(1, l + 1)
            )
            add_into(out, key, s * coef * cv)
    return tuple(out.items())


def esc_cocompose(x: EscElement, blocks: ColoredBlocks) -> TensorElement:
    """Dual of two-colored insertion; factors are base, free slots, constrained slots."""
    ctx = x.context
    _check_shape(ctx, blocks)
    comps = [esc_component(c) for c in _slot_contexts(ctx, blocks)]
    acc: dict = {}
    for lab, v in x.terms.items():
        for key, w in _cocompose_label(ctx, lab, blocks):
            add_into(acc, key, v * w)
    return TensorElement(comps, acc)


# ----------------------------------------------------------------------------
# colored Λ-costructure


@dataclass(frozen=True)
class ColoredInjection:
    free: Injection
    constrained: Injection | None = None

    def source(self) -> tuple[int, int]:
        return self.free.source, self.constrained.source if self.constrained else 0

    def target(self) -> tuple[int, int]:
        return self.free.target, self.constrained.target if self.constrained else 0

    def then(self, other: "ColoredInjection") -> "ColoredInjection":
        c = None
        if self.constrained is not None:
            c = self.constrained.then(other.constrained)
        return ColoredInjection(self.free.then(other.free), c)

    def total(self) -> Injection:
        k, l = self.source()
        k2, l2 = self.target()
        images = list(self.free.images)
        if self.constrained is not None:
            images += [k2 + y for y in self.constrained.images]
        return Injection(tuple(images), k2 + l2)


@_cached
def _colambda_label(ctx: EscContext, label, inj: ColoredInjection) -> tuple:
    k2, l2 = inj.target()
    total = inj.total()
    A, c = (label, None) if ctx.color == FREE else label
    amb = arnold.ArnoldElement(e_n(ctx.n, ctx.k + ctx.l), {A: 1})
    img = arnold.relabel(amb, total)
    monos = {mono: v for mono, v in img.terms.items() if _keep(mono, k2)}
    if ctx.color == FREE:
        return tuple(monos.items())
    cimg = constrained_family(ctx.m).relabel_label(c, inj.constrained)
    out: dict = {}
    for mono, v in monos.items():
        for d, w in cimg.items():
            add_into(out, (mono, d), v * w)
    return tuple(out.items())


def esc_colambda(x: EscElement, inj: ColoredInjection) -> EscElement:
    """Pull back along forgetting points; the injection must preserve colors."""
    ctx = x.context
    if ctx.color == MIXED and inj.constrained is None:
        if ctx.l:
            raise ValueError("mixed arity needs an injection of constrained points")
        inj = ColoredInjection(inj.free, Injection((), 0))
    if ctx.color == FREE and inj.constrained is not None and inj.constrained.source:
        raise ValueError("free color has no constrained points to relabel")
    if inj.source() != (ctx.k, ctx.l):
        raise ValueError(f"injection source {inj.source()} does not match arity {(ctx.k, ctx.l)}")
    k2, l2 = inj.target()
    target = EscContext(ctx.m, ctx.n, k2, l2 if ctx.color == MIXED else 0, ctx.color)
    if ctx.color == FREE and l2:
        raise ValueError("color-breaking injection: free color cannot gain constrained points")
    acc: dict = {}
    for lab, v in x.terms.items():
        for lab2, w in _colambda_label(ctx, lab, inj):
            add_into(acc, lab2, v * w)
    return EscElement(esc_component(target), acc)


# ----------------------------------------------------------------------------
# serialization


def label_to_json(ctx: EscContext, label) -> dict:
    A, c = (label, None) if ctx.color == FREE else label
    out = {"I": [i for i, _ in A], "f": [j for _, j in A]}
    if c is not None:
        if ctx.m == 1:
            out["perm"] = list(c)
        else:
            out["c_I"] = [i for i, _ in c]
            out["c_f"] = [j for _, j in c]
    return out


def label_from_json(ctx: EscContext, data: dict):
    A = tuple(zip(data["I"], data["f"]))
    if ctx.color == FREE:
        return A
    if ctx.m == 1:
        return A, tuple(data["perm"])
    return A, tuple(zip(data["c_I"], data["c_f"]))


def component_to_json(ctx, products: bool = True) -> dict:
    ctx = ctx if isinstance(ctx, EscContext) else EscContext(*ctx)
    comp = esc_component(ctx)
    out = {
        "schema": "swisscheese.esc/1",
        "context": ctx.to_json(),
        "basis": [dict(label_to_json(ctx, lab), degree=comp.degree(lab)) for lab in comp.basis],
        "hilbert": comp.hilbert(),
    }
    if products:
        table = []
        for i, x in enumerate(comp.basis):
            for j, y in enumerate(comp.basis):
                prod = comp.product(x, y)
                if prod:
                    entries = sorted((comp.index(z), format_rational(Fraction(v))) for z, v in prod.items())
                    table.append([i, j, [list(e) for e in entries]])
        out["products"] = table
    return out


# ----------------------------------------------------------------------------
# shape enumeration


def _compositions(total: int, minimum: int = 1) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(minimum, total + 1):
        for rest in _compositions(total - first, minimum):
            yield (first,) + rest


def _pair_sequences(kf: int, lc: int) -> Iterator[tuple[tuple[int, int], ...]]:
    if kf == 0 and lc == 0:
        yield ()
        return
    for a in range(kf + 1):
        for b in range(lc + 1):
            if a + b == 0:
                continue
            for rest in _pair_sequences(kf - a, lc - b):
                yield ((a, b),) + rest


def enumerate_blocks(K: int, L: int, color: str = MIXED) -> list[ColoredBlocks]:
    """All cocomposition shapes with composite arity (K, L)."""
    out = []
    if color == FREE:
        return [ColoredBlocks(fc) for fc in _compositions(K)] if K else []
    for kf in range(K + 1):
        for fc in _compositions(kf):
            for mc in _pair_sequences(K - kf, L):
                if fc or mc:
                    out.append(ColoredBlocks(fc, mc))
    return out


# ----------------------------------------------------------------------------
# axiom suite


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    passed: bool = True
    witness: str | None = None

    def fail(self, witness: str) -> None:
        if self.passed:
            self.passed = False
            self.witness = witness

    def to_json(self) -> dict:
        return {"name": self.name, "instances": self.instances, "passed": self.passed, "witness": self.witness}


@dataclass
class HopfReport:
    m: int
    n: int
    bound: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def witness(self) -> str | None:
        for c in self.checks:
            if not c.passed:
                return f"{c.name}: {c.witness}"
        return None

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "bound": self.bound,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def _contexts(m: int, n: int, bound: int) -> list[EscContext]:
    out = []
    for total in range(1, bound + 1):
        out.append(EscContext(m, n, total, 0, FREE))
        for L in range(total + 1):
            out.append(EscContext(m, n, total - L, L, MIXED))
    return out


def _check_relators(report: HopfReport, m: int, n: int, bound: int) -> None:
    check = CheckResult("relators")
    for deg_n in sorted({n, m} - {1}):
        for r in range(2, bound + 1):
            ctx = (deg_n, r)
            for i, j, k in itertools.permutations(range(1, r + 1), 3):
                check.instances += 1
                rel = (
                    arnold.normal_form([(i, j), (j, k)], ctx)
                    + arnold.normal_form([(j, k), (k, i)], ctx)
                    + arnold.normal_form([(k, i), (i, j)], ctx)
                )
                if rel:
                    check.fail(f"Arnold relator ({i},{j},{k}) in e_{deg_n}({r}) normalizes to {rel}")
            for i, j in itertools.permutations(range(1, r + 1), 2):
                check.instances += 1
                lhs = arnold.normal_form([(i, j)], ctx)
                rhs = arnold.normal_form([(j, i)], ctx).scale(-1 if deg_n % 2 else 1)
                if lhs != rhs:
                    check.fail(f"symmetry w[{i},{j}] in e_{deg_n}({r}): {lhs} vs {rhs}")
                sq = arnold.normal_form([(i, j), (i, j)], ctx)
                if sq:
                    check.fail(f"square w[{i},{j}]^2 in e_{deg_n}({r}) = {sq}")
    report.checks.append(check)


def _check_algebra(report: HopfReport, ctxs: list[EscContext]) -> None:
    assoc = CheckResult("product associative")
    comm = CheckResult("product graded-commutative")
    unit = CheckResult("product unital")
    dims = CheckResult("basis size")
    for ctx in ctxs:
        comp = esc_component(ctx)
        B = comp.basis
        els = [EscElement(comp, {b: 1}) for b in B]
        one = EscElement(comp, comp.one_terms())
        expected = _expected_dim(ctx)
        dims.instances += 1
        if len(B) != expected:
            dims.fail(f"{comp!r}: {len(B)} basis labels, expected {expected}")
        for x in els:
            unit.instances += 1
            if one * x != x or x * one != x:
                unit.fail(f"{comp!r}: unit fails on {x}")
        for x, y in itertools.product(els, repeat=2):
            comm.instances += 1
            s = -1 if (x.degree() * y.degree()) & 1 else 1
            if x * y != (y * x).scale(s):
                comm.fail(f"{comp!r}: {x} and {y}")
        for x, y, z in itertools.product(els, repeat=3):
            assoc.instances += 1
            if (x * y) * z != x * (y * z):
                assoc.fail(f"{comp!r}: ({x})({y})({z})")
                break
    report.checks += [dims, unit, comm, assoc]


def _expected_dim(ctx: EscContext) -> int:
    from math import factorial

    if ctx.color == FREE:
        return factorial(ctx.k)
    return factorial(ctx.k + ctx.l) // factorial(ctx.l) * factorial(ctx.l)


def _algebra_generators(ctx: EscContext) -> list[EscElement]:
    """Elements generating the component as an algebra."""
    comp = esc_component(ctx)
    gens = []
    total = ctx.k + ctx.l
    for i, j in itertools.combinations(range(1, total + 1), 2):
        g = esc_generator(ctx, i, j)
        if g:
            gens.append(g)
    if ctx.color == MIXED:
        if ctx.m == 1:
            for c in constrained_family(1).component(ctx.l).basis:
                gens.append(EscElement(comp, {((), c): 1}))
        else:
            for i, j in itertools.combinations(range(1, ctx.l + 1), 2):
                gens.append(esc_generator(ctx, i, j, kind="m"))
    return gens


def _check_cocompose_multiplicative(report: HopfReport, ctxs: list[EscContext]) -> None:
    check = CheckResult("cocomposition is an algebra map")
    unit = CheckResult("cocomposition preserves units")
    for ctx in ctxs:
        comp = esc_component(ctx)
        gens = _algebra_generators(ctx)
        one = EscElement(comp, comp.one_terms())
        for blocks in enumerate_blocks(ctx.k, ctx.l, ctx.color):
            unit.instances += 1
            d1 = esc_cocompose(one, blocks)
            expect = TensorElement.pure(*(c.one() for c in d1.components))
            if d1 != expect:
                unit.fail(f"{comp!r} blocks {blocks.to_json()}")
            for g in gens:
                dg = esc_cocompose(g, blocks)
                for b in comp.basis:
                    y = EscElement(comp, {b: 1})
                    check.instances += 1
                    if esc_cocompose(g * y, blocks) != dg * esc_cocompose(y, blocks):
                        check.fail(f"{comp!r} blocks {blocks.to_json()}: generator {g} times {y}")
                        break
    report.checks += [unit, check]


def _check_counits(report: HopfReport, ctxs: list[EscContext]) -> None:
    check = CheckResult("counit")
    for ctx in ctxs:
        comp = esc_component(ctx)
        shapes = []
        if ctx.color == FREE:
            shapes.append((ColoredBlocks((1,) * ctx.k), "leaves"))
            shapes.append((ColoredBlocks((ctx.k,)), "root"))
        else:
            shapes.append((ColoredBlocks((1,) * ctx.k, ((0, 1),) * ctx.l), "leaves"))
            shapes.append((ColoredBlocks((), ((ctx.k, ctx.l),)), "root"))
        for blocks, kind in shapes:
            for b in comp.basis:
                x = EscElement(comp, {b: 1})
                check.instances += 1
                d = esc_cocompose(x, blocks).drop_trivial_factors()
                if d != TensorElement.pure(x).drop_trivial_factors():
                    check.fail(f"{comp!r} {kind} counit on {x}")
    report.checks.append(check)


def _tagged(t: TensorElement, tags: list) -> tuple[TensorElement, list]:
    keep = [i for i, c in enumerate(t.components) if not c.is_trivial()]
    acc: dict = {}
    for key, v in t.terms.items():
        add_into(acc, tuple(key[i] for i in keep), v)
    return TensorElement([t.components[i] for i in keep], acc), [tags[i] for i in keep]


def _align(t: TensorElement, tags: list, order: list) -> TensorElement | None:
    if sorted(map(repr, tags)) != sorted(map(repr, order)):
        return None
    where = {repr(tag): i for i, tag in enumerate(tags)}
    return t.permute([where[repr(tag)] for tag in order])


def coassociativity_pairs(ctx: EscContext) -> Iterator[tuple[ColoredBlocks, int, ColoredBlocks]]:
    """(outer blocks, refined slot index, inner blocks) with matching point orders."""
    for outer in enumerate_blocks(ctx.k, ctx.l, ctx.color):
        nf = len(outer.free_counts)
        for a, size in enumerate(outer.free_counts):
            for inner in enumerate_blocks(size, 0, FREE):
                yield outer, a, inner
        for b, (kf, lc) in enumerate(outer.mixed_counts):
            if any(x[0] for x in outer.mixed_counts[:b]):
                continue
            for inner in enumerate_blocks(kf, lc, MIXED):
                yield outer, nf + b, inner


def coassociativity_sides(x: EscElement, outer: ColoredBlocks, slot: int, inner: ColoredBlocks):
    """Both iterates, aligned to the same factor order (or raise)."""
    ctx = x.context
    nf, nc = outer.base
    # side 1: cocompose, then cocompose the chosen slot factor
    first = esc_cocompose(x, outer)
    slot_comp = first.components[1 + slot]

    def inner_map(lab):
        return esc_cocompose(EscElement(slot_comp, {lab: 1}), inner)

    side1 = first.apply_to_factor(1 + slot, inner_map)
    tags1 = ["base"] + [("f", a) for a in range(nf)] + [("c", b) for b in range(nc)]
    itags = [("in", "base")] + [("in", "f", i) for i in range(len(inner.free_counts))] + [
        ("in", "c", j) for j in range(len(inner.mixed_counts))
    ]
    tags1 = tags1[: 1 + slot] + itags + tags1[2 + slot:]

    # side 2: the refined shape, then regroup the base
    if slot < nf:
        a = slot
        fc = list(outer.free_counts)
        fine = ColoredBlocks(tuple(fc[:a]) + inner.free_counts + tuple(fc[a + 1:]), outer.mixed_counts)
        t = len(inner.free_counts)
        group = ColoredBlocks(tuple(1 if i != a else t for i in range(nf)), ((0, 1),) * nc)
        gtags = ["base"] + [("in", "base") if i == a else ("triv", "f", i) for i in range(nf)] + [
            ("triv", "c", b) for b in range(nc)
        ]
        ftags = [("f", i) for i in range(a)] + [("in", "f", i) for i in range(t)] + [
            ("f", i) for i in range(a + 1, nf)
        ] + [("c", b) for b in range(nc)]
    else:
        b = slot - nf
        mc = list(outer.mixed_counts)
        f, g = inner.base
        fine = ColoredBlocks(outer.free_counts + inner.free_counts,
                             tuple(mc[:b]) + inner.mixed_counts + tuple(mc[b + 1:]))
        group = ColoredBlocks((1,) * nf, tuple((f, g) if i == b else (0, 1) for i in range(nc)))
        gtags = ["base"] + [("triv", "f", i) for i in range(nf)] + [
            ("in", "base") if i == b else ("triv", "c", i) for i in range(nc)
        ]
        ftags = [("f", i) for i in range(nf)] + [("in", "f", i) for i in range(f)] + [
            ("c", i) for i in range(b)
        ] + [("in", "c", j) for j in range(g)] + [("c", i) for i in range(b + 1, nc)]
    second = esc_cocompose(x, fine)
    base_comp = second.components[0]

    def group_map(lab):
        return esc_cocompose(EscElement(base_comp, {lab: 1}), group)

    side2 = second.apply_to_factor(0, group_map)
    tags2 = gtags + ftags
    s1, t1 = _tagged(side1, tags1)
    s2, t2 = _tagged(side2, tags2)
    aligned = _align(s2, t2, t1)
    if aligned is None:
        raise AssertionError(f"factor mismatch: {t1} vs {t2}")
    return s1, aligned


def _check_coassociativity(report: HopfReport, ctxs: list[EscContext]) -> None:
    check = CheckResult("coassociativity")
    for ctx in ctxs:
        comp = esc_component(ctx)
        for outer, slot, inner in coassociativity_pairs(ctx):
            for b in comp.basis:
                x = EscElement(comp, {b: 1})
                check.instances += 1
                try:
                    s1, s2 = coassociativity_sides(x, outer, slot, inner)
                except AssertionError as exc:
                    check.fail(f"{comp!r} {outer.to_json()} slot {slot} {inner.to_json()}: {exc}")
                    break
                if s1 != s2:
                    check.fail(f"{comp!r} outer {outer.to_json()} slot {slot} inner {inner.to_json()} on {x}")
                    break
    report.checks.append(check)


def _random_injection(rng: random.Random, r: int, s: int) -> Injection:
    return Injection(tuple(rng.sample(range(1, s + 1), r)), s)


def _check_colambda(report: HopfReport, ctxs: list[EscContext], rng: random.Random) -> None:
    func = CheckResult("colambda functorial")
    alg = CheckResult("colambda is an algebra map")
    compat = CheckResult("colambda compatible with cocomposition")
    for ctx in ctxs:
        comp = esc_component(ctx)
        targets = [c for c in ctxs if c.color == ctx.color and c.k >= ctx.k and c.l >= ctx.l]
        for tgt in targets:
            inj = ColoredInjection(_random_injection(rng, ctx.k, tgt.k),
                                   _random_injection(rng, ctx.l, tgt.l) if ctx.color == MIXED else None)
            for b in comp.basis:
                x = EscElement(comp, {b: 1})
                y = esc_colambda(x, inj)
                for g in _algebra_generators(ctx):
                    alg.instances += 1
                    if esc_colambda(g * x, inj) != esc_colambda(g, inj) * y:
                        alg.fail(f"{comp!r} -> {tgt.k, tgt.l}: {g} * {x}")
                for top in targets:
                    if top.k < tgt.k or top.l < tgt.l:
                        continue
                    inj2 = ColoredInjection(_random_injection(rng, tgt.k, top.k),
                                            _random_injection(rng, tgt.l, top.l) if ctx.color == MIXED else None)
                    func.instances += 1
                    if esc_colambda(y, inj2) != esc_colambda(x, inj.then(inj2)):
                        func.fail(f"{comp!r} via {tgt.k, tgt.l} to {top.k, top.l} on {x}")
    # slotwise point-forgetting commutes with cocomposition
    for ctx in ctxs:
        for blocks2 in enumerate_blocks(ctx.k, ctx.l, ctx.color):
            for small, inj, slot_injs in _slotwise_restrictions(blocks2, rng):
                sctx = EscContext(ctx.m, ctx.n, *small.composite, ctx.color)
                scomp = esc_component(sctx)
                for b in scomp.basis:
                    x = EscElement(scomp, {b: 1})
                    compat.instances += 1
                    lhs = esc_cocompose(esc_colambda(x, inj), blocks2)
                    rhs = esc_cocompose(x, small)
                    for pos, sinj in enumerate(slot_injs):
                        if sinj is None:
                            continue

                        def fn(lab, _pos=pos, _sinj=sinj, _rhs=rhs):
                            return esc_colambda(EscElement(_rhs.components[_pos], {lab: 1}), _sinj)

                        rhs = rhs.apply_to_factor(pos, fn)
                    if lhs != rhs:
                        compat.fail(f"{scomp!r} blocks {small.to_json()} -> {blocks2.to_json()} on {x}")
    report.checks += [func, alg, compat]


def _slotwise_restrictions(blocks2: ColoredBlocks, rng: random.Random):
    """Shapes obtained by forgetting points inside slots, with the induced injections.

    Yields (smaller blocks, composite colored injection, per-factor injections)
    where the base factor is untouched.
    """
    nf, nc = blocks2.base
    choices = []
    for size in blocks2.free_counts:
        choices.append([s for s in range(1, size + 1)])
    for kf, lc in blocks2.mixed_counts:
        choices.append([(a, b) for a in range(kf + 1) for b in range(lc + 1) if a + b >= 1])
    options = list(itertools.product(*choices))
    rng.shuffle(options)
    for pick in options[:4]:
        free_small = pick[:nf]
        mixed_small = pick[nf:]
        small = ColoredBlocks(free_small, mixed_small)
        slot_injs: list = [None]
        per_slot_free, per_slot_con = [], []
        for size, s in zip(blocks2.free_counts, free_small):
            inj = _random_injection(rng, s, size)
            per_slot_free.append(inj)
            slot_injs.append(ColoredInjection(inj))
        for (kf, lc), (a, b) in zip(blocks2.mixed_counts, mixed_small):
            fi = _random_injection(rng, a, kf)
            ci = _random_injection(rng, b, lc)
            per_slot_con.append((fi, ci))
            slot_injs.append(ColoredInjection(fi, ci))
        # assemble the composite injection from the slot tables
        tab_small = small.point_table()
        tab_big = blocks2.point_table()
        rev = {v: u for u, v in tab_big.items()}
        Ks, Ls = small.composite
        Kb, Lb = blocks2.composite
        images = []
        for u in range(1, Ks + Ls + 1):
            (kind, idx), loc = tab_small[u]
            if kind == "f":
                new_loc = per_slot_free[idx - 1](loc)
            else:
                fi, ci = per_slot_con[idx - 1]
                kf_small = mixed_small[idx - 1][0]
                kf_big = blocks2.mixed_counts[idx - 1][0]
                new_loc = fi(loc) if loc <= kf_small else kf_big + ci(loc - kf_small)
            images.append(rev[((kind, idx), new_loc)])
        free_img = tuple(images[:Ks])
        con_img = tuple(y - Kb for y in images[Ks:])
        inj = ColoredInjection(Injection(free_img, Kb), Injection(con_img, Lb) if Lb or Ls else None)
        yield small, inj, slot_injs


def verify_hopf_cooperad(m: int, n: int, bound: int = 3, seed: int = 0) -> HopfReport:
    """Exact check of the colored Hopf cooperad axioms for total arity <= bound."""
    if bound > 5:
        raise ValueError("arity bound above 5 is refused (resource guard)")
    report = HopfReport(m, n, bound)
    rng = random.Random(seed)
    ctxs = _contexts(m, n, bound)
    _check_relators(report, m, n, bound)
    _check_algebra(report, ctxs)
    _check_cocompose_multiplicative(report, ctxs)
    _check_counits(report, ctxs)
    _check_coassociativity(report, ctxs)
    _check_colambda(report, ctxs, rng)
    return report

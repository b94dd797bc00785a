"""Cohomology algebras e_n*(r) of the little n-disks operad (n >= 2).

e_n*(r) is generated by classes w_ij (1 <= i != j <= r) of degree n-1 with
w_ij = (-1)^n w_ji and the three-term (Arnold) relation.  Elements are kept
in normal form on the basis of *admissible* monomials

    w_{I,f} = prod_{i in I} w_{i f(i)},   f(i) > i,

written as tuples of pairs ``((i, f(i)), ...)`` sorted by ``i``.  There are
r! of them.

Rewriting: squares vanish (imposed for all n), and whenever two factors
share a first index i, say w_ij w_ik with j < k, the Arnold relation gives

    w_ij w_ik = w_ij w_jk - w_ik w_jk

(the same identity for every n once orientation and commutation signs are
folded in).  Each step raises the sum of first indices, so it terminates.
"""
from __future__ import annotations

import contextlib
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .algebra import Component, Element, TensorElement, add_into, koszul_sign

__all__ = [
    "AlgebraContext",
    "ArnoldComponent",
    "ArnoldElement",
    "ArnoldFamily",
    "Injection",
    "e_n",
    "normal_form",
    "multiply",
    "generator",
    "basis",
    "hilbert_polynomial",
    "relabel",
    "cocompose",
    "restrict",
    "module_basis",
    "decompose",
    "recompose",
    "render",
    "parse",
    "sign_mutation",
    "clear_caches",
    "is_admissible",
]

Pair = tuple[int, int]
Monomial = tuple[Pair, ...]

_MUTATE_SIGN = False
_CACHED = []


def _cached(fn):
    wrapped = lru_cache(maxsize=None)(fn)
    _CACHED.append(wrapped)
    return wrapped


def clear_caches() -> None:
    for fn in _CACHED:
        fn.cache_clear()
    from . import escoperad  # local import: escoperad caches derived data

    escoperad.clear_caches()


@contextlib.contextmanager
def sign_mutation():
    """Test hook: flip the sign in w_ji = (-1)^n w_ij (deliberate fault)."""
    global _MUTATE_SIGN
    _MUTATE_SIGN = True
    clear_caches()
    try:
        yield
    finally:
        _MUTATE_SIGN = False
        clear_caches()


def orientation_sign(n: int) -> int:
    s = -1 if n % 2 else 1
    return -s if _MUTATE_SIGN else s


def orient(n: int, i: int, j: int) -> tuple[int, Pair]:
    """(sign, (min, max)) with w_ij = sign * w_{min,max}."""
    if i < j:
        return 1, (i, j)
    if i > j:
        return orientation_sign(n), (j, i)
    raise ValueError(f"w_{i}{j}: indices must differ")


def is_admissible(mono: Sequence[Pair]) -> bool:
    firsts = [p[0] for p in mono]
    return (
        all(i < j for i, j in mono)
        and firsts == sorted(firsts)
        and len(set(firsts)) == len(firsts)
    )


# ----------------------------------------------------------------------------
# rewriting


@_cached
def _nf_word(n: int, word: tuple[Pair, ...]) -> tuple[tuple[Monomial, int], ...]:
    """Normal form of a product of oriented generators (i < j), in the given order."""
    if len(set(word)) < len(word):
        return ()
    if (n - 1) & 1:
        sign = koszul_sign(list(word), [1] * len(word))
    else:
        sign = 1
    out = _nf_sorted(n, tuple(sorted(word)))
    if sign == 1:
        return out
    return tuple((m, -c) for m, c in out)


@_cached
def _nf_sorted(n: int, mono: Monomial) -> tuple[tuple[Monomial, int], ...]:
    firsts = [p[0] for p in mono]
    repeated = [i for i in set(firsts) if firsts.count(i) > 1]
    if not repeated:
        return ((mono, 1),)
    i = max(repeated)
    a = firsts.index(i)  # sorted: positions a, a+1 hold the two smallest second indices
    b = a + 1
    j, k = mono[a][1], mono[b][1]
    word1 = list(mono)
    word1[b] = (j, k)
    word2 = list(mono)
    word2[a] = (i, k)
    word2[b] = (j, k)
    acc: dict[Monomial, int] = {}
    for m, c in _nf_word(n, tuple(word1)):
        add_into(acc, m, c)
    for m, c in _nf_word(n, tuple(word2)):
        add_into(acc, m, -c)
    return tuple(sorted(acc.items()))


def _nf_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> dict[Monomial, int]:
    """Normal form of a product of arbitrary (unoriented) generators."""
    sign = 1
    word = []
    for i, j in pairs:
        s, p = orient(n, i, j)
        sign *= s
        word.append(p)
    return {m: sign * c for m, c in _nf_word(n, tuple(word))}


# ----------------------------------------------------------------------------
# components


@_cached
def _basis(r: int) -> tuple[Monomial, ...]:
    choices = [[None] + list(range(i + 1, r + 1)) for i in range(1, r)]
    monos = []
    for pick in itertools.product(*choices):
        monos.append(tuple((i + 1, f) for i, f in enumerate(pick) if f is not None))
    monos.sort(key=lambda m: (len(m), m))
    return tuple(monos)


class ArnoldComponent(Component):
    """e_n*(r) with its admissible-monomial basis."""

    def __init__(self, n: int, r: int):
        if n < 2:
            raise ValueError("the Arnold presentation is used for n >= 2")
        if r < 0:
            raise ValueError("arity must be non-negative")
        self.n = n
        self.r = r
        self.key = ("arnold", n, r)
        self.basis = _basis(r)
        self.unit = ()

    def degree(self, label: Monomial) -> int:
        return len(label) * (self.n - 1)

    def product(self, x: Monomial, y: Monomial) -> dict[Monomial, int]:
        return _product(self.n, x, y)

    def one_terms(self):
        return {(): 1}


@_cached
def _product(n: int, x: Monomial, y: Monomial) -> dict[Monomial, int]:
    return dict(_nf_word(n, x + y))


@lru_cache(maxsize=None)
def e_n(n: int, r: int) -> ArnoldComponent:
    return ArnoldComponent(n, r)


@dataclass(frozen=True)
class AlgebraContext:
    n: int
    r: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.r < 0:
            raise ValueError("r must be >= 0")

    @property
    def generator_degree(self) -> int:
        return self.n - 1

    @property
    def component(self) -> ArnoldComponent:
        return e_n(self.n, self.r)


class ArnoldElement(Element):
    """Rational combination of admissible monomials of a fixed e_n*(r)."""

    __slots__ = ()

    def __init__(self, component, terms):
        if isinstance(component, AlgebraContext):
            component = component.component
        super().__init__(component, terms)

    @property
    def context(self) -> AlgebraContext:
        return AlgebraContext(self.component.n, self.component.r)

    def __str__(self) -> str:
        return render(self)


def _as_component(context) -> ArnoldComponent:
    if isinstance(context, ArnoldComponent):
        return context
    if isinstance(context, AlgebraContext):
        return context.component
    n, r = context
    return e_n(n, r)


def normal_form(word: Iterable[tuple[int, int]], context) -> ArnoldElement:
    """Expand a product of generators w_{i j} (in the given order) in admissible monomials."""
    comp = _as_component(context)
    pairs = list(word)
    for i, j in pairs:
        if not (1 <= i <= comp.r and 1 <= j <= comp.r):
            raise ValueError(f"index out of range in w_{i},{j} for r = {comp.r}")
        if i == j:
            raise ValueError(f"w_{i},{j}: indices must differ")
    return ArnoldElement(comp, _nf_pairs(comp.n, pairs))


def generator(context, i: int, j: int) -> ArnoldElement:
    return normal_form([(i, j)], context)


def one(context) -> ArnoldElement:
    return ArnoldElement(_as_component(context), {(): 1})


def multiply(a: ArnoldElement, b: ArnoldElement) -> ArnoldElement:
    if a.component != b.component:
        raise ValueError(f"mismatched contexts {a.component!r} and {b.component!r}")
    return a * b


def basis(context, degree: int | None = None) -> list[Monomial]:
    comp = _as_component(context)
    if degree is None:
        return list(comp.basis)
    return [m for m in comp.basis if comp.degree(m) == degree]


def hilbert_polynomial(context) -> list[int]:
    """Coefficient list by degree (index = degree, so entries between generator degrees are 0)."""
    return _as_component(context).hilbert()


# ----------------------------------------------------------------------------
# Λ-structure and cocomposition


@dataclass(frozen=True)
class Injection:
    """Injective map {1..r} -> {1..s}; ``images[i-1]`` is the image of i."""

    images: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(set(self.images)) != len(self.images):
            raise ValueError(f"not injective: {self.images}")
        for x in self.images:
            if not 1 <= x <= self.target:
                raise ValueError(f"image {x} outside 1..{self.target}")

    @property
    def source(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: "Injection") -> "Injection":
        """``other ∘ self``."""
        if other.source != self.target:
            raise ValueError("cannot compose injections")
        return Injection(tuple(other(x) for x in self.images), other.target)

    @classmethod
    def identity(cls, r: int) -> "Injection":
        return cls(tuple(range(1, r + 1)), r)

    @classmethod
    def shift(cls, r: int, offset: int, target: int | None = None) -> "Injection":
        t = r + offset if target is None else target
        return cls(tuple(range(offset + 1, offset + r + 1)), t)


@_cached
def _relabel_label(n: int, mono: Monomial, images: tuple[int, ...]) -> tuple[tuple[Monomial, int], ...]:
    pairs = [(images[i - 1], images[j - 1]) for i, j in mono]
    return tuple(_nf_pairs(n, pairs).items())


def relabel(x: ArnoldElement, injection: Injection) -> ArnoldElement:
    """Pull back along the point-forgetting map: w_ab -> w_{j(a) j(b)}."""
    comp = x.component
    if injection.source != comp.r:
        raise ValueError(f"injection has domain {injection.source}, element has arity {comp.r}")
    target = e_n(comp.n, injection.target)
    acc: dict = {}
    for m, c in x.terms.items():
        for m2, c2 in _relabel_label(comp.n, m, injection.images):
            add_into(acc, m2, c * c2)
    return ArnoldElement(target, acc)


def _check_blocks(r: int, blocks: Sequence[int]) -> tuple[int, ...]:
    blocks = tuple(blocks)
    if any(b < 1 for b in blocks) or sum(blocks) != r:
        raise ValueError(f"blocks {blocks} do not partition 1..{r} into non-empty consecutive blocks")
    return blocks


def _normalize_blocks(r: int, blocks) -> tuple[int, ...]:
    """Accept block sizes or explicit consecutive index sets."""
    blocks = list(blocks)
    if blocks and not isinstance(blocks[0], int):
        sets = [sorted(b) for b in blocks]
        flat = [i for b in sets for i in b]
        if flat != list(range(1, r + 1)):
            raise ValueError(f"blocks {blocks} are not consecutive and exhaustive")
        blocks = [len(b) for b in sets]
    return _check_blocks(r, blocks)


@_cached
def _cocompose_label(n: int, mono: Monomial, sizes: tuple[int, ...]) -> tuple[tuple[tuple, int], ...]:
    where = {}
    start = 0
    for a, size in enumerate(sizes, start=1):
        for loc in range(1, size + 1):
            where[start + loc] = (a, loc)
        start += size
    slots, gens = [], []
    for u, v in mono:
        a, lu = where[u]
        b, lv = where[v]
        if a == b:
            slots.append(a)
            gens.append((lu, lv))
        else:
            slots.append(0)
            gens.append((a, b))
    odd = (n - 1) & 1
    sign = koszul_sign(slots, [odd] * len(slots)) if odd else 1
    words = [[] for _ in range(len(sizes) + 1)]
    for s, g in zip(slots, gens):
        words[s].append(g)
    parts = [_nf_word(n, tuple(w)) for w in words]
    acc: dict[tuple, int] = {}
    for combo in itertools.product(*parts):
        c = sign
        for _, k in combo:
            c *= k
        add_into(acc, tuple(m for m, _ in combo), c)
    return tuple(acc.items())


def cocompose(x: ArnoldElement, blocks) -> TensorElement:
    """Dual of inserting |b_1|, ..., |b_s| points into s disks (consecutive blocks).

    Returns an element of e_n*(s) ⊗ e_n*(|b_1|) ⊗ ... ⊗ e_n*(|b_s|).
    """
    comp = x.component
    sizes = _normalize_blocks(comp.r, blocks)
    comps = [e_n(comp.n, len(sizes))] + [e_n(comp.n, b) for b in sizes]
    acc: dict = {}
    for m, c in x.terms.items():
        for key, k in _cocompose_label(comp.n, m, sizes):
            add_into(acc, key, c * k)
    return TensorElement(comps, acc)


def restrict(x: ArnoldElement, m: int):
    """Image under H(D_n(l)) -> H(D_m(l)): every generator goes to zero."""
    comp = x.component
    if not 1 <= m < comp.n:
        raise ValueError(f"restriction needs n > m >= 1 (got n={comp.n}, m={m})")
    c = x.terms.get((), Fraction(0))
    if m == 1:
        from .perm import PermFunction, perm_component

        target = perm_component(comp.r)
        return PermFunction(target, {s: c for s in target.basis})
    return ArnoldElement(e_n(m, comp.r), {(): c})


class ArnoldFamily:
    """The Λ-Hopf cooperad e_n* as a family of components."""

    def __init__(self, n: int):
        self.n = n
        self.key = ("arnold", n)
        self.generator_degree = n - 1

    def component(self, r: int) -> ArnoldComponent:
        return e_n(self.n, r)

    def relabel_label(self, label: Monomial, injection: Injection) -> dict:
        return dict(_relabel_label(self.n, label, injection.images))

    def cocompose_label(self, label: Monomial, sizes: Sequence[int]) -> dict:
        return dict(_cocompose_label(self.n, label, tuple(sizes)))

    def __eq__(self, other):
        return isinstance(other, ArnoldFamily) and other.n == self.n

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"ArnoldFamily({self.n})"


# ----------------------------------------------------------------------------
# freeness over the subalgebra on the last r points


def module_basis(n: int, r: int, k: int) -> list[Monomial]:
    """Admissible monomials of e_n*(r+k) with I ⊆ {1..k}: a basis over e_n*(r)."""
    return [m for m in _basis(r + k) if all(i <= k for i, _ in m)]


def decompose(x: ArnoldElement, k: int) -> dict[Monomial, ArnoldElement]:
    """Coefficients of x over the subalgebra e_n*(r) ⊂ e_n*(r+k) on points k+1..k+r.

    Returns ``{module basis monomial: coefficient in e_n*(r)}`` (local indices),
    so that ``x = Σ basis · coefficient``.
    """
    comp = x.component
    r = comp.r - k
    if r < 0:
        raise ValueError("k exceeds the arity")
    sub = e_n(comp.n, r)
    out: dict[Monomial, dict] = {}
    for m, c in x.terms.items():
        free = tuple(p for p in m if p[0] <= k)
        rest = tuple((i - k, j - k) for i, j in m if i > k)
        add_into(out.setdefault(free, {}), rest, c)
    return {f: ArnoldElement(sub, t) for f, t in sorted(out.items()) if t}


def recompose(parts: Mapping[Monomial, ArnoldElement], n: int, r: int, k: int) -> ArnoldElement:
    total = e_n(n, r + k)
    acc = ArnoldElement(total, {})
    inc = Injection.shift(r, k)
    for f, coef in parts.items():
        acc = acc + ArnoldElement(total, {f: 1}) * relabel(coef, inc)
    return acc


# ----------------------------------------------------------------------------
# text form:  w[1,2]*w[2,3] - 2*w[1,3] + 3/2


_TOKEN = re.compile(r"\s*(?:(?P<gen>w\[\s*(\d+)\s*,\s*(\d+)\s*\])|(?P<num>\d+(?:/\d+)?)|(?P<op>[+\-*]))")


def render(x: ArnoldElement) -> str:
    if not x.terms:
        return "0"
    out = []
    for m, c in x.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        mono = "*".join(f"w[{i},{j}]" for i, j in m)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def parse(text: str, context) -> ArnoldElement:
    """Inverse of :func:`render`; also accepts unnormalized words like ``w[3,1]*w[1,2]``."""
    comp = _as_component(context)
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse {text[pos:]!r} at offset {pos}")
        if mt.group("gen"):
            tokens.append(("gen", (int(mt.group(2)), int(mt.group(3)))))
        elif mt.group("num"):
            tokens.append(("num", Fraction(mt.group("num"))))
        else:
            tokens.append(("op", mt.group("op")))
        pos = mt.end()
    result = ArnoldElement(comp, {})
    sign = 1
    coef = Fraction(1)
    word: list = []
    seen = False
    expect_factor = True

    def flush():
        nonlocal result
        if seen:
            result = result + normal_form(word, comp).scale(sign * coef)

    for kind, val in tokens:
        if kind == "op" and val in "+-":
            if expect_factor and seen:
                raise ValueError(f"dangling operator in {text!r}")
            flush()
            sign = 1 if val == "+" else -1
            coef, word, seen, expect_factor = Fraction(1), [], False, True
        elif kind == "op":
            if expect_factor:
                raise ValueError(f"misplaced '*' in {text!r}")
            expect_factor = True
        elif kind == "num":
            if not expect_factor:
                raise ValueError(f"missing operator in {text!r}")
            coef *= val
            seen, expect_factor = True, False
        else:
            if not expect_factor:
                raise ValueError(f"missing operator in {text!r}")
            word.append(val)
            seen, expect_factor = True, False
    if expect_factor and (seen or tokens):
        raise ValueError(f"incomplete expression {text!r}")
    flush()
    return result

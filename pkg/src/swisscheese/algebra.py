"""Finite graded-commutative algebras with labelled bases, and their tensor products.

A :class:`Component` is one algebra of a cooperad family (for example
``e_n*(r)``).  Concrete families subclass it and supply ``basis``,
``degree`` and ``product`` on basis labels; elements are sparse rational
combinations of labels.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

__all__ = [
    "Component",
    "ZeroComponent",
    "Element",
    "TensorElement",
    "koszul_sign",
    "add_into",
]

Label = Hashable


def add_into(acc: dict, key, value) -> None:
    """acc[key] += value, deleting the key when the result vanishes."""
    v = acc.get(key, 0) + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def koszul_sign(keys: Sequence, degrees: Sequence[int]) -> int:
    """Sign of stably sorting ``keys`` when items of odd degree anticommute."""
    odd = 0
    n = len(keys)
    for i in range(n):
        if degrees[i] & 1:
            ki = keys[i]
            for j in range(i + 1, n):
                if degrees[j] & 1 and keys[j] < ki:
                    odd ^= 1
    return -1 if odd else 1


class Component:
    """One graded-commutative algebra with a finite labelled basis.

    Subclasses set ``key`` (a hashable identity), ``basis`` (canonical order),
    ``unit`` and implement :meth:`degree` and :meth:`product`.
    """

    key: tuple = ()
    basis: tuple = ()
    unit: Label = None

    def degree(self, label: Label) -> int:
        raise NotImplementedError

    def product(self, x: Label, y: Label) -> Mapping[Label, object]:
        raise NotImplementedError

    # ------------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Component) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.key[1:]}"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: Label) -> int:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {lab: i for i, lab in enumerate(self.basis)}
            self.__dict__["_index"] = idx
        return idx[label]

    def hilbert(self) -> list[int]:
        """Dimensions by degree, index = degree."""
        out: list[int] = []
        for lab in self.basis:
            d = self.degree(lab)
            while len(out) <= d:
                out.append(0)
            out[d] += 1
        return out

    def basis_in_degree(self, degree: int) -> list[Label]:
        return [lab for lab in self.basis if self.degree(lab) == degree]

    def element(self, terms: Mapping[Label, object] | None = None) -> "Element":
        return Element(self, terms or {})

    def one_terms(self) -> dict:
        """The unit as a combination of basis labels."""
        return {self.unit: 1} if self.basis else {}

    def one(self) -> "Element":
        return self.element(self.one_terms())

    def is_trivial(self) -> bool:
        """One-dimensional and spanned by the unit."""
        return len(self.basis) == 1 and self.one_terms() == {self.basis[0]: 1}


class ZeroComponent(Component):
    """The zero algebra (no basis, so also no unit)."""

    def __init__(self, tag: str = "zero"):
        self.key = ("zero", tag)
        self.basis = ()
        self.unit = None

    def degree(self, label):
        raise KeyError(label)

    def product(self, x, y):
        raise KeyError(x)


class Element:
    """Sparse rational combination of basis labels of one component."""

    __slots__ = ("component", "terms")

    def __init__(self, component: Component, terms: Mapping[Label, object]):
        self.component = component
        self.terms: dict[Label, Fraction] = {k: Fraction(v) for k, v in terms.items() if v}

    # construction helpers -------------------------------------------------
    def _new(self, terms) -> "Element":
        return type(self)(self.component, terms)

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.component != self.component:
            raise ValueError(f"mismatched components: {self.component!r} vs {getattr(other, 'component', other)!r}")

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            add_into(acc, k, v)
        return self._new(acc)

    def __neg__(self) -> "Element":
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        c = Fraction(c)
        return self._new({k: c * v for k, v in self.terms.items()} if c else {})

    def __rmul__(self, c) -> "Element":
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        prod = self.component.product
        acc: dict = {}
        for x, a in self.terms.items():
            for y, b in other.terms.items():
                ab = a * b
                for z, c in prod(x, y).items():
                    add_into(acc, z, ab * c)
        return self._new(acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.component == other.component and self.terms == other.terms

    def __hash__(self):
        return hash((self.component, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.component.degree(k) for k in self.terms}

    def homogeneous_part(self, degree: int) -> "Element":
        deg = self.component.degree
        return self._new({k: v for k, v in self.terms.items() if deg(k) == degree})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("element is not homogeneous (or is zero)")
        return next(iter(ds))

    def coefficient(self, label) -> Fraction:
        return self.terms.get(label, Fraction(0))

    def sorted_terms(self) -> list[tuple[Label, Fraction]]:
        idx = self.component.index
        return sorted(self.terms.items(), key=lambda kv: idx(kv[0]))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.component!r}, {dict(self.sorted_terms())})"


class TensorElement:
    """Element of a tensor product of components, with Koszul sign rules."""

    __slots__ = ("components", "terms")

    def __init__(self, components: Sequence[Component], terms: Mapping[tuple, object]):
        self.components = tuple(components)
        self.terms: dict[tuple, Fraction] = {k: Fraction(v) for k, v in terms.items() if v}

    @classmethod
    def pure(cls, *elements: Element) -> "TensorElement":
        """x_1 ⊗ ... ⊗ x_k as a tensor element (multilinear expansion)."""
        terms: dict[tuple, Fraction] = {(): Fraction(1)}
        for e in elements:
            new: dict[tuple, Fraction] = {}
            for key, a in terms.items():
                for lab, b in e.terms.items():
                    add_into(new, key + (lab,), a * b)
            terms = new
        return cls([e.component for e in elements], terms)

    def _degrees(self, key: tuple) -> list[int]:
        return [c.degree(lab) for c, lab in zip(self.components, key)]

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if other.components != self.components:
            raise ValueError("tensor factors differ")
        acc = dict(self.terms)
        for k, v in other.terms.items():
            add_into(acc, k, v)
        return TensorElement(self.components, acc)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.components, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = Fraction(c)
        return TensorElement(self.components, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return self.scale(other)
        if other.components != self.components:
            raise ValueError("tensor factors differ")
        comps = self.components
        acc: dict[tuple, Fraction] = {}
        for kx, a in self.terms.items():
            dx = self._degrees(kx)
            for ky, b in other.terms.items():
                dy = other._degrees(ky)
                # (x1⊗..⊗xt)(y1⊗..⊗yt): y_g passes x_f for every f > g
                par = 0
                run = 0
                for f in range(len(comps) - 1, -1, -1):
                    par ^= (dy[f] & 1) & (run & 1)
                    run += dx[f]
                coef = -a * b if par else a * b
                parts = [comps[f].product(kx[f], ky[f]) for f in range(len(comps))]
                _expand_product(acc, parts, coef)
        return TensorElement(comps, acc)

    def permute(self, order: Sequence[int]) -> "TensorElement":
        """New factor i is old factor ``order[i]``, with the Koszul sign."""
        comps = tuple(self.components[i] for i in order)
        acc: dict[tuple, Fraction] = {}
        for key, v in self.terms.items():
            degs = self._degrees(key)
            sign = koszul_sign(list(order), [degs[i] for i in order])
            # sign of sorting the new sequence back equals the sign of the permutation
            add_into(acc, tuple(key[i] for i in order), sign * v)
        return TensorElement(comps, acc)

    def apply_to_factor(self, index: int, fn: Callable[[Label], "TensorElement | Element"]) -> "TensorElement":
        """Apply a degree-0 linear map to one factor, splicing its output factors in place."""
        acc: dict[tuple, Fraction] = {}
        new_comps = None
        for key, v in self.terms.items():
            img = fn(key[index])
            if isinstance(img, Element):
                img = TensorElement.pure(img)
            if new_comps is None:
                new_comps = self.components[:index] + img.components + self.components[index + 1:]
            for k2, w in img.terms.items():
                add_into(acc, key[:index] + k2 + key[index + 1:], v * w)
        if new_comps is None:
            img = fn(self.components[index].basis[0]) if self.components[index].basis else None
            if img is None:
                raise ValueError("cannot infer factor shapes of an empty tensor")
            if isinstance(img, Element):
                img = TensorElement.pure(img)
            new_comps = self.components[:index] + img.components + self.components[index + 1:]
        return TensorElement(new_comps, acc)

    def drop_trivial_factors(self) -> "TensorElement":
        """Remove factors that are one-dimensional and spanned by their unit."""
        keep = [i for i, c in enumerate(self.components) if not c.is_trivial()]
        acc: dict[tuple, Fraction] = {}
        for key, v in self.terms.items():
            add_into(acc, tuple(key[i] for i in keep), v)
        return TensorElement([self.components[i] for i in keep], acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.components == other.components and self.terms == other.terms

    def __hash__(self):
        return hash((self.components, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"TensorElement({list(self.components)}, {self.terms})"


def _expand_product(acc: dict, parts: list[Mapping], coef: Fraction) -> None:
    keys: list[tuple[tuple, Fraction]] = [((), coef)]
    for p in parts:
        if not p:
            return
        keys = [(k + (lab,), c * w) for k, c in keys for lab, w in p.items()]
    for k, c in keys:
        add_into(acc, k, c)


def tensor_from_terms(components: Iterable[Component], terms: Mapping[tuple, object]) -> TensorElement:
    return TensorElement(list(components), terms)

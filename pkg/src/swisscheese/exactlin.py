"""Exact rational linear algebra: graded spaces, sparse maps, homology.

Everything here is over Q with :class:`fractions.Fraction`; no floating point
is ever involved.  Matrices are stored column-wise as ``{row: value}`` dicts
with zero entries never stored.  Degrees are cohomological (differentials
raise degree by one) and may be any integer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Mapping, Sequence

from . import kernels

__all__ = [
    "Rational",
    "parse_rational",
    "format_rational",
    "GradedSpace",
    "SparseMatrix",
    "LinearMap",
    "ChainComplex",
    "ChainMapError",
    "DifferentialError",
    "Homology",
    "QuasiIsoResult",
    "rank",
    "kernel_basis",
    "homology",
    "is_quasi_iso",
]

Rational = Fraction


class DifferentialError(ValueError):
    """d∘d is nonzero, or a differential has the wrong shape."""

    def __init__(self, degree: int, message: str = "d∘d != 0"):
        super().__init__(f"{message} (degree {degree})")
        self.degree = degree


class ChainMapError(ValueError):
    """A linear map does not commute with the differentials."""

    def __init__(self, degree: int, column: int | None = None):
        msg = f"map does not commute with differentials in degree {degree}"
        if column is not None:
            msg += f" (source basis index {column})"
        super().__init__(msg)
        self.degree = degree
        self.column = column


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimal points are refused to keep values bit-exact."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"not a fraction string: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class GradedSpace:
    """Finite-dimensional graded vector space with labelled bases.

    Labels must be hashable and unique within a degree; their given order is
    the canonical order used by every matrix indexed over this space.
    """

    __slots__ = ("_basis", "_index")

    def __init__(self, basis: Mapping[int, Sequence[Hashable]]):
        self._basis: dict[int, tuple] = {}
        self._index: dict[int, dict] = {}
        for d in sorted(basis):
            labels = tuple(basis[d])
            if not labels:
                continue
            idx = {lab: i for i, lab in enumerate(labels)}
            if len(idx) != len(labels):
                raise ValueError(f"duplicate basis labels in degree {d}")
            self._basis[d] = labels
            self._index[d] = idx

    def degrees(self) -> list[int]:
        return list(self._basis)

    def basis(self, degree: int) -> tuple:
        return self._basis.get(degree, ())

    def dim(self, degree: int) -> int:
        return len(self._basis.get(degree, ()))

    def dims(self) -> dict[int, int]:
        return {d: len(b) for d, b in self._basis.items()}

    def total_dim(self) -> int:
        return sum(len(b) for b in self._basis.values())

    def index(self, degree: int, label) -> int:
        return self._index[degree][label]

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedSpace) and self._basis == other._basis

    def __hash__(self):
        return hash(tuple(self._basis.items()))

    def __repr__(self) -> str:
        return f"GradedSpace({self.dims()})"


class SparseMatrix:
    """Column-sparse matrix over Q."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows: int, ncols: int, columns: Iterable[Mapping[int, object]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        cols = []
        if columns is not None:
            for col in columns:
                clean = {}
                for r, v in col.items():
                    v = Fraction(v)
                    if v:
                        if not 0 <= r < nrows:
                            raise IndexError(f"row {r} out of range for {nrows} rows")
                        clean[r] = v
                cols.append(clean)
        else:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError(f"expected {ncols} columns, got {len(cols)}")
        self.columns: tuple[dict[int, Fraction], ...] = tuple(cols)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, cols)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        cols = []
        for col in other.columns:
            acc: dict[int, Fraction] = {}
            for k, v in col.items():
                for i, w in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, cols)

    def apply(self, vector: Mapping[int, Fraction]) -> dict[int, Fraction]:
        acc: dict[int, Fraction] = {}
        for k, v in vector.items():
            for i, w in self.columns[k].items():
                acc[i] = acc.get(i, 0) + v * w
        return {i: v for i, v in acc.items() if v}

    def is_zero(self) -> bool:
        return not any(self.columns)

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def integer_columns(self) -> list[list[tuple[int, int]]]:
        """Columns scaled by the lcm of their denominators (rank-preserving)."""
        out = []
        for col in self.columns:
            m = lcm(*(v.denominator for v in col.values())) if col else 1
            out.append([(i, int(v * m)) for i, v in col.items()])
        return out

    def rank(self) -> int:
        return rank(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.columns == other.columns
        )

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def rank(matrix: SparseMatrix) -> int:
    """Exact rank over Q (compiled kernel when available)."""
    if matrix.ncols == 0 or matrix.nrows == 0:
        return 0
    return kernels.rank_int(matrix.integer_columns())


class _Echelon:
    """Incrementally built echelon basis; pivots are the largest nonzero index."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        v = {i: Fraction(x) for i, x in vec.items() if x}
        while v:
            low = max(v)
            piv = self.pivots.get(low)
            if piv is None:
                return v
            c = v[low]
            for i, x in piv.items():
                y = v.get(i, 0) - c * x
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
        return v

    def add(self, vec: Mapping[int, Fraction]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        low = max(v)
        c = v[low]
        self.pivots[low] = {i: x / c for i, x in v.items()}
        return True


def kernel_basis(matrix: SparseMatrix) -> list[dict[int, Fraction]]:
    """Basis of the null space, as sparse vectors over the column index set."""
    pivots: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
    kernel = []
    for j, col in enumerate(matrix.columns):
        v = dict(col)
        combo: dict[int, Fraction] = {j: Fraction(1)}
        while v:
            low = max(v)
            if low not in pivots:
                c = v[low]
                pivots[low] = ({i: x / c for i, x in v.items()}, {i: x / c for i, x in combo.items()})
                break
            pv, pc = pivots[low]
            c = v[low]
            for i, x in pv.items():
                y = v.get(i, 0) - c * x
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
            for i, x in pc.items():
                y = combo.get(i, 0) - c * x
                if y:
                    combo[i] = y
                else:
                    combo.pop(i, None)
        else:
            kernel.append(combo)
    return kernel


class LinearMap:
    """Graded linear map raising degree by ``shift``; blocks keyed by source degree."""

    __slots__ = ("source", "target", "shift", "blocks")

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int = 0,
                 blocks: Mapping[int, SparseMatrix] | None = None):
        self.source = source
        self.target = target
        self.shift = shift
        self.blocks: dict[int, SparseMatrix] = {}
        for d, m in (blocks or {}).items():
            if m.ncols != source.dim(d) or m.nrows != target.dim(d + shift):
                raise ValueError(
                    f"block in degree {d} has shape {m.nrows}x{m.ncols}, expected "
                    f"{target.dim(d + shift)}x{source.dim(d)}"
                )
            if not m.is_zero():
                self.blocks[d] = m

    def block(self, degree: int) -> SparseMatrix:
        m = self.blocks.get(degree)
        if m is None:
            return SparseMatrix.zero(self.target.dim(degree + self.shift), self.source.dim(degree))
        return m

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("composition of incompatible maps")
        blocks = {}
        for d in other.source.degrees():
            blocks[d] = self.block(d + other.shift) @ other.block(d)
        return LinearMap(other.source, self.target, self.shift + other.shift, blocks)

    def is_zero(self) -> bool:
        return not self.blocks


class ChainComplex:
    """Graded space with a degree +1 differential; d∘d = 0 is checked on construction."""

    __slots__ = ("space", "differential")

    def __init__(self, space: GradedSpace, differential: LinearMap | None = None):
        if differential is None:
            differential = LinearMap(space, space, 1)
        if differential.shift != 1 or differential.source != space or differential.target != space:
            raise DifferentialError(0, "differential must be a degree +1 endomorphism")
        for d in space.degrees():
            left = differential.block(d + 1)
            right = differential.block(d)
            if right.is_zero() or left.is_zero():
                continue
            bad = kernels.first_nonzero_product(left.integer_columns(), right.integer_columns())
            if bad >= 0:
                raise DifferentialError(d)
        self.space = space
        self.differential = differential

    def d(self, degree: int) -> SparseMatrix:
        return self.differential.block(degree)


@dataclass(frozen=True)
class Homology:
    dims: dict[int, int]
    representatives: dict[int, list[dict[int, Fraction]]] = field(default_factory=dict)


def _homology_degree(cx: ChainComplex, k: int, with_reps: bool):
    n = cx.space.dim(k)
    if n == 0:
        return 0, []
    dk = cx.d(k)
    dprev = cx.d(k - 1)
    if not with_reps:
        return n - rank(dk) - rank(dprev), []
    boundaries = _Echelon()
    for col in dprev.columns:
        boundaries.add(col)
    reps = []
    for z in kernel_basis(dk):
        if boundaries.add(z):
            reps.append(z)
    return len(reps), reps


def homology(cx: ChainComplex, degrees: Iterable[int] | None = None, representatives: bool = True) -> Homology:
    """Cohomology dimensions and representative cocycles per degree.

    ``dim H^k = dim ker d_k - rank d_{k-1}``.  Representatives are cocycles
    completing an echelon basis of the coboundaries; the choice is
    deterministic given the label order.  Degrees outside the support give 0.
    """
    if degrees is None:
        degrees = cx.space.degrees()
    dims, reps = {}, {}
    for k in degrees:
        dim, r = _homology_degree(cx, k, representatives)
        dims[k] = dim
        if representatives:
            reps[k] = r
    return Homology(dims, reps)


@dataclass(frozen=True)
class QuasiIsoResult:
    is_quasi_iso: bool
    induced: dict[int, list[list[Fraction]]]
    failures: dict[int, str]

    def __bool__(self) -> bool:
        return self.is_quasi_iso


def check_chain_map(f: LinearMap, source: ChainComplex, target: ChainComplex) -> None:
    """Raise :class:`ChainMapError` unless ``f d = d f``."""
    if f.shift != 0:
        raise ValueError("chain maps have degree 0")
    degrees = sorted(set(source.space.degrees()) | {d - 1 for d in source.space.degrees()})
    for k in degrees:
        lhs = f.block(k + 1) @ source.d(k)
        rhs = target.d(k) @ f.block(k)
        if lhs != rhs:
            for j in range(lhs.ncols):
                if lhs.columns[j] != rhs.columns[j]:
                    raise ChainMapError(k, j)


def _coordinates(vec: dict[int, Fraction], reps: list[dict[int, Fraction]],
                 boundaries: list[dict[int, Fraction]]) -> list[Fraction]:
    """Solve vec = Σ α_i reps_i + (boundary); return α."""
    # Eliminate with tracked combinations; reps are labelled 0..s-1, boundaries ignored.
    s = len(reps)
    pivots: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
    gens = [(b, {}) for b in boundaries] + [(r, {i: Fraction(1)}) for i, r in enumerate(reps)]
    for v0, c0 in gens:
        v, c = dict(v0), dict(c0)
        while v:
            low = max(v)
            if low not in pivots:
                a = v[low]
                pivots[low] = ({i: x / a for i, x in v.items()}, {i: x / a for i, x in c.items()})
                break
            pv, pc = pivots[low]
            a = v[low]
            for i, x in pv.items():
                y = v.get(i, 0) - a * x
                if y:
                    v[i] = y
                else:
                    v.pop(i)
            for i, x in pc.items():
                y = c.get(i, 0) - a * x
                if y:
                    c[i] = y
                else:
                    c.pop(i)
    v = dict(vec)
    coords: dict[int, Fraction] = {}
    while v:
        low = max(v)
        if low not in pivots:
            raise ValueError("vector is not in the span of cocycle representatives and coboundaries")
        pv, pc = pivots[low]
        a = v[low]
        for i, x in pv.items():
            y = v.get(i, 0) - a * x
            if y:
                v[i] = y
            else:
                v.pop(i)
        for i, x in pc.items():
            coords[i] = coords.get(i, 0) + a * x
    return [Fraction(coords.get(i, 0)) for i in range(s)]


def _matrix_rank_dense(rows: list[list[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return rank(SparseMatrix.from_dense(rows))


def is_quasi_iso(f: LinearMap, source: ChainComplex, target: ChainComplex,
                 degrees: Iterable[int] | None = None) -> QuasiIsoResult:
    """Whether ``f`` induces isomorphisms on cohomology in every listed degree.

    Raises :class:`ChainMapError` (with the offending degree) when ``f`` is not
    a chain map.  ``induced[k]`` is the matrix of H^k(f) in the bases of
    representative cocycles chosen by :func:`homology`.
    """
    check_chain_map(f, source, target)
    if degrees is None:
        degrees = sorted(set(source.space.degrees()) | set(target.space.degrees()))
    degrees = list(degrees)
    hs = homology(source, degrees)
    ht = homology(target, degrees)
    induced, failures = {}, {}
    for k in degrees:
        rs, rt = hs.representatives[k], ht.representatives[k]
        bnd = [c for c in target.d(k - 1).columns if c]
        cols = [_coordinates(f.block(k).apply(z), rt, bnd) for z in rs]
        mat = [[cols[j][i] for j in range(len(rs))] for i in range(len(rt))]
        induced[k] = mat
        if len(rs) != len(rt):
            failures[k] = f"dim H^{k}: source {len(rs)} vs target {len(rt)}"
        elif rs and _matrix_rank_dense(mat) != len(rs):
            failures[k] = f"induced map on H^{k} is singular"
    return QuasiIsoResult(not failures, induced, failures)

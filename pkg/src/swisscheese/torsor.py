"""Truncated two-colored dg operads and the Swiss-Cheese-type torsor check.

Cells are keyed by ``(output color, ambient inputs, constrained inputs)``
with colors ``"ambient"`` and ``"mixed"``.  Three one-colored pieces are read
off a two-colored operad S:

* P(l) = S(mixed; 0, l)    constrained inputs only
* Q(r) = S(ambient; r, 0)  the ambient operad
* M(r) = S(mixed; r, 0)    mixed output, ambient inputs

Q acts on the inputs of M through γ_r : M(1) ⊗ Q(r) -> M(r).  The data is of
Swiss-Cheese type (up to the truncation) when H(M(1)) is one-dimensional and,
for a cocycle 𝟙 generating it, q ↦ γ_r(𝟙 ⊗ q) is a quasi-isomorphism
Q(r) -> M(r) for every r.

Differentials raise degree by one.  Composition entries are exact rationals
written as ``"p/q"`` strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable

from .exactlin import (
    ChainComplex,
    ChainMapError,
    DifferentialError,
    GradedSpace,
    LinearMap,
    SparseMatrix,
    format_rational,
    homology,
    is_quasi_iso,
    parse_rational,
)

__all__ = [
    "SCHEMA_ID",
    "CellKey",
    "Cell",
    "Composition",
    "DgColoredOperadData",
    "ExtractionError",
    "DataError",
    "TorsorReport",
    "load",
    "loads",
    "extract_constituents",
    "check_swiss_cheese_type",
    "from_cohomology",
    "commutative_operad",
    "role_swapped",
    "schema",
]

SCHEMA_ID = "swisscheese.dgcolored/1"
AMBIENT = "ambient"
MIXED = "mixed"

CellKey = tuple  # (color, ambient, constrained)


class DataError(ValueError):
    """Ill-formed operad data; ``location`` points into the JSON document."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ExtractionError(DataError):
    pass


def cell_name(key: CellKey) -> str:
    color, a, c = key
    return f"{color}({a},{c})"


@dataclass
class Cell:
    key: CellKey
    labels: list[str]
    degrees: list[int]
    # {(row label, column label): value}
    differential: dict[tuple[str, str], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise DataError("duplicate basis labels", cell_name(self.key))
        self._pos = {}
        by_deg: dict[int, list[str]] = {}
        for lab, d in zip(self.labels, self.degrees):
            by_deg.setdefault(d, []).append(lab)
        self._by_deg = by_deg
        for lab, d in zip(self.labels, self.degrees):
            self._pos[lab] = (d, by_deg[d].index(lab))
        self._complex = None

    def degree(self, label: str) -> int:
        return self._pos[label][0]

    def has(self, label: str) -> bool:
        return label in self._pos

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(self._by_deg)

    def complex(self) -> ChainComplex:
        if self._complex is None:
            space = self.space
            cols: dict[int, list[dict[int, Fraction]]] = {
                d: [{} for _ in labs] for d, labs in self._by_deg.items()
            }
            for (row, col), v in self.differential.items():
                dr, ir = self._pos[row]
                dc, ic = self._pos[col]
                if dr != dc + 1:
                    raise DataError(f"differential entry {row} <- {col} does not raise degree by one",
                                    cell_name(self.key))
                cols[dc][ic][ir] = v
            blocks = {d: SparseMatrix(space.dim(d + 1), len(c), c) for d, c in cols.items()}
            try:
                self._complex = ChainComplex(space, LinearMap(space, space, 1, blocks))
            except DifferentialError as exc:
                raise DataError(f"d∘d != 0 in degree {exc.degree}", cell_name(self.key)) from None
        return self._complex

    def apply_d(self, vec: dict[str, Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for (row, col), v in self.differential.items():
            if col in vec:
                out[row] = out.get(row, 0) + v * vec[col]
        return {k: v for k, v in out.items() if v}

    def vector(self, vec: dict[str, Fraction], degree: int) -> dict[int, Fraction]:
        out = {}
        for lab, v in vec.items():
            d, i = self._pos[lab]
            if d != degree:
                raise ValueError("inhomogeneous vector")
            out[i] = v
        return out

    def label_vector(self, vec: dict[int, Fraction], degree: int) -> dict[str, Fraction]:
        labs = self._by_deg.get(degree, [])
        return {labs[i]: v for i, v in vec.items()}

    def dims(self) -> dict[int, int]:
        return {d: len(v) for d, v in sorted(self._by_deg.items())}


@dataclass
class Composition:
    outer: CellKey
    inner: CellKey
    result: CellKey
    # {(outer label, inner label): {result label: value}}
    table: dict[tuple[str, str], dict[str, Fraction]]

    def apply(self, outer_vec: dict[str, Fraction], inner_vec: dict[str, Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for o, a in outer_vec.items():
            for i, b in inner_vec.items():
                for r, c in self.table.get((o, i), {}).items():
                    out[r] = out.get(r, 0) + a * b * c
        return {k: v for k, v in out.items() if v}


@dataclass
class DgColoredOperadData:
    truncation: int
    cells: dict[CellKey, Cell]
    compositions: dict[tuple[CellKey, CellKey, CellKey], Composition]
    units: dict[CellKey, str] = field(default_factory=dict)
    description: str = ""

    def cell(self, key: CellKey) -> Cell:
        try:
            return self.cells[key]
        except KeyError:
            raise ExtractionError(f"missing cell {cell_name(key)}") from None

    def gamma(self, r: int) -> Composition:
        key = ((MIXED, 1, 0), (AMBIENT, r, 0), (MIXED, r, 0))
        try:
            return self.compositions[key]
        except KeyError:
            raise ExtractionError(f"missing composition mixed(1,0) ∘ ambient({r},0) -> mixed({r},0)") from None

    def to_json(self) -> dict:
        cells = []
        for key in sorted(self.cells, key=_key_order):
            cell = self.cells[key]
            cells.append({
                "color": key[0], "ambient": key[1], "constrained": key[2],
                "basis": [{"label": lab, "degree": d} for lab, d in zip(cell.labels, cell.degrees)],
                "differential": [[r, c, format_rational(v)] for (r, c), v in sorted(cell.differential.items())],
            })
        comps = []
        for key in sorted(self.compositions, key=lambda t: tuple(_key_order(x) for x in t)):
            comp = self.compositions[key]
            entries = []
            for (o, i), res in sorted(comp.table.items()):
                for r, v in sorted(res.items()):
                    entries.append([o, i, r, format_rational(v)])
            comps.append({"outer": list(comp.outer), "inner": list(comp.inner), "result": list(comp.result),
                          "entries": entries})
        out = {"schema": SCHEMA_ID, "truncation": self.truncation}
        if self.description:
            out["description"] = self.description
        out["cells"] = cells
        out["compositions"] = comps
        out["units"] = [{"cell": list(k), "label": v} for k, v in sorted(self.units.items(), key=lambda kv: _key_order(kv[0]))]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=False, ensure_ascii=False) + "\n"


def _key_order(key: CellKey):
    return (0 if key[0] == AMBIENT else 1, key[1] + key[2], key[1], key[2])


def schema() -> dict:
    text = resources.files("swisscheese").joinpath("schemas/dgcolored-1.json").read_text(encoding="utf-8")
    return json.loads(text)


def _location(path: Iterable) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def loads(text: str) -> DgColoredOperadData:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return from_json(doc)


def load(path) -> DgColoredOperadData:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror}", str(path)) from None
    return loads(text)


def from_json(doc) -> DgColoredOperadData:
    import jsonschema

    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise DataError(err.message, _location(err.absolute_path))
    cells: dict[CellKey, Cell] = {}
    for t, c in enumerate(doc["cells"]):
        where = f"$.cells[{t}]"
        key = (c["color"], c["ambient"], c["constrained"])
        if key in cells:
            raise DataError(f"duplicate cell {cell_name(key)}", where)
        if key[1] + key[2] == 0:
            raise DataError("cells without inputs are not allowed (reduced data)", where)
        if key[0] == AMBIENT and key[2]:
            raise DataError("ambient output admits no constrained inputs", where)
        labels = [b["label"] for b in c["basis"]]
        degrees = [b["degree"] for b in c["basis"]]
        try:
            cell = Cell(key, labels, degrees)
        except DataError as exc:
            raise DataError(str(exc), where) from None
        for s, (row, col, val) in enumerate(c.get("differential", [])):
            if not (cell.has(row) and cell.has(col)):
                raise DataError(f"unknown basis label in differential entry {row!r}, {col!r}",
                                f"{where}.differential[{s}]")
            if cell.degree(row) != cell.degree(col) + 1:
                raise DataError(f"differential entry {row} <- {col} does not raise degree by one",
                                f"{where}.differential[{s}]")
            v = parse_rational(val)
            if v:
                cell.differential[(row, col)] = cell.differential.get((row, col), 0) + v
        try:
            cell.complex()
        except DataError as exc:
            raise DataError(str(exc).split(": ", 1)[-1], where) from None
        cells[key] = cell
    comps: dict = {}
    for t, c in enumerate(doc["compositions"]):
        where = f"$.compositions[{t}]"
        keys = [tuple(c[x]) for x in ("outer", "inner", "result")]
        for x, key in zip(("outer", "inner", "result"), keys):
            if key not in cells:
                raise DataError(f"composition refers to missing cell {cell_name(key)}", f"{where}.{x}")
        outer, inner, result = (cells[k] for k in keys)
        table: dict = {}
        for s, (o, i, r, val) in enumerate(c["entries"]):
            loc = f"{where}.entries[{s}]"
            if not outer.has(o) or not inner.has(i) or not result.has(r):
                raise DataError(f"unknown basis label in entry {[o, i, r]}", loc)
            if result.degree(r) != outer.degree(o) + inner.degree(i):
                raise DataError("composition entry does not preserve degree", loc)
            v = parse_rational(val)
            if v:
                slot = table.setdefault((o, i), {})
                slot[r] = slot.get(r, 0) + v
        comps[tuple(keys)] = Composition(keys[0], keys[1], keys[2], table)
    units = {}
    for t, u in enumerate(doc.get("units", [])):
        key = tuple(u["cell"])
        if key not in cells or not cells[key].has(u["label"]):
            raise DataError(f"unit refers to missing label {u['label']!r}", f"$.units[{t}]")
        units[key] = u["label"]
    return DgColoredOperadData(doc["truncation"], cells, comps, units, doc.get("description", ""))


# ----------------------------------------------------------------------------


@dataclass
class Constituents:
    P: dict[int, Cell]
    M: dict[int, Cell]
    Q: dict[int, Cell]


def extract_constituents(S: DgColoredOperadData) -> Constituents:
    """P(l) = S(mixed; 0, l), Q(r) = S(ambient; r, 0), M(r) = S(mixed; r, 0) for 1 <= l, r <= R."""
    R = S.truncation
    P = {l: S.cell((MIXED, 0, l)) for l in range(1, R + 1)}
    Q = {r: S.cell((AMBIENT, r, 0)) for r in range(1, R + 1)}
    M = {r: S.cell((MIXED, r, 0)) for r in range(1, R + 1)}
    if not M[1].labels:
        raise ExtractionError("cell mixed(1,0) is empty")
    return Constituents(P, M, Q)


def validate_composition(S: DgColoredOperadData, comp: Composition) -> None:
    """Raise :class:`ChainMapError` unless d γ(o⊗i) = γ(do⊗i) + (-1)^{|o|} γ(o⊗di)."""
    outer, inner, result = S.cells[comp.outer], S.cells[comp.inner], S.cells[comp.result]
    for o in outer.labels:
        do = outer.apply_d({o: Fraction(1)})
        so = -1 if outer.degree(o) & 1 else 1
        for t, i in enumerate(inner.labels):
            lhs = result.apply_d(comp.apply({o: Fraction(1)}, {i: Fraction(1)}))
            rhs = comp.apply(do, {i: Fraction(1)})
            for lab, v in comp.apply({o: Fraction(1)}, inner.apply_d({i: Fraction(1)})).items():
                rhs[lab] = rhs.get(lab, 0) + so * v
            rhs = {k: v for k, v in rhs.items() if v}
            if lhs != rhs:
                raise ChainMapError(outer.degree(o) + inner.degree(i), t)


@dataclass
class ArityVerdict:
    r: int
    quasi_iso: bool
    source_dims: dict[int, int]
    target_dims: dict[int, int]
    failures: dict[int, str]

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "quasi_iso": self.quasi_iso,
            "source_homology": [[d, v] for d, v in sorted(self.source_dims.items()) if v],
            "target_homology": [[d, v] for d, v in sorted(self.target_dims.items()) if v],
            "failures": [[d, msg] for d, msg in sorted(self.failures.items())],
        }


@dataclass
class TorsorReport:
    truncation: int
    unit_homology: dict[int, int]
    condition_one: bool
    generator: dict[str, Fraction] | None
    generator_degree: int | None
    arities: list[ArityVerdict]
    representative_independent: bool | None
    passed: bool
    witness: str | None

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "passed": self.passed,
            "unit_homology": [[d, v] for d, v in sorted(self.unit_homology.items()) if v],
            "condition_one": self.condition_one,
            "generator": None if self.generator is None else
            [[lab, format_rational(v)] for lab, v in sorted(self.generator.items())],
            "generator_degree": self.generator_degree,
            "arities": [a.to_json() for a in self.arities],
            "representative_independent": self.representative_independent,
            "witness": self.witness,
        }

    def to_text(self) -> str:
        lines = [f"truncation R = {self.truncation} (conditions checked for arities 1..R only)"]
        uh = ", ".join(f"deg {d}: {v}" for d, v in sorted(self.unit_homology.items()) if v) or "0"
        lines.append(f"H(M(1)): {uh}  -> {'one-dimensional' if self.condition_one else 'NOT one-dimensional'}")
        if self.generator is not None:
            gen = " + ".join(f"{format_rational(v)}*{lab}" for lab, v in sorted(self.generator.items()))
            lines.append(f"generator 1 = {gen} (degree {self.generator_degree})")
        for a in self.arities:
            lines.append(f"  r = {a.r}: {'quasi-iso' if a.quasi_iso else 'FAIL'}"
                         + ("" if a.quasi_iso else f"  ({'; '.join(a.failures.values())})"))
        if self.representative_independent is not None:
            lines.append(f"verdict independent of representative: {self.representative_independent}")
        lines.append("PASS" if self.passed else f"FAIL: {self.witness}")
        return "\n".join(lines) + "\n"


def _unit_map(S: DgColoredOperadData, parts: Constituents, r: int, gen: dict[str, Fraction]) -> LinearMap:
    Qc, Mc = parts.Q[r], parts.M[r]
    gamma = S.gamma(r)
    src, tgt = Qc.space, Mc.space
    blocks = {}
    for d in src.degrees():
        cols = []
        for lab in src.basis(d):
            img = gamma.apply(gen, {lab: Fraction(1)})
            cols.append(Mc.vector(img, d) if img else {})
        blocks[d] = SparseMatrix(tgt.dim(d), len(cols), cols)
    return LinearMap(src, tgt, 0, blocks)


def _run(S, parts, gen, R):
    verdicts = []
    for r in range(1, R + 1):
        f = _unit_map(S, parts, r, gen)
        src, tgt = parts.Q[r].complex(), parts.M[r].complex()
        degrees = sorted(set(src.space.degrees()) | set(tgt.space.degrees()))
        res = is_quasi_iso(f, src, tgt, degrees)
        hs = homology(src, degrees, representatives=False).dims
        ht = homology(tgt, degrees, representatives=False).dims
        verdicts.append(ArityVerdict(r, res.is_quasi_iso, hs, ht, res.failures))
    return verdicts


def check_swiss_cheese_type(S: DgColoredOperadData, truncation: int | None = None) -> TorsorReport:
    R = S.truncation if truncation is None else truncation
    if R > S.truncation:
        raise ExtractionError(f"data is truncated at arity {S.truncation} < {R}")
    parts = extract_constituents(S)
    for r in range(1, R + 1):
        validate_composition(S, S.gamma(r))
    for key, cell in S.cells.items():
        cell.complex()
    M1 = parts.M[1].complex()
    h = homology(M1)
    total = sum(h.dims.values())
    if total != 1:
        return TorsorReport(R, h.dims, False, None, None, [], None, False,
                            f"H(M(1)) has total dimension {total}, expected 1")
    (deg,) = [d for d, v in h.dims.items() if v]
    gen = parts.M[1].label_vector(h.representatives[deg][0], deg)
    if deg != 0:
        return TorsorReport(R, h.dims, True, gen, deg, [], None, False,
                            f"H(M(1)) is concentrated in degree {deg}, not 0")
    verdicts = _run(S, parts, gen, R)
    passed = all(v.quasi_iso for v in verdicts)
    # spot-check independence of the representative
    alternatives = [{k: 2 * v for k, v in gen.items()}]
    boundaries = [c for c in M1.d(deg - 1).columns if c]
    if boundaries:
        shifted = dict(gen)
        for lab, v in parts.M[1].label_vector(boundaries[0], deg).items():
            shifted[lab] = shifted.get(lab, 0) + v
        alternatives.append({k: v for k, v in shifted.items() if v})
    independent = all(all(v.quasi_iso for v in _run(S, parts, alt, R)) == passed for alt in alternatives)
    witness = None
    if not passed:
        bad = next(v for v in verdicts if not v.quasi_iso)
        witness = f"arity {bad.r}: " + "; ".join(bad.failures.values())
    return TorsorReport(R, h.dims, True, gen, deg, verdicts, independent, passed, witness)


# ----------------------------------------------------------------------------
# builders


def _labels(ctx, comp) -> list[str]:
    from .escoperad import label_to_json

    out = []
    for lab in comp.basis:
        js = label_to_json(ctx, lab)
        text = "".join(f"w{i}{j}" if max(i, j) < 10 else f"w{i},{j}" for i, j in zip(js["I"], js["f"])) or "1"
        if "perm" in js:
            text += "|" + ("".join(map(str, js["perm"])) or "id")
        elif "c_I" in js:
            text += "|" + ("".join(f"v{i}{j}" for i, j in zip(js["c_I"], js["c_f"])) or "1")
        out.append(text)
    return out


def from_cohomology(m: int, n: int, truncation: int = 3) -> DgColoredOperadData:
    """Zero-differential data on the cohomology model, cells in the dual bases.

    Cells carry the degrees of the cohomology classes they are dual to; with
    zero differentials this regrading does not affect homology.  γ_r is the
    transpose of the cocomposition of ESC(r, 0) along one free slot of size r.
    """
    from .escoperad import ColoredBlocks, EscContext, EscElement, esc_cocompose, esc_component

    if not 1 <= m < n:
        raise ValueError("need n > m >= 1")
    if not 1 <= truncation <= 4:
        raise ValueError("resource guard: truncation must be between 1 and 4")
    R = truncation
    cells: dict[CellKey, Cell] = {}
    names: dict[CellKey, list[str]] = {}
    comps_of: dict[CellKey, object] = {}
    for total in range(1, R + 1):
        specs = [((AMBIENT, total, 0), EscContext(m, n, total, 0, "free"))]
        specs += [((MIXED, total - l, l), EscContext(m, n, total - l, l)) for l in range(total + 1)]
        for key, ctx in specs:
            comp = esc_component(ctx)
            labs = _labels(ctx, comp)
            cells[key] = Cell(key, labs, [comp.degree(x) for x in comp.basis])
            names[key] = labs
            comps_of[key] = comp
    compositions = {}
    for r in range(1, R + 1):
        keys = ((MIXED, 1, 0), (AMBIENT, r, 0), (MIXED, r, 0))
        res_comp = comps_of[keys[2]]
        table: dict = {}
        for x, xname in zip(res_comp.basis, names[keys[2]]):
            delta = esc_cocompose(EscElement(res_comp, {x: 1}), ColoredBlocks((r,), ()))
            for (o, i), v in delta.terms.items():
                oname = names[keys[0]][comps_of[keys[0]].index(o)]
                iname = names[keys[1]][comps_of[keys[1]].index(i)]
                slot = table.setdefault((oname, iname), {})
                slot[xname] = slot.get(xname, 0) + v
        compositions[keys] = Composition(*keys, table)
    units = {(AMBIENT, 1, 0): names[(AMBIENT, 1, 0)][0], (MIXED, 0, 1): names[(MIXED, 0, 1)][0]}
    return DgColoredOperadData(R, cells, compositions, units, f"cohomology model, m={m}, n={n}")


def commutative_operad(truncation: int = 3) -> DgColoredOperadData:
    """Every cell one-dimensional in degree 0, every composition the identity."""
    R = truncation
    cells = {}
    for total in range(1, R + 1):
        cells[(AMBIENT, total, 0)] = Cell((AMBIENT, total, 0), ["1"], [0])
        for l in range(total + 1):
            cells[(MIXED, total - l, l)] = Cell((MIXED, total - l, l), ["1"], [0])
    comps = {}
    for r in range(1, R + 1):
        keys = ((MIXED, 1, 0), (AMBIENT, r, 0), (MIXED, r, 0))
        comps[keys] = Composition(*keys, {("1", "1"): {"1": Fraction(1)}})
    return DgColoredOperadData(R, cells, comps, {}, "two-colored commutative operad")


def role_swapped(S: DgColoredOperadData) -> DgColoredOperadData:
    """Deliberate fault: use the constrained part P in place of M.

    γ'_r sends 𝟙 ⊗ (degree-0 class of Q(r)) to the sum of the degree-0 basis
    of P(r) and everything else to zero; any such map fails once the
    Poincaré polynomials of P(r) and Q(r) differ.
    """
    R = S.truncation
    cells = dict(S.cells)
    for r in range(1, R + 1):
        src = S.cells[(MIXED, 0, r)]
        cells[(MIXED, r, 0)] = Cell((MIXED, r, 0), list(src.labels), list(src.degrees), dict(src.differential))
    comps = dict(S.compositions)
    one = cells[(MIXED, 1, 0)].labels[0]
    for r in range(1, R + 1):
        keys = ((MIXED, 1, 0), (AMBIENT, r, 0), (MIXED, r, 0))
        Q, M = cells[keys[1]], cells[keys[2]]
        q0 = [lab for lab in Q.labels if Q.degree(lab) == 0]
        m0 = [lab for lab in M.labels if M.degree(lab) == 0]
        table = {(one, q): {x: Fraction(1) for x in m0} for q in q0}
        comps[keys] = Composition(*keys, table)
    return DgColoredOperadData(R, cells, comps, dict(S.units), "role-swapped fault")

from __future__ import annotations

import copy
import json
from fractions import Fraction
from pathlib import Path

import pytest

from swisscheese.exactlin import ChainMapError
from swisscheese.torsor import (
    DataError,
    ExtractionError,
    check_swiss_cheese_type,
    commutative_operad,
    extract_constituents,
    from_cohomology,
    from_json,
    load,
    loads,
    role_swapped,
)

FIXTURES = Path(__file__).parent / "fixtures"
PAIRS = [(1, 2), (1, 3), (2, 3)]


def dg_document(bad_gamma: bool = False) -> dict:
    """Commutative data with an acyclic pair a -> b added to M(1)."""
    cells = [
        {"color": "ambient", "ambient": 1, "constrained": 0, "basis": [{"label": "q1", "degree": 0}]},
        {"color": "ambient", "ambient": 2, "constrained": 0, "basis": [{"label": "q2", "degree": 0}]},
        {"color": "mixed", "ambient": 0, "constrained": 1, "basis": [{"label": "p1", "degree": 0}]},
        {"color": "mixed", "ambient": 0, "constrained": 2, "basis": [{"label": "p2", "degree": 0}]},
        {"color": "mixed", "ambient": 1, "constrained": 0,
         "basis": [{"label": "a", "degree": -1}, {"label": "b", "degree": 0}, {"label": "one", "degree": 0}],
         "differential": [["b", "a", "1"]]},
        {"color": "mixed", "ambient": 2, "constrained": 0, "basis": [{"label": "m2", "degree": 0}]},
        {"color": "mixed", "ambient": 1, "constrained": 1, "basis": [{"label": "x", "degree": 0}]},
    ]
    comps = [
        {"outer": ["mixed", 1, 0], "inner": ["ambient", 1, 0], "result": ["mixed", 1, 0],
         "entries": [["one", "q1", "one", "1"], ["a", "q1", "a", "1"], ["b", "q1", "b", "1"]]},
        {"outer": ["mixed", 1, 0], "inner": ["ambient", 2, 0], "result": ["mixed", 2, 0],
         "entries": [["one", "q2", "m2", "1"]] + ([["b", "q2", "m2", "1"]] if bad_gamma else [])},
    ]
    return {"schema": "swisscheese.dgcolored/1", "truncation": 2, "cells": cells, "compositions": comps}


@pytest.mark.parametrize("m,n", PAIRS)
def test_cohomology_model_is_of_swiss_cheese_type(m, n):
    report = check_swiss_cheese_type(from_cohomology(m, n, 3))
    assert report.passed, report.witness
    assert report.unit_homology == {0: 1}
    assert [a.r for a in report.arities] == [1, 2, 3]
    assert report.representative_independent


@pytest.mark.parametrize("m,n", PAIRS)
def test_role_swapped_fault_fails_at_arity_two(m, n):
    report = check_swiss_cheese_type(role_swapped(from_cohomology(m, n, 3)))
    assert not report.passed
    assert [a.quasi_iso for a in report.arities][:2] == [True, False]
    assert report.witness.startswith("arity 2:")


def test_role_swapped_dimension_count_for_the_line_in_the_plane():
    report = check_swiss_cheese_type(role_swapped(from_cohomology(1, 2, 2)))
    bad = report.arities[1]
    # Q(2) = e_2*(2) has Poincaré 1 + t, the constrained part e_1*(2) has 2
    assert {d: v for d, v in bad.source_dims.items() if v} == {0: 1, 1: 1}
    assert {d: v for d, v in bad.target_dims.items() if v} == {0: 2}


def test_constituent_dimensions():
    parts = extract_constituents(from_cohomology(1, 2, 3))
    assert parts.M[2].dims() == {0: 1, 1: 1}
    assert parts.Q[3].dims() == {0: 1, 1: 3, 2: 2}
    assert parts.P[2].dims() == {0: 2}
    parts = extract_constituents(from_cohomology(2, 3, 2))
    assert parts.Q[2].dims() == {0: 1, 2: 1}
    assert parts.P[2].dims() == {0: 1, 1: 1}


@pytest.mark.parametrize("m,n", PAIRS)
def test_truncation_one_has_one_dimensional_unary_cells(m, n):
    data = from_cohomology(m, n, 1)
    assert all(len(cell.labels) == 1 for cell in data.cells.values())
    assert check_swiss_cheese_type(data).passed


def test_commutative_operad():
    data = commutative_operad(3)
    parts = extract_constituents(data)
    assert all(len(c.labels) == 1 for c in [*parts.P.values(), *parts.Q.values(), *parts.M.values()])
    assert check_swiss_cheese_type(data).passed


def test_genuine_differential_and_boundary_spot_check():
    data = from_json(dg_document())
    report = check_swiss_cheese_type(data)
    assert report.passed and report.representative_independent
    assert report.unit_homology == {-1: 0, 0: 1}
    assert report.generator_degree == 0


def test_non_chain_map_composition_is_rejected_with_degree():
    data = from_json(dg_document(bad_gamma=True))
    with pytest.raises(ChainMapError) as err:
        check_swiss_cheese_type(data)
    assert err.value.degree == -1


def test_rescaled_generator_and_permuted_basis_give_same_verdict():
    data = from_cohomology(1, 2, 3)
    doc = data.to_json()
    for cell in doc["cells"]:
        cell["basis"].reverse()
    for comp in doc["compositions"]:
        comp["entries"] = [e[:3] + [str(Fraction(e[3]) * 2)] for e in comp["entries"]]
    permuted = from_json(doc)
    assert check_swiss_cheese_type(permuted).passed
    assert check_swiss_cheese_type(role_swapped(permuted)).passed is False


def test_json_round_trip_is_stable():
    data = from_cohomology(2, 3, 2)
    text = data.dumps()
    assert loads(text).dumps() == text


def test_empty_unary_cell_is_an_extraction_error():
    doc = dg_document()
    doc["cells"][4] = {"color": "mixed", "ambient": 1, "constrained": 0, "basis": []}
    doc["compositions"] = []
    with pytest.raises(ExtractionError, match="mixed\\(1,0\\) is empty"):
        check_swiss_cheese_type(from_json(doc))


def test_missing_cell_is_named():
    doc = dg_document()
    doc["cells"] = [c for c in doc["cells"] if (c["ambient"], c["constrained"]) != (2, 0) or c["color"] != "mixed"]
    doc["compositions"] = doc["compositions"][:1]
    with pytest.raises(ExtractionError, match="mixed\\(2,0\\)"):
        check_swiss_cheese_type(from_json(doc))


def test_schema_errors_report_their_location():
    doc = dg_document()
    doc["cells"][1]["basis"][0]["degree"] = "zero"
    with pytest.raises(DataError) as err:
        from_json(doc)
    assert err.value.location == "$.cells[1].basis[0].degree"
    doc = dg_document()
    doc["compositions"][0]["entries"][0][3] = "0.5"
    with pytest.raises(DataError) as err:
        from_json(doc)
    assert err.value.location == "$.compositions[0].entries[0][3]"


def test_semantic_errors_report_their_location():
    doc = dg_document()
    doc["cells"].append({"color": "mixed", "ambient": 0, "constrained": 0, "basis": []})
    with pytest.raises(DataError) as err:
        from_json(doc)
    assert err.value.location == "$.cells[7]"
    doc = dg_document()
    doc["compositions"][0]["entries"].append(["one", "q1", "zzz", "1"])
    with pytest.raises(DataError, match="unknown basis label"):
        from_json(doc)
    doc = dg_document()
    doc["cells"][4]["differential"] = [["one", "b", "1"]]
    with pytest.raises(DataError, match="raise degree") as err:
        from_json(doc)
    assert err.value.location == "$.cells[4].differential[0]"
    # d∘d != 0 is caught at load time
    doc = dg_document()
    doc["cells"][4]["basis"].append({"label": "c", "degree": 1})
    doc["cells"][4]["differential"] = [["b", "a", "1"], ["c", "b", "1"]]
    with pytest.raises(DataError, match="d∘d") as err:
        from_json(doc)
    assert err.value.location == "$.cells[4]"


def test_invalid_json_text():
    with pytest.raises(DataError, match="invalid JSON"):
        loads("{not json")


def test_corrupted_fixture_fails_with_witness():
    report = check_swiss_cheese_type(load(FIXTURES / "corrupted.json"))
    assert not report.passed
    assert "arity 2" in report.witness
    good = check_swiss_cheese_type(load(FIXTURES / "esc12_r2.json"))
    assert good.passed


def test_report_json_and_text():
    report = check_swiss_cheese_type(from_cohomology(1, 2, 2))
    doc = json.loads(json.dumps(report.to_json()))
    assert doc["passed"] and doc["generator"] == [["1|id", "1"]]
    assert "PASS" in report.to_text()


def test_guard():
    with pytest.raises(ValueError):
        from_cohomology(1, 2, 5)
    with pytest.raises(ValueError):
        from_cohomology(2, 2, 2)


def test_data_is_not_mutated_by_checks():
    data = from_cohomology(1, 3, 2)
    before = copy.deepcopy(data.to_json())
    check_swiss_cheese_type(data)
    check_swiss_cheese_type(role_swapped(data))
    assert data.to_json() == before

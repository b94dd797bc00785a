from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from swisscheese.cli import main, poincare_string, table_cells

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args, env=None):
    return runner.invoke(main, [str(a) for a in args], env=env, catch_exceptions=False)


def test_poincare_strings():
    assert poincare_string([1, 1]) == "1 + t"
    assert poincare_string([2, 4]) == "2 + 4t"
    assert poincare_string([1, 3, 2]) == "1 + 3t + 2t²"
    assert poincare_string([1, 0, 1]) == "1 + t²"
    assert poincare_string([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5]) == "1 + 5t¹¹"
    assert poincare_string([]) == "0"


def test_table_text(runner):
    res = invoke(runner, "table", "--m", 1, "--n", 2, "--max-k", 3, "--max-l", 2)
    assert res.exit_code == 0
    rows = {tuple(line.split()[:2]): line for line in res.output.splitlines()[2:]}
    assert rows[("1", "1")].endswith("1 + t")
    assert rows[("1", "2")].endswith("2 + 4t")
    assert rows[("3", "0")].endswith("1 + 3t + 2t²")


def test_table_json_and_csv(runner):
    res = invoke(runner, "table", "--m", 2, "--n", 3, "--max-k", 1, "--max-l", 2, "--format", "json")
    doc = json.loads(res.output)
    cells = {(c["k"], c["l"]): c for c in doc["cells"]}
    assert cells[(0, 2)]["poincare"] == "1 + t"
    assert doc["config"]["seed"] == 0
    res = invoke(runner, "table", "--m", 2, "--n", 3, "--max-k", 1, "--max-l", 2, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert {"k": "0", "l": "2", "degree": "1", "dimension": "1"} in rows


def test_table_usage_errors(runner):
    assert invoke(runner, "table", "--m", 2, "--n", 2).exit_code == 2
    assert invoke(runner, "table", "--max-k", 4, "--max-l", 3).exit_code == 2
    res = invoke(runner, "table", "--m", 3, "--n", 2)
    assert "need n > m >= 1" in res.output


def test_cache_hits_match_recomputation(tmp_path):
    fresh = table_cells(1, 2, 3, 2)
    first = table_cells(1, 2, 3, 2, cache_dir=tmp_path)
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) == len(fresh)
    second = table_cells(1, 2, 3, 2, cache_dir=tmp_path)
    assert fresh == first == second
    # a cache file from another code version is ignored and rewritten
    doc = json.loads(files[0].read_text())
    doc["version"] = "stale"
    doc["hilbert"] = [99]
    files[0].write_text(json.dumps(doc))
    assert table_cells(1, 2, 3, 2, cache_dir=tmp_path) == fresh
    assert json.loads(files[0].read_text())["hilbert"] != [99]


def test_cache_dir_from_environment(runner, tmp_path):
    res = invoke(runner, "table", "--max-k", 1, "--max-l", 1, env={"SWISSCHEESE_CACHE_DIR": str(tmp_path)})
    assert res.exit_code == 0
    assert len(list(tmp_path.glob("esc-m1-n2-*.json"))) == 3


def test_parallel_table_is_identical(runner):
    a = invoke(runner, "table", "--max-k", 3, "--max-l", 2, "--format", "json")
    b = invoke(runner, "table", "--max-k", 3, "--max-l", 2, "--format", "json", "--jobs", 2)
    assert a.output == b.output


def test_verify_arnold(runner):
    res = invoke(runner, "verify", "arnold", "--n", 2, "--r", 4)
    assert res.exit_code == 0
    assert "normal-form-vs-oracle (500 instances)" in res.output


def test_verify_sign_mutation_fails(runner):
    res = invoke(runner, "verify", "arnold", "--n", 2, "--r", 4, "--mutate-sign")
    assert res.exit_code == 1
    assert "FAIL arnold-relators" in res.output
    # the hook must not leak into later runs
    assert invoke(runner, "verify", "arnold", "--n", 2, "--r", 3).exit_code == 0


def test_verify_colored_json(runner):
    res = invoke(runner, "verify", "colored", "--m", 1, "--n", 2, "--arity", 3, "--format", "json", "--seed", 7)
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["passed"] and doc["config"]["seed"] == 7
    assert all(c["instances"] > 0 for c in doc["suites"][0]["checks"])


def test_verify_usage_errors(runner):
    assert invoke(runner, "verify", "nonsense").exit_code == 2
    assert invoke(runner, "verify", "colored", "--m", 2, "--n", 2).exit_code == 2
    assert invoke(runner, "verify", "arnold", "--r", 9).exit_code == 2


def test_bar(runner):
    res = invoke(runner, "bar", 1, 2, 1, 2, "--bound", 6)
    assert res.exit_code == 0
    assert "Tor_0: 2 + 4t" in res.output and "higher Tor: 0" in res.output
    res = invoke(runner, "bar", 1, 2, 1, 3, "--fault", "collapse", "--format", "json")
    assert res.exit_code == 1
    assert json.loads(res.output)["certificate"]["witness"].startswith("Tor_1")
    assert invoke(runner, "bar", 1, 2, 3, 3).exit_code == 2


def test_torsor_synth_and_check(runner, tmp_path):
    out = tmp_path / "esc.json"
    res = invoke(runner, "torsor", "synth", 1, 2, 3, "-o", out)
    assert res.exit_code == 0 and "PASS" in res.output
    assert invoke(runner, "torsor", "check", out).exit_code == 0
    res = invoke(runner, "torsor", "synth", 2, 3, 3, "--fault", "role-swapped")
    assert res.exit_code == 1


def test_torsor_check_corrupted_fixture(runner):
    res = invoke(runner, "torsor", "check", FIXTURES / "corrupted.json")
    assert res.exit_code == 1
    assert "FAIL: arity 2" in res.output


def test_torsor_check_validation_errors(runner, tmp_path):
    assert invoke(runner, "torsor", "check", tmp_path / "missing.json").exit_code == 2
    bad = tmp_path / "bad.json"
    doc = json.loads((FIXTURES / "esc12_r2.json").read_text())
    doc["cells"][0]["basis"][0]["degree"] = 0.5
    bad.write_text(json.dumps(doc))
    res = invoke(runner, "torsor", "check", bad)
    assert res.exit_code == 2
    assert "$.cells[0].basis[0].degree" in res.output

"""Acceptance criteria, one test each.

Every test prints one ``[PASS]``/``[FAIL]`` line (outside pytest's capture)
with what was checked and the wall time against its budget, then asserts.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""
from __future__ import annotations

import itertools
import json
import math
import random
import subprocess
import sys
import time

import pytest
from click.testing import CliRunner

from swisscheese import arnold, oracle
from swisscheese.barhomotopy import control_example, em_collapse_check
from swisscheese.cli import main as cli_main
from swisscheese.escoperad import verify_hopf_cooperad
from swisscheese.suites import random_word
from swisscheese.torsor import check_swiss_cheese_type, from_cohomology, role_swapped

PAIRS = [(1, 2), (1, 3), (2, 3)]


def emit(capsys, number: int, title: str, ok: bool, detail: str, elapsed: float, budget: float) -> None:
    ok = ok and elapsed < budget
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail} "
              f"({elapsed:.1f}s of {budget:.0f}s)")


def admissible_counts(n: int, r: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for mono in arnold.basis((n, r)):
        d = len(mono) * (n - 1)
        out[d] = out.get(d, 0) + 1
    return out


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_div_exact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c, rem = divmod(a[i + len(b) - 1], b[-1])
        assert rem == 0
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] -= c * y
    assert not any(a), "division is not exact"
    return q


def oracle_poincare(n: int, r: int) -> list[int]:
    dims = oracle.quotient_dims(n, r)
    top = max(d for d, v in dims.items() if v)
    return [dims.get(d, 0) for d in range(top + 1)]


def expected_esc_poincare(m: int, n: int, k: int, l: int) -> list[int]:
    """Free module over the last l points tensored down to e_m*(l), from oracle dimensions only."""
    free = poly_div_exact(oracle_poincare(n, k + l), oracle_poincare(n, l))
    constrained = [math.factorial(l)] if m == 1 else oracle_poincare(m, l)
    out = poly_mul(free, constrained)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def test_criterion_1_presentation_basis_agreement(capsys):
    start = time.perf_counter()
    bad = []
    cases = 0
    for n in (2, 3):
        for r in range(0, 6):
            cases += 1
            quotient = {d: v for d, v in oracle.quotient_dims(n, r).items() if v}
            counted = admissible_counts(n, r)
            if quotient != counted or sum(counted.values()) != math.factorial(r):
                bad.append((n, r, quotient, counted))
    elapsed = time.perf_counter() - start
    emit(capsys, 1, "presentation/basis agreement", not bad,
         f"{cases} (n,r) cases, n in {{2,3}}, r <= 5" + (f", mismatch {bad[0]}" if bad else ""), elapsed, 60)
    assert not bad
    assert elapsed < 60


def test_criterion_2_normal_form_soundness(capsys):
    start = time.perf_counter()
    rng = random.Random(2024)
    per_case = 500
    bad = []
    cases = 0
    for n in (2, 3):
        for r in range(2, 5):
            cases += 1
            for _ in range(per_case):
                word = random_word(rng, r, rng.randint(1, r * (r - 1) // 2 + 1))
                got = oracle.oracle_coordinates(arnold.normal_form(word, (n, r)).terms, n, r)
                if got != oracle.oracle_normal_form(word, n, r):
                    bad.append((n, r, word))
                    break
    elapsed = time.perf_counter() - start
    emit(capsys, 2, "normal-form soundness", not bad,
         f"{per_case} random words for each of {cases} (n,r) with r in 2..4 (r <= 1 has no generators)"
         + (f", counterexample {bad[0]}" if bad else ""), elapsed, 120)
    assert not bad
    assert elapsed < 120


def test_criterion_3_freeness_round_trip(capsys):
    start = time.perf_counter()
    rng = random.Random(3)
    per_case = 200
    bad = []
    cases = 0
    for n in (2, 3):
        for r, k in itertools.product(range(6), repeat=2):
            if r + k > 5 or r + k == 0:
                continue
            cases += 1
            if len(arnold.module_basis(n, r, k)) != math.factorial(r + k) // math.factorial(r):
                bad.append(("cardinality", n, r, k))
            comp = arnold.e_n(n, r + k)
            for _ in range(per_case):
                x = arnold.ArnoldElement(comp, {rng.choice(comp.basis): rng.randint(-9, 9)
                                                for _ in range(rng.randint(1, 6))})
                if arnold.recompose(arnold.decompose(x, k), n, r, k) != x:
                    bad.append(("round trip", n, r, k, arnold.render(x)))
                    break
    elapsed = time.perf_counter() - start
    emit(capsys, 3, "freeness round trip", not bad,
         f"{per_case} random elements for each of {cases} (n,r,k) with r + k <= 5"
         + (f", failure {bad[0]}" if bad else ""), elapsed, 30)
    assert not bad
    assert elapsed < 30


def test_criterion_4_eilenberg_moore_collapse(capsys):
    start = time.perf_counter()
    bound = 6
    bad = []
    cases = 0
    for m, n in PAIRS:
        for total in range(5):
            for l in range(total + 1):
                cert = em_collapse_check(m, n, total - l, l, bound)
                cases += 1
                if not cert.passed:
                    bad.append(((m, n, total - l, l), cert.witness))
    control = control_example(bound)
    control_higher = control.higher_total()
    elapsed = time.perf_counter() - start
    ok = not bad and control_higher > 0
    emit(capsys, 4, "Eilenberg-Moore collapse", ok,
         f"{cases} cells with k + l <= 4, bound {bound}; control Q[x]/(x^2) higher Tor total {control_higher}"
         + (f", failure {bad[0]}" if bad else ""), elapsed, 300)
    assert not bad
    assert control_higher > 0
    assert elapsed < 300


def test_criterion_5_hopf_colored_cooperad(capsys):
    start = time.perf_counter()
    reports = {pair: verify_hopf_cooperad(*pair, bound=4, seed=0) for pair in PAIRS}
    with arnold.sign_mutation():
        mutated = verify_hopf_cooperad(1, 2, bound=4, seed=0)
    elapsed = time.perf_counter() - start
    failures = {p: r.witness for p, r in reports.items() if not r.passed}
    instances = sum(c.instances for r in reports.values() for c in r.checks)
    ok = not failures and not mutated.passed and bool(mutated.witness)
    emit(capsys, 5, "Hopf colored cooperad axioms", ok,
         f"{instances} instances over {len(PAIRS)} (m,n), total arity <= 4; "
         f"sign mutation witness: {mutated.witness}" + (f"; failures {failures}" if failures else ""),
         elapsed, 300)
    assert not failures
    assert not mutated.passed and mutated.witness
    assert elapsed < 300


def test_criterion_6_torsor_conditions(capsys):
    start = time.perf_counter()
    passes, faults = {}, {}
    for m, n in PAIRS:
        data = from_cohomology(m, n, 3)
        passes[(m, n)] = check_swiss_cheese_type(data)
        faults[(m, n)] = check_swiss_cheese_type(role_swapped(data))
    elapsed = time.perf_counter() - start
    first_fail = {p: next((a.r for a in r.arities if not a.quasi_iso), None) for p, r in faults.items()}
    ok = all(r.passed for r in passes.values()) and all(v == 2 for v in first_fail.values())
    emit(capsys, 6, "torsor conditions", ok,
         f"from_cohomology(m,n,3) passes for {sorted(p for p, r in passes.items() if r.passed)}; "
         f"role-swapped first failing arity {first_fail}", elapsed, 30)
    assert all(r.passed for r in passes.values())
    assert all(v == 2 for v in first_fail.values())
    assert elapsed < 30


def test_criterion_7_sample_table_values(capsys):
    start = time.perf_counter()
    runner = CliRunner()
    bad = []
    literal = {}
    cells = 0
    for m, n in PAIRS:
        res = runner.invoke(cli_main, ["table", "--m", str(m), "--n", str(n), "--max-k", "3", "--max-l", "2",
                                       "--format", "json"])
        assert res.exit_code == 0, res.output
        for cell in json.loads(res.output)["cells"]:
            cells += 1
            k, l = cell["k"], cell["l"]
            want = expected_esc_poincare(m, n, k, l)
            if cell["coefficients"] != want:
                bad.append(((m, n, k, l), cell["coefficients"], want))
            if l == 0 and cell["coefficients"] != oracle_poincare(n, k):
                bad.append(((m, n, k, 0), cell["coefficients"], "Poincaré of e_n*(k)"))
            if (m, n) == (1, 2) and (k, l) in ((1, 1), (1, 2)):
                literal[(k, l)] = cell["poincare"]
    elapsed = time.perf_counter() - start
    ok = not bad and literal == {(1, 1): "1 + t", (1, 2): "2 + 4t"}
    emit(capsys, 7, "sample table values", ok,
         f"{cells} cells equal the oracle enumeration; ESC_{{1,2}}(1,1) = {literal.get((1, 1))}, "
         f"ESC_{{1,2}}(1,2) = {literal.get((1, 2))}" + (f", mismatch {bad[0]}" if bad else ""), elapsed, 5)
    assert not bad
    assert literal == {(1, 1): "1 + t", (1, 2): "2 + 4t"}
    assert elapsed < 5


DETERMINISM_RUNS = [
    ["table", "--m", "1", "--n", "3", "--max-k", "3", "--max-l", "3", "--format", "json", "--seed", "11"],
    ["verify", "all", "--m", "1", "--n", "2", "--arity", "3", "--format", "json", "--seed", "11"],
    ["verify", "colored", "--m", "2", "--n", "3", "--arity", "3", "--format", "json", "--seed", "5"],
    ["bar", "1", "2", "1", "2", "--bound", "6", "--format", "json"],
    ["torsor", "synth", "1", "2", "3", "--format", "json"],
]


def test_criterion_8_determinism(capsys, tmp_path):
    start = time.perf_counter()
    differing = []
    for args in DETERMINISM_RUNS:
        outputs = []
        for attempt in range(2):
            # separate processes and separate cache directories: nothing is shared between runs
            env = {"SWISSCHEESE_CACHE_DIR": str(tmp_path / f"cache{attempt}"), "PYTHONHASHSEED": str(attempt)}
            proc = subprocess.run([sys.executable, "-m", "swisscheese.cli", *args], capture_output=True,
                                  env={**__import__("os").environ, **env})
            outputs.append(proc.stdout)
        if outputs[0] != outputs[1] or not outputs[0]:
            differing.append(" ".join(args))
    elapsed = time.perf_counter() - start
    emit(capsys, 8, "determinism", not differing,
         f"{len(DETERMINISM_RUNS)} JSON reports byte-identical across two fresh processes"
         + (f", differing: {differing}" if differing else ""), elapsed, 300)
    assert not differing


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))

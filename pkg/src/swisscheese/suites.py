"""Property suites shared by the ``verify`` command and the acceptance tests.

Every suite returns a :class:`SuiteReport`: a list of named checks with
instance counts and the first counterexample found.  Randomized checks draw
from ``random.Random(seed)`` only, so a report is a function of its
arguments.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import arnold, oracle
from .escoperad import CheckResult, verify_hopf_cooperad

__all__ = ["SuiteReport", "arnold_suite", "colored_suite", "bar_suite", "torsor_suite", "SUITES"]


@dataclass
class SuiteReport:
    suite: str
    params: dict
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
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def random_word(rng: random.Random, r: int, length: int) -> list[tuple[int, int]]:
    """Random product of generators, any orientation, repeats allowed."""
    out = []
    for _ in range(length):
        i, j = rng.sample(range(1, r + 1), 2)
        out.append((i, j))
    return out


def random_element(rng: random.Random, comp, terms: int = 4) -> arnold.ArnoldElement:
    basis = comp.basis
    acc = {}
    for _ in range(terms):
        acc[rng.choice(basis)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return arnold.ArnoldElement(comp, acc)


def arnold_suite(n: int, r: int, seed: int = 0, samples: int = 500) -> SuiteReport:
    """Basis vs. oracle quotient, normal form vs. oracle, Arnold relators, freeness."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 1 <= r <= 5:
        raise ValueError("arity must be between 1 and 5 (resource guard)")
    rng = random.Random(seed)
    report = SuiteReport("arnold", {"n": n, "r": r, "seed": seed, "samples": samples})

    for s in range(1, r + 1):
        check = CheckResult(f"basis-vs-oracle r={s}")
        comp = arnold.e_n(n, s)
        counted = {d * (n - 1): v for d, v in enumerate(_by_word_length(comp))}
        expected = oracle.quotient_dims(n, s)
        for d in sorted(set(counted) | set(expected)):
            check.instances += 1
            if counted.get(d, 0) != expected.get(d, 0):
                check.fail(f"degree {d}: admissible count {counted.get(d, 0)}, quotient {expected.get(d, 0)}")
        check.instances += 1
        if comp.dim != math.factorial(s):
            check.fail(f"total dimension {comp.dim} != {s}!")
        report.checks.append(check)

    check = CheckResult("arnold-relators")
    for s in range(3, r + 1):
        for i, j, k in itertools.permutations(range(1, s + 1), 3):
            check.instances += 1
            rel = (arnold.normal_form([(i, j), (j, k)], (n, s)) + arnold.normal_form([(j, k), (k, i)], (n, s))
                   + arnold.normal_form([(k, i), (i, j)], (n, s)))
            if rel:
                check.fail(f"w{i}{j}w{j}{k} + w{j}{k}w{k}{i} + w{k}{i}w{i}{j} = {arnold.render(rel)} in e_{n}*({s})")
        for i, j in itertools.permutations(range(1, s + 1), 2):
            check.instances += 1
            if arnold.normal_form([(i, j), (i, j)], (n, s)):
                check.fail(f"w{i}{j}^2 != 0 in e_{n}*({s})")
    report.checks.append(check)

    check = CheckResult("normal-form-vs-oracle")
    if r >= 2:
        for _ in range(samples):
            word = random_word(rng, r, rng.randint(1, r))
            check.instances += 1
            nf = arnold.normal_form(word, (n, r))
            # both sides in the oracle's own quotient coordinates
            got = oracle.oracle_coordinates(nf.terms, n, r)
            want = oracle.oracle_normal_form(word, n, r)
            if got != want:
                check.fail(f"word {word} in e_{n}*({r}): rewriting {got} vs oracle {want}")
                break
    report.checks.append(check)

    check = CheckResult("freeness-round-trip")
    for k in range(0, r + 1):
        sub = r - k
        check.instances += 1
        size = len(arnold.module_basis(n, sub, k))
        if size != math.factorial(r) // math.factorial(sub):
            check.fail(f"module basis over e_{n}*({sub}) in e_{n}*({r}) has {size} elements")
        comp = arnold.e_n(n, r)
        for _ in range(max(1, samples // 5)):
            x = random_element(rng, comp)
            check.instances += 1
            if arnold.recompose(arnold.decompose(x, k), n, sub, k) != x:
                check.fail(f"decompose/recompose changed {arnold.render(x)} (k={k})")
                break
    report.checks.append(check)
    return report


def _by_word_length(comp) -> list[int]:
    out: list[int] = []
    for mono in comp.basis:
        while len(out) <= len(mono):
            out.append(0)
        out[len(mono)] += 1
    return out


def colored_suite(m: int, n: int, arity: int = 3, seed: int = 0) -> SuiteReport:
    hopf = verify_hopf_cooperad(m, n, arity, seed)
    return SuiteReport("colored", {"m": m, "n": n, "arity": arity, "seed": seed}, hopf.checks)


def bar_suite(m: int, n: int, max_total: int = 4, bound: int = 6) -> SuiteReport:
    from .barhomotopy import control_example, em_collapse_check

    report = SuiteReport("bar", {"m": m, "n": n, "max_total": max_total, "bound": bound})
    check = CheckResult("eilenberg-moore-collapse")
    for total in range(max_total + 1):
        for l in range(total + 1):
            cert = em_collapse_check(m, n, total - l, l, bound)
            check.instances += 1
            if not cert.passed:
                check.fail(f"(k,l)=({total - l},{l}): {cert.witness}")
    report.checks.append(check)
    check = CheckResult("control-has-higher-tor")
    check.instances = 1
    if control_example(bound).higher_total() == 0:
        check.fail("no higher Tor for Q[x]/(x^2)")
    report.checks.append(check)
    return report


def torsor_suite(m: int, n: int, truncation: int = 3) -> SuiteReport:
    from .torsor import check_swiss_cheese_type, from_cohomology, role_swapped

    report = SuiteReport("torsor", {"m": m, "n": n, "truncation": truncation})
    data = from_cohomology(m, n, truncation)
    rep = check_swiss_cheese_type(data)
    check = CheckResult("swiss-cheese-type", instances=len(rep.arities) + 1)
    if not rep.passed:
        check.fail(rep.witness or "failed")
    elif rep.representative_independent is False:
        check.fail("verdict depends on the chosen representative")
    report.checks.append(check)
    if truncation >= 2:
        check = CheckResult("role-swapped-fails", instances=1)
        bad = check_swiss_cheese_type(role_swapped(data))
        first = next((a.r for a in bad.arities if not a.quasi_iso), None)
        if bad.passed or first != 2:
            check.fail(f"role-swapped data: passed={bad.passed}, first failing arity {first}")
        report.checks.append(check)
    return report


SUITES = ("arnold", "colored", "bar", "torsor")

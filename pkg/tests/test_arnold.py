from __future__ import annotations

import itertools
import math
import random

import pytest

from swisscheese import arnold
from swisscheese.algebra import TensorElement
from swisscheese.arnold import Injection, e_n, normal_form


def w(n, r, i, j):
    return arnold.generator((n, r), i, j)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("r", range(0, 6))
def test_total_dimension_is_factorial(n, r):
    assert e_n(n, r).dim == math.factorial(r)


def test_hilbert_series_small_cases():
    assert arnold.hilbert_polynomial((2, 3)) == [1, 3, 2]
    assert arnold.hilbert_polynomial((3, 3)) == [1, 0, 3, 0, 2]
    assert arnold.hilbert_polynomial((2, 4)) == [1, 6, 11, 6]
    assert arnold.hilbert_polynomial((2, 0)) == [1]


def test_basis_is_admissible_and_ordered():
    b = arnold.basis((2, 4))
    assert all(arnold.is_admissible(m) for m in b)
    assert b == sorted(b, key=lambda m: (len(m), m))
    assert arnold.basis((3, 3), degree=2) == [((1, 2),), ((1, 3),), ((2, 3),)]


def test_symmetry_sign_depends_on_parity_of_n():
    assert w(2, 2, 2, 1) == w(2, 2, 1, 2)
    assert w(3, 2, 2, 1) == -w(3, 2, 1, 2)


def test_graded_commutativity_and_squares():
    # odd generators anticommute, even ones commute
    assert normal_form([(1, 3), (1, 2)], (2, 3)) == -normal_form([(1, 2), (1, 3)], (2, 3))
    assert normal_form([(1, 3), (1, 2)], (3, 3)) == normal_form([(1, 2), (1, 3)], (3, 3))
    for n in (2, 3):
        assert not normal_form([(1, 2), (1, 2)], (n, 3))
        assert not normal_form([(1, 2), (2, 1)], (n, 3))


@pytest.mark.parametrize("n", [2, 3])
def test_three_term_relation(n):
    for i, j, k in itertools.permutations(range(1, 5), 3):
        s = (normal_form([(i, j), (j, k)], (n, 4)) + normal_form([(j, k), (k, i)], (n, 4))
             + normal_form([(k, i), (i, j)], (n, 4)))
        assert not s, (i, j, k)


def test_rewrite_of_the_basic_non_admissible_monomial():
    # n = 2: the three-term relation with w31 = w13 and odd generators gives
    # w12 w13 = w12 w23 - w13 w23
    x = normal_form([(1, 2), (1, 3)], (2, 3))
    assert x.terms == {((1, 2), (2, 3)): 1, ((1, 3), (2, 3)): -1}
    # n = 3: w31 = -w13 and commuting generators give the same expansion
    y = normal_form([(1, 2), (1, 3)], (3, 3))
    assert y.terms == {((1, 2), (2, 3)): 1, ((1, 3), (2, 3)): -1}


@pytest.mark.parametrize("n", [2, 3])
def test_product_is_associative_and_unital(n):
    rng = random.Random(n)
    comp = e_n(n, 4)
    one = arnold.one(comp)
    for _ in range(40):
        a, b, c = (arnold.ArnoldElement(comp, {rng.choice(comp.basis): rng.randint(-3, 3)}) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert one * a == a == a * one


def test_render_parse_round_trip():
    x = normal_form([(3, 1), (1, 2)], (2, 3)).scale(-2) + arnold.one((2, 3)).scale("3/2")
    text = arnold.render(x)
    assert arnold.parse(text, (2, 3)) == x
    assert arnold.parse("w[2,1]", (3, 2)) == -w(3, 2, 1, 2)
    assert arnold.render(arnold.ArnoldElement(e_n(2, 2), {})) == "0"
    with pytest.raises(ValueError):
        arnold.parse("w[1,2] ? 3", (2, 2))


def test_relabel_is_functorial_and_multiplicative():
    rng = random.Random(5)
    f = Injection((2, 4, 1), 4)
    g = Injection((5, 1, 3, 2), 5)
    comp = e_n(2, 3)
    for x in comp.basis:
        ex = arnold.ArnoldElement(comp, {x: 1})
        assert arnold.relabel(ex, f.then(g)) == arnold.relabel(arnold.relabel(ex, f), g)
    for _ in range(20):
        a = arnold.ArnoldElement(comp, {rng.choice(comp.basis): 1})
        b = arnold.ArnoldElement(comp, {rng.choice(comp.basis): 1})
        assert arnold.relabel(a * b, f) == arnold.relabel(a, f) * arnold.relabel(b, f)
    assert arnold.relabel(w(2, 2, 1, 2), Injection((3, 1), 3)) == w(2, 3, 3, 1)


def test_cocompose_on_generators():
    # w13 in e_2*(3) with blocks {1,2},{3}: the two points lie in different disks
    t = arnold.cocompose(w(2, 3, 1, 3), [2, 1])
    assert t.terms == {(((1, 2),), (), ()): 1}
    t = arnold.cocompose(w(2, 3, 1, 2), [2, 1])
    assert t.terms == {((), ((1, 2),), ()): 1}
    t = arnold.cocompose(w(2, 3, 2, 3), [[1], [2, 3]])
    assert t.terms == {((), (), ((1, 2),)): 1}


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("blocks", [(2, 2), (1, 3), (2, 1, 1), (1, 2, 1)])
def test_cocompose_is_an_algebra_map(n, blocks):
    comp = e_n(n, 4)
    gens = [w(n, 4, i, j) for i, j in itertools.combinations(range(1, 5), 2)]
    for g in gens:
        for b in comp.basis:
            x = arnold.ArnoldElement(comp, {b: 1})
            assert arnold.cocompose(g * x, blocks) == arnold.cocompose(g, blocks) * arnold.cocompose(x, blocks)


def test_cocompose_counit():
    x = normal_form([(1, 2), (2, 3)], (2, 3))
    assert arnold.cocompose(x, [3]).drop_trivial_factors() == TensorElement.pure(x)


@pytest.mark.parametrize("n", [2, 3])
def test_freeness_round_trip(n):
    rng = random.Random(7)
    for r in range(0, 4):
        for k in range(0, 5 - r):
            assert len(arnold.module_basis(n, r, k)) == math.factorial(r + k) // math.factorial(r)
            comp = e_n(n, r + k)
            for _ in range(20):
                x = arnold.ArnoldElement(comp, {rng.choice(comp.basis): rng.randint(-4, 4) for _ in range(3)})
                assert arnold.recompose(arnold.decompose(x, k), n, r, k) == x


def test_restrict_kills_generators():
    x = arnold.one((3, 3)).scale(2) + w(3, 3, 1, 2)
    assert arnold.restrict(x, 2).terms == {(): 2}
    f = arnold.restrict(x, 1)
    assert f((2, 1, 3)) == 2 and len(f.terms) == 6


def test_sign_mutation_is_scoped():
    with arnold.sign_mutation():
        assert w(2, 2, 2, 1) == -w(2, 2, 1, 2)
    assert w(2, 2, 2, 1) == w(2, 2, 1, 2)


def test_errors():
    with pytest.raises(ValueError):
        normal_form([(1, 1)], (2, 2))
    with pytest.raises(ValueError):
        normal_form([(1, 4)], (2, 3))
    with pytest.raises(ValueError):
        arnold.cocompose(w(2, 3, 1, 2), [2, 2])
    with pytest.raises(ValueError):
        arnold.multiply(w(2, 3, 1, 2), w(2, 4, 1, 2))

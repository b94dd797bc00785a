from __future__ import annotations

import itertools

import pytest

from swisscheese import oracle


def product_formula(n: int, r: int) -> dict[int, int]:
    # prod_{j=1}^{r-1} (1 + j t^{n-1}), expanded by hand
    coeffs = [1]
    for j in range(1, r):
        coeffs = [a + j * b for a, b in itertools.zip_longest(coeffs + [0], [0] + coeffs, fillvalue=0)]
    return {p * (n - 1): c for p, c in enumerate(coeffs)}


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("r", range(1, 6))
def test_quotient_dims_match_product_formula(n, r):
    dims = {d: v for d, v in oracle.quotient_dims(n, r).items() if v}
    assert dims == product_formula(n, r)


def test_known_values():
    assert oracle.quotient_dims(2, 5) == {0: 1, 1: 10, 2: 35, 3: 50, 4: 24, 5: 0, 6: 0, 7: 0, 8: 0, 9: 0, 10: 0}
    assert oracle.quotient_dims(3, 3, max_degree=2) == {0: 1, 2: 3}


def test_relators_vanish_and_squares_vanish():
    for n in (2, 3):
        for i, j, k in itertools.permutations(range(1, 4), 3):
            rel = oracle.oracle_coordinates({((i, j), (j, k)): 1, ((j, k), (k, i)): 1, ((k, i), (i, j)): 1}, n, 3)
            assert rel == {}
        assert oracle.oracle_normal_form([(1, 2), (2, 1)], n, 3) == {}


def test_orientation_and_reordering_signs():
    assert oracle.oracle_normal_form([(2, 1)], 2, 2) == {((1, 2),): 1}
    assert oracle.oracle_normal_form([(2, 1)], 3, 2) == {((1, 2),): -1}
    a = oracle.oracle_normal_form([(1, 3), (1, 2)], 2, 3)
    b = oracle.oracle_normal_form([(1, 2), (1, 3)], 2, 3)
    assert a == {k: -v for k, v in b.items()}


def test_complement_basis_size():
    assert len(oracle.complement_basis(2, 4, 2)) == 11


def test_resource_guard():
    with pytest.raises(oracle.ResourceGuardError):
        oracle.quotient_dims(2, 8)
    with pytest.raises(ValueError):
        oracle.oracle_normal_form([(1, 5)], 2, 4)

from __future__ import annotations

import itertools

import pytest

from swisscheese import perm
from swisscheese.arnold import Injection


def test_component_is_functions_on_permutations():
    comp = perm.perm_component(3)
    assert comp.dim == 6 and comp.hilbert() == [6]
    one = comp.one()
    assert one == perm.constant(3)
    d = perm.delta(3, (2, 3, 1))
    assert d * d == d
    assert d * perm.delta(3, (1, 2, 3)) == perm.PermFunction(comp, {})
    assert one * d == d
    assert not comp.is_trivial() and perm.perm_component(1).is_trivial()


def test_delta_rejects_non_permutations():
    with pytest.raises(ValueError):
        perm.delta(3, (1, 1, 2))


def test_cocompose_requires_contiguous_blocks():
    t = perm.cocompose(perm.delta(3, (3, 1, 2)), [2, 1])
    assert t.terms == {((2, 1), (1, 2), (1,)): 1}
    # points 1 and 2 are separated by 3, so block {1,2} is not an interval
    assert not perm.cocompose(perm.delta(3, (1, 3, 2)), [2, 1]).terms


def test_cocompose_with_empty_block_sums_over_positions():
    # point 1 in slot 1, point 2 in slot 3, slot 2 empty: the empty slot may sit
    # anywhere in the base order as long as slot 3 precedes slot 1
    t = perm.cocompose(perm.delta(2, (2, 1)), [1, 0, 1])
    assert t.terms == {((2, 3, 1), (1,), (), (1,)): 1, ((3, 2, 1), (1,), (), (1,)): 1,
                       ((3, 1, 2), (1,), (), (1,)): 1}


@pytest.mark.parametrize("sizes", [(1, 2), (2, 1), (1, 1, 1), (3,)])
def test_cocompose_is_multiplicative_and_counital(sizes):
    comp = perm.perm_component(3)
    for a, b in itertools.product(comp.basis, repeat=2):
        x, y = perm.delta(3, a), perm.delta(3, b)
        assert perm.cocompose(x * y, sizes) == perm.cocompose(x, sizes) * perm.cocompose(y, sizes)
    one = perm.constant(3)
    # the unit goes to the unit
    assert perm.cocompose(one, sizes) == perm.cocompose(one, sizes) * perm.cocompose(one, sizes)


def test_relabel_sums_over_preimages():
    f = perm.relabel(perm.delta(2, (2, 1)), Injection((1, 3), 3))
    # configurations of 3 points where 3 lies left of 1
    assert set(f.terms) == {(3, 1, 2), (3, 2, 1), (2, 3, 1)}
    assert perm.relabel(perm.constant(2), Injection((1, 3), 3)) == perm.constant(3)

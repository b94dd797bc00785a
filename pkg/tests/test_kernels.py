from __future__ import annotations

import os
import random
import subprocess
import sys

import pytest

from swisscheese import _kernels_py, kernels

try:
    from swisscheese import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def random_columns(rng, rows, cols, density, values=(-2, -1, 1, 2)):
    return [[(r, rng.choice(values)) for r in range(rows) if rng.random() < density] for _ in range(cols)]


@needs_compiled
@pytest.mark.parametrize("seed", range(8))
def test_backends_agree_on_rank(seed):
    rng = random.Random(seed)
    cols = random_columns(rng, 25, 30, 0.15)
    assert compiled.rank_int(cols) == _kernels_py.rank_int(cols)
    assert compiled.echelon_lower_bound(cols) == _kernels_py.echelon_lower_bound(cols)


@needs_compiled
def test_backends_agree_on_products():
    rng = random.Random(3)
    left = random_columns(rng, 10, 8, 0.3)
    right = random_columns(rng, 8, 6, 0.3)
    assert compiled.first_nonzero_product(left, right) == _kernels_py.first_nonzero_product(left, right)
    # d = [[1, -1]] composed with the column (1, 1) vanishes
    assert _kernels_py.first_nonzero_product([[(0, 1)], [(0, -1)]], [[(0, 1), (1, 1)]]) == -1
    assert compiled.first_nonzero_product([[(0, 1)], [(0, -1)]], [[(0, 1), (1, 1)]]) == -1


def test_lower_bound_never_exceeds_rank():
    rng = random.Random(11)
    for _ in range(20):
        cols = random_columns(rng, 12, 12, 0.25)
        assert kernels.echelon_lower_bound(cols) <= kernels.rank_int(cols)


@needs_compiled
def test_overflow_falls_back_to_exact_python():
    rng = random.Random(0)
    cols = random_columns(rng, 150, 150, 0.05, values=(-3, -2, -1, 1, 2, 3))
    with pytest.raises(OverflowError):
        compiled.rank_int(cols)
    assert kernels.rank_int(cols) == _kernels_py.rank_int(cols)


def test_environment_forces_pure_python():
    env = dict(os.environ, SWISSCHEESE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from swisscheese import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

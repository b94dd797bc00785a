"""Compare the compiled and pure-Python elimination kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Inputs are bar-complex differentials (the matrices the package actually
reduces) plus random sparse integer matrices.  Both backends must agree on
every rank; the script exits nonzero if they do not.
"""
from __future__ import annotations

import argparse
import random
import sys
import timeit

from swisscheese import _kernels_py
from swisscheese.barhomotopy import GroundField, build_bar, collapse_map, relabel_map, unit_map
from swisscheese.arnold import e_n

try:
    from swisscheese import _kernels as compiled
except ImportError:
    compiled = None


def bar_matrices(n: int, k: int, l: int, bound: int, fault: bool):
    B, A = e_n(n, k + l), e_n(n, l)
    phi = collapse_map(n, l, k) if fault else relabel_map(n, l, k)
    ground = GroundField()
    bar = build_bar(B, A, ground, phi, unit_map(A, ground), bound, check=False)
    return [m for blk in bar.blocks.values() for m in blk.diff.values() if m]


def random_matrix(rng: random.Random, rows: int, cols: int, density: float):
    out = []
    for _ in range(cols):
        col = [(r, rng.choice((-3, -2, -1, 1, 2, 3))) for r in range(rows) if rng.random() < density]
        out.append(col)
    return out


def compiled_rank(m, fallbacks: list) -> int:
    try:
        return compiled.rank_int(m)
    except OverflowError:
        # same policy as swisscheese.kernels: retry exactly in Python
        fallbacks.append(1)
        return _kernels_py.rank_int(m)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)

    cases = {
        "bar e_2(4)<-e_2(2)": bar_matrices(2, 2, 2, 6, False),
        "bar e_2(4)<-e_2(3), collapsed": bar_matrices(2, 1, 3, 6, True),
        "bar e_3(5)<-e_3(4)": bar_matrices(3, 1, 4, 6, False),
        "random 60x60 d=0.04": [random_matrix(rng, 60, 60, 0.04) for _ in range(20)],
        "random 150x150 d=0.05 (overflows)": [random_matrix(rng, 150, 150, 0.05)],
    }
    if compiled is None:
        print("compiled extension not built; only the pure-Python kernel is timed")
    print(f"{'case':36} {'matrices':>8} {'python ms':>10} {'cython ms':>10} {'speedup':>8} {'fallbacks':>9}")
    ok = True
    for name, mats in cases.items():
        ranks_py = [_kernels_py.rank_int(m) for m in mats]
        t_py = min(timeit.repeat(lambda: [_kernels_py.rank_int(m) for m in mats], number=1, repeat=args.repeat))
        if compiled is not None:
            fallbacks: list = []
            ranks_c = [compiled_rank(m, fallbacks) for m in mats]
            if ranks_c != ranks_py:
                print(f"  MISMATCH in {name}: {ranks_c} vs {ranks_py}")
                ok = False
            t_c = min(timeit.repeat(lambda: [compiled_rank(m, []) for m in mats], number=1, repeat=args.repeat))
            print(f"{name:36} {len(mats):8d} {1e3 * t_py:10.2f} {1e3 * t_c:10.2f} {t_py / t_c:7.1f}x {len(fallbacks):9d}")
        else:
            print(f"{name:36} {len(mats):8d} {1e3 * t_py:10.2f} {'-':>10} {'-':>8}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

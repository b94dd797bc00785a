"""Select the elimination backend at import time.

The compiled extension ``swisscheese._kernels`` is used when it imports;
otherwise (or with ``SWISSCHEESE_PURE_PYTHON=1``) the pure-Python twin in
``_kernels_py`` runs.  An int64 overflow in the compiled path is retried in
pure Python, so the backend never affects results.
"""
from __future__ import annotations

import os

from . import _kernels_py

__all__ = ["BACKEND", "rank_int", "echelon_lower_bound", "first_nonzero_product"]

_compiled = None
if os.environ.get("SWISSCHEESE_PURE_PYTHON") != "1":
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def rank_int(columns) -> int:
    if _compiled is not None:
        try:
            return _compiled.rank_int(columns)
        except OverflowError:
            pass
    return _kernels_py.rank_int(columns)


def echelon_lower_bound(columns) -> int:
    if _compiled is not None:
        try:
            return _compiled.echelon_lower_bound(columns)
        except OverflowError:
            pass
    return _kernels_py.echelon_lower_bound(columns)


def first_nonzero_product(left, right) -> int:
    if _compiled is not None:
        try:
            return _compiled.first_nonzero_product(left, right)
        except OverflowError:
            pass
    return _kernels_py.first_nonzero_product(left, right)

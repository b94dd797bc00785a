"""Exact computations for little-disks and extended Swiss-Cheese cohomology.

Modules:

* :mod:`~swisscheese.exactlin`: rational linear algebra, chain complexes, homology
* :mod:`~swisscheese.arnold`: e_n*(r) by normal forms, with cooperad structure maps
* :mod:`~swisscheese.oracle`: brute-force quotient used to cross-check ``arnold``
* :mod:`~swisscheese.escoperad`: the two-colored cooperad ESC_{m,n}
* :mod:`~swisscheese.barhomotopy`: two-sided bar complexes and Tor
* :mod:`~swisscheese.torsor`: Swiss-Cheese-type checks on truncated dg data
"""
from __future__ import annotations

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402

__all__ = ["__version__", "BACKEND"]

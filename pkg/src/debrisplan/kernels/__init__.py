"""Annealing hot-loop kernels with a compiled fast path.

At import time the Cython extension is preferred; the pure-Python
reference implementation is the fallback.  Set the environment
variable ``DEBRISPLAN_PURE_KERNELS=1`` to force the fallback (used by
the backend-equivalence tests and the benchmark).
"""

import os

from . import _pure

if os.environ.get("DEBRISPLAN_PURE_KERNELS") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

tour_length = _impl.tour_length
tsp_level = _impl.tsp_level
evaluate_path = _impl.evaluate_path
sdc_level = _impl.sdc_level

__all__ = ["BACKEND", "tour_length", "tsp_level", "evaluate_path",
           "sdc_level"]

"""Numba switch.

Kernels are written once as plain numpy/Python and compiled with
``numba.njit`` unless ``YMSS_DISABLE_NUMBA=1`` is set or numba is missing.
"""
from __future__ import annotations

import os

USE_NUMBA = os.environ.get("YMSS_DISABLE_NUMBA", "0").lower() not in ("1", "true", "yes")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None
    USE_NUMBA = False


def maybe_njit(func):
    """Compile ``func`` with numba when enabled; keep the Python original as ``.py_func``."""
    if USE_NUMBA and numba is not None:
        jitted = numba.njit(cache=True)(func)
        return jitted
    func.py_func = func
    return func

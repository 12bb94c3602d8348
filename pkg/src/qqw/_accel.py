"""Numba switch.

Set ``QQW_DISABLE_NUMBA=1`` to force the pure-numpy kernels.  The flag is read
once at import time.
"""

import os

_FLAG = os.environ.get("QQW_DISABLE_NUMBA", "").strip().lower()

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in ("1", "true", "yes", "on")

numba_default = {
    "nopython": True,
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "boundscheck": False,
}


def njit(func):
    """Compile ``func`` with numba when available; otherwise return it untouched."""
    if not NUMBA_AVAILABLE:
        return func
    return numba.jit(**numba_default)(func)

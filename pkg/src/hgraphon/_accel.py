"""Numba switch for the hot kernels.

Set ``HGRAPHON_NO_NUMBA=1`` (or have numba missing) to run every kernel as
plain numpy/Python. Both paths produce bit-identical results.
"""
import os

_flag = os.environ.get("HGRAPHON_NO_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag not in ("", "0", "false", "no")

try:
    if DISABLED_BY_ENV:
        raise ImportError("numba disabled by HGRAPHON_NO_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False


def jit(func):
    """``njit(cache=True, nogil=True)`` when numba is active, identity otherwise."""
    if not HAVE_NUMBA:
        return func
    return _njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"

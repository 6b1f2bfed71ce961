"""Select the numba or pure-numpy kernel path.

Set ``GROWTHBOUND_DISABLE_NUMBA=1`` to force the numpy fallback. The flag is
read once at import time.

The first jitted call in a process pays a fixed setup cost of roughly half a
second, so inputs below ``MIN_WORK`` elementary steps take the numpy path even
when numba is on. ``GROWTHBOUND_NUMBA_MIN_WORK`` overrides the threshold.
"""

import os

_FLAG = os.environ.get("GROWTHBOUND_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")
MIN_WORK = int(os.environ.get("GROWTHBOUND_NUMBA_MIN_WORK", "20000"))


def use_numba(work: int) -> bool:
    return USE_NUMBA and work >= MIN_WORK


def njit(func):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"

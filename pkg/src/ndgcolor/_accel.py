"""Backend switch for the compiled kernels.

Set ``NDGCOLOR_DISABLE_NUMBA=1`` before import to force the pure
numpy/python path (useful for debugging and for the benchmark).
"""
import os

_flag = os.environ.get("NDGCOLOR_DISABLE_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _flag not in ("1", "true", "yes", "on")

try:
    import numba as _nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency here
    _nb = None
    HAVE_NUMBA = False

NUMBA_ENABLED = NUMBA_REQUESTED and HAVE_NUMBA


def jit(func):
    """Compile ``func`` with numba when available, else return it untouched."""
    if _nb is None:
        return func
    return _nb.njit(cache=True)(func)


def backend_name():
    return "numba" if NUMBA_ENABLED else "python"

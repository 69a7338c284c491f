"""Optional numba acceleration.

Set ``MAGFLOW_DISABLE_NUMBA=1`` to run every kernel as plain Python/numpy.
The kernels are written once in a scalar style that both paths execute.
"""
import os

_DISABLED = os.environ.get("MAGFLOW_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba

    NUMBA_ENABLED = True
except ImportError:
    numba = None
    NUMBA_ENABLED = False


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if NUMBA_ENABLED:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def decorator(func):
        return func

    return decorator


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"

"""Numba switch.

Kernels are compiled with numba when it is importable and the environment
variable ``STAMPFORGE_NO_JIT`` is unset (or ``0``).  Otherwise every kernel
runs through its pure numpy/Python twin, which must return identical results.
"""
import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


USE_JIT = HAVE_NUMBA and not _flag("STAMPFORGE_NO_JIT")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is present, otherwise an identity decorator.

    The decorated function is always compiled when numba exists, even if
    ``USE_JIT`` is off, so the two paths can be compared side by side.
    """
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn

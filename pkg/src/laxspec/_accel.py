"""Numba switch.

Kernels are compiled with numba when it is importable, unless the
environment variable ``LAXSPEC_DISABLE_NUMBA`` is set to a truthy value,
in which case the pure-numpy fallbacks are used everywhere.
"""

import functools
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("LAXSPEC_DISABLE_NUMBA", "").strip().lower()

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")

if HAVE_NUMBA:
    njit = functools.partial(numba.njit, cache=True, nogil=True)
else:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"

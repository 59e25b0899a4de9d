"""Switch between numba-compiled kernels and the pure-numpy fallback.

Set ``BALLSPECTRAL_DISABLE_JIT=1`` before import to force the numpy path.
If numba is not importable the numpy path is used regardless.
"""

import os

_DISABLED = os.environ.get("BALLSPECTRAL_DISABLE_JIT", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _numba_njit = None
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator.

    Kernels are always compiled when numba is installed so that the
    benchmark can compare both paths in one process; ``USE_JIT`` only
    decides which one the public API dispatches to.
    """
    if _numba_njit is None:
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return _numba_njit(*args, **kwargs)


def backend() -> str:
    return "numba" if USE_JIT else "numpy"

"""Backend selection for the compiled kernels.

Hot loops exist twice: a numba ``@njit`` version and a vectorised numpy
version. The numba path is used when numba imports cleanly and the
environment variable ``OBLDE_DISABLE_NUMBA`` is unset (or ``0``). Both paths
consume identical pre-drawn random numbers, so switching backends never
changes a run's trajectory beyond floating-point summation order.
"""

import os

ENV_FLAG = "OBLDE_DISABLE_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _env_disabled():
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


_backend = "numba" if (HAVE_NUMBA and not _env_disabled()) else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def get_backend():
    return _backend


def set_backend(name):
    """Switch kernels between ``"numba"`` and ``"numpy"`` at runtime."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    _backend = name


class use_backend:
    """Context manager that temporarily switches the kernel backend."""

    def __init__(self, name):
        self.name = name
        self._saved = None

    def __enter__(self):
        self._saved = get_backend()
        set_backend(self.name)
        return self

    def __exit__(self, *exc):
        set_backend(self._saved)
        return False

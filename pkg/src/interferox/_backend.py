"""Kernel backend selection.

Hot per-particle loops (trajectory integration) exist in two builds: a
numba @njit version and a vectorized pure-numpy version.  The environment
variable INTERFEROX_BACKEND picks one:

    INTERFEROX_BACKEND=numba   force the jitted kernels (error if unavailable)
    INTERFEROX_BACKEND=numpy   force the numpy fallback

Unset, numba is used when importable.  Both backends implement the same
arithmetic per particle and agree to ~1e-12; each is deterministic.
"""

import os

try:
    import numba  # noqa: F401
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def active_backend() -> str:
    """Resolve the kernel backend name ('numba' or 'numpy') from the env."""
    choice = os.environ.get("INTERFEROX_BACKEND", "").strip().lower()
    if choice == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("INTERFEROX_BACKEND=numba but numba is not installed")
        return "numba"
    if choice == "numpy":
        return "numpy"
    if choice:
        raise RuntimeError(f"unknown INTERFEROX_BACKEND value: {choice!r}")
    return "numba" if HAS_NUMBA else "numpy"

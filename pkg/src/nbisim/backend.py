"""Kernel backend selection for the greedy support scan.

The hot loop has two interchangeable implementations: a numba @njit kernel
(default when numba imports) and a vectorized pure-numpy fallback. Selection
order: explicit argument > NBISIM_BACKEND env var ("numba"/"numpy"/"auto") >
auto-detection.
"""

from __future__ import annotations

import os

_NUMBA_OK: bool | None = None


def numba_available() -> bool:
    global _NUMBA_OK
    if _NUMBA_OK is None:
        try:
            from . import _greedy_numba  # noqa: F401

            _NUMBA_OK = True
        except ImportError:
            _NUMBA_OK = False
    return _NUMBA_OK


def resolve(name: str | None = None) -> str:
    """Resolve a backend request to 'numba' or 'numpy'."""
    if name is None:
        name = os.environ.get("NBISIM_BACKEND", "auto").lower()
    if name in ("", "auto"):
        return "numba" if numba_available() else "numpy"
    if name == "numba":
        if not numba_available():
            raise RuntimeError("numba backend requested but numba is not importable")
        return "numba"
    if name == "numpy":
        return "numpy"
    raise ValueError(f"unknown backend {name!r} (use 'numba', 'numpy' or 'auto')")


def get_kernels(name: str | None = None):
    """Return the module providing greedy_chain / mmv_greedy_chain."""
    resolved = resolve(name)
    if resolved == "numba":
        from . import _greedy_numba as mod
    else:
        from . import _greedy_numpy as mod
    return mod

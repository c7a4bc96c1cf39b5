"""Optional numba acceleration.

Set ``HARMAP_NUMBA=0`` to force the pure-numpy kernels (useful for debugging
and on platforms without numba).  Both paths compute the same quantities.
"""

from __future__ import annotations

import os

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None

NUMBA_AVAILABLE = _njit is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and os.environ.get("HARMAP_NUMBA", "1").strip() not in {"0", "false", "no"}


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if not NUMBA_AVAILABLE:
        return fn
    return _njit(cache=True, nogil=True)(fn)

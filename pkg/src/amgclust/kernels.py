"""Kernel backend selection.

Prefers the compiled extension; falls back to pure Python when the build
is missing or the AMGCLUST_PURE_PYTHON environment variable is set to a
non-empty value. `BACKEND` reports which one is live.
"""
from __future__ import annotations

import os

if os.environ.get("AMGCLUST_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
gauss_seidel = _impl.gauss_seidel
greedy_match = _impl.greedy_match

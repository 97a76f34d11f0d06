"""Selects the elimination kernel at import time.

The compiled kernel is used when the extension was built; otherwise the
pure Python one. Setting ``APOLAR_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("APOLAR_PURE_PYTHON"):
    echelon = _kernel_py.echelon
    BACKEND = "python"
else:
    try:
        from ._ckernel import echelon
        BACKEND = "cython"
    except ImportError:
        echelon = _kernel_py.echelon
        BACKEND = "python"

__all__ = ["BACKEND", "echelon"]

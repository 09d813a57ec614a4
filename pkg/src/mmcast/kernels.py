"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
twin is loaded. Set ``MMCAST_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("MMCAST_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

beam_min_rates = _impl.beam_min_rates

__all__ = ["BACKEND", "beam_min_rates"]

"""Kernel backend selection.

The compiled Cython backend is preferred when present; BRANCHCUT_PURE=1
forces the pure-Python twin (useful for benchmarking and debugging).
"""
import os

from . import _py

if os.environ.get("BRANCHCUT_PURE") == "1":
    _impl = _py
else:
    try:
        from . import _cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _py

backend_name = _impl.backend_name
horner = _impl.horner
horner_scale = _impl.horner_scale
conv_slice = _impl.conv_slice
gauss_solve = _impl.gauss_solve
aberth_sweep = _impl.aberth_sweep

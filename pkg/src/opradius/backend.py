"""Kernel backend selection.

Two interchangeable kernel sets exist: ``numba`` (JIT-compiled, default) and
``numpy`` (pure vectorized fallback).  Selection order:

  1. the ``OPRADIUS_BACKEND`` environment variable (``numba`` or ``numpy``),
  2. automatic: numba when importable, numpy otherwise.

``set_backend`` switches at runtime (used by tests and the benchmark).
"""

from __future__ import annotations

import os
import warnings

from . import _kernels_numpy

ENV_VAR = "OPRADIUS_BACKEND"

_BACKENDS = {"numpy": _kernels_numpy}
_active = None


def _load_numba():
    if "numba" not in _BACKENDS:
        from . import _kernels_numba

        _BACKENDS["numba"] = _kernels_numba
    return _BACKENDS["numba"]


def _resolve_initial():
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice in ("numpy", "np"):
        return "numpy"
    if choice == "numba":
        _load_numba()
        return "numba"
    if choice not in ("", "auto"):
        warnings.warn(f"unknown {ENV_VAR}={choice!r}, using auto selection")
    try:
        _load_numba()
        return "numba"
    except ImportError:
        warnings.warn("numba unavailable, falling back to the numpy backend")
        return "numpy"


def active_backend() -> str:
    global _active
    if _active is None:
        _active = _resolve_initial()
    return _active


def set_backend(name: str) -> str:
    """Select ``numba`` or ``numpy`` kernels; returns the previous name."""
    global _active
    name = name.strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; choose 'numba' or 'numpy'")
    if name == "numba":
        _load_numba()
    previous = active_backend()
    _active = name
    return previous


def kernels():
    """The active kernel module."""
    return _BACKENDS[active_backend()]

"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` twin.  Set ``IIMKIT_PURE_PYTHON=1`` to force the
fallback (the benchmark and the backend-agreement tests do this per call via
:func:`backend`).
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    if os.environ.get("IIMKIT_PURE_PYTHON"):
        raise ImportError("pure-Python backend forced by environment")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
_impl: ModuleType = _ckernels if _ckernels is not None else _pykernels

DOM_WORD_LIMIT = 64


def backend(name: str | None = None) -> ModuleType:
    """Return a kernel module by name ("cython" or "python"); default active."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def jacobi_eigenvalues(a, tol: float, max_sweeps: int):
    return _impl.jacobi_eigenvalues(a, tol, max_sweeps)


def max_clique(rows, n: int, candidates: int) -> int:
    return _impl.max_clique(rows, n, candidates)


def min_dominating_set(rows, n: int) -> int:
    if n > DOM_WORD_LIMIT:
        return _pykernels.min_dominating_set(rows, n)
    return _impl.min_dominating_set(rows, n)


def eccentricities(rows, n: int) -> list[int]:
    return _impl.eccentricities(rows, n)

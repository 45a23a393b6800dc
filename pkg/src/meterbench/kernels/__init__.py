"""Numerical hot paths with two interchangeable backends.

The heavy inner loops (lasso coordinate descent, isolation-forest scoring)
are compiled with numba when available. Set METERBENCH_BACKEND=numpy to force
the vectorized pure-numpy fallback, or =numba to require the compiled path.
Both backends consume identical pregenerated randomness, so fitted models
agree across backends to floating-point noise.
"""

from __future__ import annotations

import os


def _detect_backend() -> str:
    choice = os.environ.get("METERBENCH_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"METERBENCH_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _detect_backend()


def active_backend() -> str:
    return BACKEND


from .iforest import IsolationForest, isolation_forest  # noqa: E402
from .lasso import lasso_cd, lasso_objective  # noqa: E402

__all__ = [
    "BACKEND",
    "IsolationForest",
    "active_backend",
    "isolation_forest",
    "lasso_cd",
    "lasso_objective",
]

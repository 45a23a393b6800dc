"""Exact Shapley attributions by full coalition enumeration.

Feasible up to 15 features (2^15 model evaluations); the model is a
black box mapping an (m, n) feature matrix to m outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

MAX_FEATURES = 15


@dataclass(frozen=True)
class Attribution:
    feature: str
    shapley_value: float  # kWh contribution relative to the background
    actionable: bool = False


def _batch_eval(model: Callable, X: np.ndarray) -> np.ndarray:
    out = np.asarray(model(X), dtype=np.float64)
    if out.shape == (X.shape[0],):
        return out
    # row-at-a-time fallback for models without batch support
    return np.array([float(model(row[None, :])) for row in X])


def exact_shapley(model: Callable, instance: Sequence[float], background: Sequence[float],
                  feature_names: Optional[Sequence[str]] = None,
                  actionable: Sequence[str] = ()) -> List[Attribution]:
    x = np.asarray(instance, dtype=np.float64)
    b = np.asarray(background, dtype=np.float64)
    if x.ndim != 1 or x.shape != b.shape:
        raise ValueError("instance and background must be equal-length vectors")
    n = x.size
    if n == 0:
        raise ValueError("need at least one feature")
    if n > MAX_FEATURES:
        raise ValueError(f"exact enumeration supports at most {MAX_FEATURES} features, got {n}")
    names = list(feature_names) if feature_names is not None else [f"f{j}" for j in range(n)]
    if len(names) != n:
        raise ValueError("feature_names length mismatch")

    masks = np.arange(2 ** n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    values = _batch_eval(model, np.where(bits, x, b))
    sizes = bits.sum(axis=1)
    weight = np.array([math.factorial(s) * math.factorial(n - s - 1) / math.factorial(n)
                       for s in range(n)])

    flagged = set(actionable)
    out = []
    for j in range(n):
        without = masks[~bits[:, j]]
        contrib = values[without | (1 << j)] - values[without]
        phi = float(np.sum(weight[sizes[without]] * contrib))
        out.append(Attribution(names[j], phi, names[j] in flagged))
    return out


def efficiency_gap(attributions: Sequence[Attribution], model: Callable,
                   instance: Sequence[float], background: Sequence[float]) -> float:
    """|Σφ − (f(x) − f(b))|, the efficiency-axiom residual."""
    x = np.asarray(instance, dtype=np.float64)[None, :]
    b = np.asarray(background, dtype=np.float64)[None, :]
    total = sum(a.shapley_value for a in attributions)
    return abs(total - (float(_batch_eval(model, x)[0]) - float(_batch_eval(model, b)[0])))

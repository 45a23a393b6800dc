"""Isolation-forest cleaned KNN base-meter pipeline."""

from __future__ import annotations

import warnings

import numpy as np

from ..kernels import IsolationForest
from ..preprocess import normalize_fraction
from . import ForecastSet, PrepView, estimated_yearly_total, full_year_meters


def knn_base_forecaster(prep: PrepView, outlier_quantile: float = 0.92,
                        k_min: int = 10, k_max: int = 40, repeats: int = 5,
                        seed: int = 0, distance: str = "euclidean") -> ForecastSet:
    """Predict each meter's month fractions as the mean over k nearest base
    meters (k random per repeat), scaled by the meter's estimated yearly total.

    Base meters are fully observed meters that survive an isolation-forest
    cut at the given score quantile. Distances use the overlapping observed
    months of renormalized fraction profiles; ``distance`` may be
    "euclidean" or "correlation".
    """
    if distance not in ("euclidean", "correlation"):
        raise ValueError(f"unknown distance {distance!r}")
    full = full_year_meters(prep)
    if not full:
        raise ValueError("no fully observed meters to use as a base")
    base_fracs = np.vstack([normalize_fraction(prep.monthly[m]) for m in full])

    scores = IsolationForest(n_trees=100, subsample=min(256, len(full)), seed=seed)\
        .fit(base_fracs).score(base_fracs)
    keep = scores < np.quantile(scores, outlier_quantile)
    if not keep.any():
        keep[:] = True
    base_ids = [m for m, k in zip(full, keep) if k]
    base = base_fracs[keep]

    rng = np.random.default_rng(seed)
    mean_profile = base.mean(axis=0)
    predictions = {}
    for mid, mo in prep.monthly.items():
        obs = mo.present
        target_total = estimated_yearly_total(mo.values, mean_profile)
        y = mo.values[obs]
        t_frac = y / y.sum() if y.sum() > 0 else np.full(y.size, 1.0 / y.size)
        windows = base[:, obs]
        sums = windows.sum(axis=1, keepdims=True)
        b_frac = np.where(sums > 0, windows / np.maximum(sums, 1e-300), 0.0)
        if distance == "euclidean":
            dists = np.linalg.norm(b_frac - t_frac[None, :], axis=1)
        else:
            bc = b_frac - b_frac.mean(axis=1, keepdims=True)
            tc = t_frac - t_frac.mean()
            denom = np.linalg.norm(bc, axis=1) * np.linalg.norm(tc)
            with np.errstate(invalid="ignore", divide="ignore"):
                corr = np.where(denom > 0, (bc @ tc) / np.maximum(denom, 1e-300), 0.0)
            dists = 1.0 - corr
        order = np.argsort(dists, kind="stable")

        acc = np.zeros(12)
        for _ in range(repeats):
            k = int(rng.integers(k_min, k_max + 1))
            if k > len(base_ids):
                warnings.warn(f"base set smaller than k={k}; clamping", stacklevel=2)
                k = len(base_ids)
            acc += base[order[:k]].mean(axis=0)
        predictions[mid] = np.maximum(acc / repeats * target_total, 0.0)
    return ForecastSet("sl_knn_base", predictions)

"""Fuzzy-cluster ensemble forecaster with threshold post-processing.

Combines three structural predictions per meter: a global consumption
shape, the nearest fuzzy-c-means cluster shape, and a flat projection of
the last two observed months. Zero-reading windows are treated as dead
sensor stretches and discarded before modelling.
"""

from __future__ import annotations

import warnings

import numpy as np

from ..core.aggregate import aggregate_daily, aggregate_monthly
from ..core.types import EmptyMeter
from ..preprocess import drop_dead_windows
from . import ForecastSet, PrepView, estimated_yearly_total
from .clustering import fit_fcm
from .ensemble import ensemble, postprocess_wu


def _minmax(values: np.ndarray) -> np.ndarray:
    span = np.ptp(values)
    if span <= 0:
        return np.full_like(values, 0.5)
    return (values - values.min()) / span


def wu_forecaster(prep: PrepView, seed: int = 0, n_clusters: int = 12,
                  weights=(0.4, 0.4, 0.2),
                  malfunction_threshold: float = 10.0) -> ForecastSet:
    cohort = prep.cohort
    monthly = {}
    for mid, series in cohort.meters.items():
        try:
            cleaned = drop_dead_windows(series)
        except EmptyMeter:
            monthly[mid] = np.full(12, np.nan)  # nothing but dead windows
            continue
        mo = aggregate_monthly(aggregate_daily(cleaned, 12), 5)
        monthly[mid] = mo.values

    full = [mid for mid, v in monthly.items() if not np.isnan(v).any()]
    if not full:
        raise EmptyMeter("no fully observed meters to cluster")
    profiles = np.vstack([monthly[m] for m in full])
    totals = profiles.sum(axis=1)
    positive = totals > 0
    if positive.any():
        global_fraction = (profiles[positive] / totals[positive, None]).mean(axis=0)
    else:
        global_fraction = np.full(12, 1.0 / 12.0)
    median_total = float(np.median(totals))

    k = min(n_clusters, len(full))
    if k < n_clusters:
        warnings.warn(f"only {len(full)} full meters; clustering with k={k}")
    model = fit_fcm(np.vstack([_minmax(p) for p in profiles]), k=k, seed=seed)

    by_shape, by_cluster, by_tail = {}, {}, {}
    for mid in cohort.meters:
        v = monthly[mid]
        obs = ~np.isnan(v)
        if obs.any():
            total = max(estimated_yearly_total(v, global_fraction), 0.0)
        else:
            total = median_total

        by_shape[mid] = global_fraction * total

        window = _minmax(v[obs]) if obs.any() else np.full(12, 0.5)
        dims = obs if obs.any() else np.ones(12, dtype=bool)
        dists = [np.linalg.norm(_minmax(c[dims]) - window) for c in model.centroids]
        centroid = model.centroids[int(np.argmin(dists))]
        if centroid.sum() > 0:
            by_cluster[mid] = centroid / centroid.sum() * total
        else:
            by_cluster[mid] = by_shape[mid]

        if obs.any():
            tail = v[np.flatnonzero(obs)[-2:]]
            by_tail[mid] = np.full(12, tail.mean())
        else:
            by_tail[mid] = np.full(12, total / 12.0)

    combined = ensemble(
        [ForecastSet("wu_shape", by_shape), ForecastSet("wu_cluster", by_cluster),
         ForecastSet("wu_tail", by_tail)],
        method="weighted", weights=list(weights), pipeline_id="wu_ensemble")
    return postprocess_wu(combined, cohort, malfunction_threshold=malfunction_threshold)

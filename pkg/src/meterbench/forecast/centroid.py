"""Assumed-sign-up-month cluster-centroid pipeline."""

from __future__ import annotations

import numpy as np

from . import ForecastSet, PrepView, full_year_meters, smooth_three_month
from .clustering import fit_kmeans_elbow

_RESCALE_MONTHS = range(0, 5)  # level rescaling only for Jan..May assumed sign-ups


def cluster_centroid_forecaster(prep: PrepView, seed: int = 0, k_max: int = 8,
                                n_neighbors: int = 5) -> ForecastSet:
    """Nearest-centroid prediction per assumed sign-up month, combined by
    elementwise median, then 3-month smoothed.

    Centroids are means of full-year profiles clustered on the trailing
    window's fraction shape; Jan-May assumptions rescale the chosen centroid
    to the meter's observed level. Meters with a single observed month take
    the median profile of the nearest full-year meters by that month's value.
    """
    full = full_year_meters(prep)
    if not full:
        raise ValueError("no fully observed meters to build clusters from")
    full_profiles = np.vstack([prep.monthly[m].values for m in full])

    month_models = {}
    for m in range(12):
        window = np.arange(m, 12)
        w = full_profiles[:, window]
        pts = w / np.maximum(w.sum(axis=1, keepdims=True), 1e-300)
        model = fit_kmeans_elbow(pts, k_max=k_max, seed=seed + m)
        centroids_full = np.vstack([
            full_profiles[model.memberships == c].mean(axis=0)
            if (model.memberships == c).any() else full_profiles.mean(axis=0)
            for c in range(model.k)
        ])
        month_models[m] = (window, centroids_full)

    predictions = {}
    for mid, mo in prep.monthly.items():
        obs_idx = np.flatnonzero(mo.present)
        if obs_idx.size == 1:
            month = int(obs_idx[0])
            val = mo.values[month]
            order = np.argsort(np.abs(full_profiles[:, month] - val), kind="stable")
            pred = np.median(full_profiles[order[:n_neighbors]], axis=0)
        else:
            first = int(obs_idx[0])
            candidates = []
            for m in range(first, 12):
                window, centroids_full = month_models[m]
                usable = np.intersect1d(window, obs_idx)
                if usable.size < 2:
                    continue
                y = mo.values[usable]
                t_frac = y / max(y.sum(), 1e-300)
                c_wins = centroids_full[:, usable]
                c_frac = c_wins / np.maximum(c_wins.sum(axis=1, keepdims=True), 1e-300)
                c = int(np.linalg.norm(c_frac - t_frac[None, :], axis=1).argmin())
                centroid = centroids_full[c]
                if m in _RESCALE_MONTHS:
                    level = centroid[usable].sum()
                    centroid = centroid * (y.sum() / level) if level > 0 else centroid
                candidates.append(centroid)
            pred = np.median(np.vstack(candidates), axis=0)
        predictions[mid] = np.maximum(smooth_three_month(pred), 0.0)
    return ForecastSet("jl_cluster_centroid", predictions)

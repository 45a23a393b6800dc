"""Competition baseline and the median-profile pipeline."""

from __future__ import annotations

import numpy as np

from ..core.types import EmptyMeter
from ..preprocess import normalize_fraction
from . import ForecastSet, PrepView, full_year_meters


def naive_baseline(prep: PrepView) -> ForecastSet:
    """Every 2018 month = mean of the meter's available 2017 monthly totals."""
    predictions = {}
    for mid, mo in prep.monthly.items():
        v = mo.values[mo.present]
        if v.size == 0:
            raise EmptyMeter(f"meter {mid} has no available months")
        predictions[mid] = np.full(12, v.mean())
    return ForecastSet("naive", predictions)


def median_profile_forecaster(prep: PrepView) -> ForecastSet:
    """Global per-month median of normalized full-year profiles, then a
    per-meter (shift, scale) least-squares fit over its observed months."""
    full = full_year_meters(prep)
    if not full:
        raise ValueError("no fully observed meter to build the profile from")
    profiles = np.vstack([normalize_fraction(prep.monthly[m]) for m in full])
    profile = np.median(profiles, axis=0)

    predictions = {}
    for mid, mo in prep.monthly.items():
        obs = mo.present
        y = mo.values[obs]
        p = profile[obs]
        if y.size >= 2 and np.ptp(p) > 0:
            A = np.column_stack([np.ones_like(p), p])
            (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
        else:
            denom = float(p @ p)
            b = float(p @ y) / denom if denom > 0 else 0.0
            a = 0.0 if denom > 0 else (y.mean() if y.size else 0.0)
        predictions[mid] = np.maximum(a + b * profile, 0.0)
    return ForecastSet("sr_median_profile", predictions)

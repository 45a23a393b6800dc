"""Forecast combination and the threshold/scaling post-process."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..core import calendar as cal
from ..core.types import Cohort
from . import ForecastSet, smooth_three_month

GEOMEAN_FLOOR = 1e-9  # zeros are floored here before the log

WINTER_MONTHS = (11, 0, 1)  # Dec, Jan, Feb
SUMMER_MONTHS = (5, 6, 7)   # Jun, Jul, Aug

_METHODS = ("mean", "median", "geometric_mean", "weighted")


def ensemble(forecasts: Sequence[ForecastSet], method: str = "mean",
             weights: Optional[Sequence[float]] = None,
             pipeline_id: Optional[str] = None) -> ForecastSet:
    """Elementwise per-meter-month combination of forecast sets."""
    if not forecasts:
        raise ValueError("need at least one forecast set")
    ids = set(forecasts[0].predictions)
    for f in forecasts[1:]:
        if set(f.predictions) != ids:
            raise ValueError("forecast sets cover different meters")
    if method not in _METHODS:
        raise ValueError(f"unknown ensemble method {method!r}")
    w = None
    if method == "weighted":
        if weights is None or len(weights) != len(forecasts):
            raise ValueError("weighted ensemble needs one weight per forecast set")
        w = np.asarray(weights, dtype=np.float64)
        if (w < 0).any() or w.sum() <= 0:
            raise ValueError("weights must be non-negative with a positive sum")
        w = w / w.sum()

    name = pipeline_id or f"ensemble_{method}"
    out = {}
    for mid in sorted(ids):
        stack = np.vstack([f.predictions[mid] for f in forecasts])
        if method == "mean":
            out[mid] = stack.mean(axis=0)
        elif method == "median":
            out[mid] = np.median(stack, axis=0)
        elif method == "geometric_mean":
            out[mid] = np.exp(np.log(np.maximum(stack, GEOMEAN_FLOOR)).mean(axis=0))
        else:
            out[mid] = w @ stack
    return ForecastSet(name, out)


def _latest_month_total(raw: np.ndarray) -> Optional[float]:
    """Total of the most recent month holding any reading, rescaled to the
    full month length when slots are missing."""
    for month in range(11, -1, -1):
        chunk = raw[cal.slots_of_month(month)]
        present = ~np.isnan(chunk)
        n = int(present.sum())
        if n:
            return float(np.nansum(chunk) * chunk.size / n)
    return None


def postprocess_wu(forecast: ForecastSet, cohort: Cohort,
                   malfunction_threshold: float = 10.0, low_ratio: float = 0.2,
                   winter_factor: float = 1.15, summer_factor: float = 0.85) -> ForecastSet:
    """Four ordered steps: dead-sensor zeroing, low-recent flattening to the
    latest observed month, 3-month window smoothing, seasonal scaling."""
    out = {}
    tail_slots = 31 * cal.SLOTS_PER_DAY
    for mid, pred in forecast.predictions.items():
        p = pred.copy()
        raw = cohort.meters[mid].values
        tail = raw[-tail_slots:]
        if np.nansum(tail) < malfunction_threshold:
            out[mid] = np.zeros(12)
            continue

        tail_obs = int(np.count_nonzero(~np.isnan(tail)))
        all_obs = int(np.count_nonzero(~np.isnan(raw)))
        tail_rate = np.nansum(tail) / tail_obs if tail_obs else 0.0
        overall_rate = np.nansum(raw) / all_obs if all_obs else 0.0
        if overall_rate > 0 and tail_rate < (1.0 - low_ratio) * overall_rate:
            latest = _latest_month_total(raw)
            if latest is not None:
                p = np.full(12, latest)

        smoothed = smooth_three_month(p)
        for m in WINTER_MONTHS:
            smoothed[m] *= winter_factor
        for m in SUMMER_MONTHS:
            smoothed[m] *= summer_factor
        out[mid] = np.maximum(smoothed, 0.0)
    return ForecastSet(forecast.pipeline_id, out)

"""Forecasting model zoo: baseline, finalist pipelines, ensembling, postprocess.

All forecasters consume a PrepView (shared imputed views of the cohort) and
emit a ForecastSet of non-negative 2018 monthly kWh per meter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..core import calendar as cal
from ..core.aggregate import aggregate_daily, aggregate_monthly, availability_group
from ..core.types import Cohort, DailySeries, EmptyMeter, MonthlySeries
from ..preprocess import fill_nearest_day, fill_seasonal_median, interpolate_daily


@dataclass(frozen=True)
class ForecastSet:
    """Per-meter 2018 monthly predictions; finite and non-negative."""

    pipeline_id: str
    predictions: Dict[str, np.ndarray]

    def __post_init__(self):
        fixed = {}
        for mid, vals in self.predictions.items():
            v = np.asarray(vals, dtype=np.float64)
            if v.shape != (12,):
                raise ValueError(f"{self.pipeline_id}/{mid}: expected 12 months")
            if not np.isfinite(v).all() or (v < 0).any():
                raise ValueError(f"{self.pipeline_id}/{mid}: predictions must be finite and >= 0")
            v = v.copy()
            v.flags.writeable = False
            fixed[mid] = v
        object.__setattr__(self, "predictions", fixed)

    def matrix(self, meter_ids) -> np.ndarray:
        return np.vstack([self.predictions[m] for m in meter_ids])

    def validate_against(self, cohort: Cohort) -> None:
        missing = set(cohort.meters) - set(self.predictions)
        if missing:
            raise ValueError(f"{self.pipeline_id}: no prediction for {sorted(missing)[:5]}")


@dataclass(frozen=True)
class PrepView:
    """Shared per-meter views: raw and gap-filled monthly, filled daily."""

    cohort: Cohort
    raw_monthly: dict = field(default_factory=dict)      # no fill; strict day rule
    monthly: dict = field(default_factory=dict)          # slot-filled, raw-dead months masked
    daily: dict = field(default_factory=dict)            # threshold days + seasonal median + interp
    daily_observed: dict = field(default_factory=dict)   # day present before any fill


def prepare(cohort: Cohort, day_threshold: int = 12, month_missing_days_max: int = 5) -> PrepView:
    raw_monthly, monthly, daily, daily_observed = {}, {}, {}, {}
    for mid, series in cohort.meters.items():
        raw_mo = aggregate_monthly(aggregate_daily(series), month_missing_days_max)
        raw_monthly[mid] = raw_mo

        filled = fill_nearest_day(series)
        mo = aggregate_monthly(aggregate_daily(filled), month_missing_days_max).values.copy()
        raw_slots = series.values.reshape(cal.DAYS_PER_YEAR, cal.SLOTS_PER_DAY)
        for m in range(12):
            if np.isnan(raw_slots[cal.days_of_month(m)]).all():
                mo[m] = np.nan  # a month with no real readings stays unknown
        monthly[mid] = MonthlySeries(mid, mo)

        day = aggregate_daily(series, day_threshold)
        daily_observed[mid] = ~np.isnan(day.values)
        daily[mid] = interpolate_daily(fill_seasonal_median(day))
    return PrepView(cohort, raw_monthly, monthly, daily, daily_observed)


def full_year_meters(prep: PrepView) -> list:
    """Meters whose strict (unfilled) monthly view covers all 12 months."""
    return [m for m, mo in prep.raw_monthly.items() if mo.present.all()]


def estimated_yearly_total(values: np.ndarray, reference_fractions: np.ndarray) -> float:
    """Extrapolate a yearly total from observed months via a fraction profile."""
    obs = ~np.isnan(values)
    if not obs.any():
        raise EmptyMeter("no observed months")
    share = reference_fractions[obs].sum()
    if share <= 0:
        share = obs.sum() / 12.0
    return float(values[obs].sum() / share)


def smooth_three_month(values: np.ndarray) -> np.ndarray:
    """Centered 3-month moving average; boundary months average what exists."""
    out = np.empty(12)
    for m in range(12):
        lo, hi = max(0, m - 1), min(12, m + 2)
        out[m] = values[lo:hi].mean()
    return out


from .clustering import ClusterModel, fit_fcm, fit_kmeans_elbow  # noqa: E402
from .simple import median_profile_forecaster, naive_baseline  # noqa: E402
from .svd_group import svd_group_forecaster  # noqa: E402
from .neighbors import knn_base_forecaster  # noqa: E402
from .centroid import cluster_centroid_forecaster  # noqa: E402
from .regression import expectile_forecaster, pooled_penalized_regression  # noqa: E402
from .ensemble import ensemble, postprocess_wu  # noqa: E402
from .wu import wu_forecaster  # noqa: E402
from .pipelines import PIPELINES, run_pipeline, run_spec  # noqa: E402

__all__ = [
    "ClusterModel",
    "ForecastSet",
    "PIPELINES",
    "PrepView",
    "cluster_centroid_forecaster",
    "ensemble",
    "estimated_yearly_total",
    "expectile_forecaster",
    "fit_fcm",
    "fit_kmeans_elbow",
    "full_year_meters",
    "knn_base_forecaster",
    "median_profile_forecaster",
    "naive_baseline",
    "pooled_penalized_regression",
    "postprocess_wu",
    "prepare",
    "run_pipeline",
    "run_spec",
    "smooth_three_month",
    "svd_group_forecaster",
    "wu_forecaster",
]

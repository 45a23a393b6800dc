"""Relative-absolute-error accuracy metrics, leaderboard, and final score.

The yearly and monthly rAE follow the competition definitions literally,
including the centering on the mean of absolute truths; pass
``absolute_center=False`` for the conventional mean-of-values variant.
Meters whose monthly truth is constant have a zero denominator and are
skipped and reported rather than silently floored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from .core.types import DegenerateTruth

RAE_CAP = 2.0
SCORE_SCHEMA = "meterbench.score/1"


@dataclass(frozen=True)
class ScoreReport:
    pipeline_id: str
    year_rae: float
    month_rae: float
    total_rae: float
    per_meter_month_rae: Dict[str, float] = field(default_factory=dict)
    skipped_meters: List[Tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        for name in ("year_rae", "month_rae", "total_rae"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if self.total_rae != (self.year_rae + self.month_rae) / 2.0:
            raise ValueError("total_rae must equal (year_rae + month_rae)/2 exactly")


def _aligned(predictions: Mapping[str, np.ndarray],
             truth: Mapping[str, np.ndarray]) -> List[str]:
    if set(predictions) != set(truth):
        raise ValueError("predictions and truth cover different meters")
    return sorted(predictions)


def _vals(entry) -> np.ndarray:
    """Accept plain arrays or monthly-series objects carrying .values."""
    return np.asarray(getattr(entry, "values", entry), dtype=np.float64)


def year_rae(predictions: Mapping[str, np.ndarray], truth: Mapping[str, np.ndarray],
             absolute_center: bool = True) -> float:
    meters = _aligned(predictions, truth)
    if len(meters) < 2:
        raise ValueError("need at least 2 meters")
    y = np.array([_vals(predictions[m]).sum() for m in meters])
    t = np.array([_vals(truth[m]).sum() for m in meters])
    center = np.abs(t).mean() if absolute_center else t.mean()
    denom = np.abs(t - center).mean()
    if denom == 0:
        raise DegenerateTruth("all yearly truths equal their mean")
    return float(np.abs(y - t).mean() / denom)


def _meter_month_rae(pred: np.ndarray, true: np.ndarray,
                     absolute_center: bool) -> float:
    center = np.abs(true).mean() if absolute_center else true.mean()
    denom = np.abs(true - center).mean()
    if denom == 0:
        raise DegenerateTruth("constant monthly truth")
    return float(np.abs(pred - true).mean() / denom)


def _month_details(predictions: Mapping[str, np.ndarray], truth: Mapping[str, np.ndarray],
                   absolute_center: bool) -> Tuple[Dict[str, float], List[Tuple[str, str]]]:
    per_meter: Dict[str, float] = {}
    skipped: List[Tuple[str, str]] = []
    for mid in _aligned(predictions, truth):
        pred = _vals(predictions[mid])
        true = _vals(truth[mid])
        if pred.shape != (12,) or true.shape != (12,):
            raise ValueError(f"{mid}: expected 12 months on both sides")
        try:
            per_meter[mid] = _meter_month_rae(pred, true, absolute_center)
        except DegenerateTruth:
            skipped.append((mid, "constant monthly truth (zero denominator)"))
    return per_meter, skipped


def month_rae(predictions: Mapping[str, np.ndarray], truth: Mapping[str, np.ndarray],
              absolute_center: bool = True) -> float:
    per_meter, _ = _month_details(predictions, truth, absolute_center)
    if not per_meter:
        raise DegenerateTruth("every meter has constant monthly truth")
    return float(np.mean(list(per_meter.values())))


def total_rae(predictions: Mapping[str, np.ndarray], truth: Mapping[str, np.ndarray],
              pipeline_id: str = "", absolute_center: bool = True) -> ScoreReport:
    per_meter, skipped = _month_details(predictions, truth, absolute_center)
    if not per_meter:
        raise DegenerateTruth("every meter has constant monthly truth")
    month = float(np.mean(list(per_meter.values())))
    year = year_rae(predictions, truth, absolute_center)
    return ScoreReport(
        pipeline_id=pipeline_id,
        year_rae=year,
        month_rae=month,
        total_rae=(year + month) / 2.0,
        per_meter_month_rae=per_meter,
        skipped_meters=skipped,
    )


def score_forecast(forecast, truth: Mapping[str, np.ndarray],
                   absolute_center: bool = True) -> ScoreReport:
    """Score a ForecastSet against a truth map under its own pipeline id."""
    return total_rae(forecast.predictions, truth,
                     pipeline_id=forecast.pipeline_id, absolute_center=absolute_center)


def leaderboard(reports: Sequence[ScoreReport]) -> List[ScoreReport]:
    return sorted(reports, key=lambda r: (r.total_rae, r.pipeline_id))


def final_score(report, criterion_means: Sequence[float],
                w_acc: float = 0.5, w_exp: float = 0.5,
                rae_cap: float = RAE_CAP) -> float:
    total = report.total_rae if isinstance(report, ScoreReport) else float(report)
    means = np.asarray(criterion_means, dtype=np.float64)
    if means.size == 0 or (means < 1).any() or (means > 5).any():
        raise ValueError("criterion means must lie in [1, 5]")
    if w_acc < 0 or w_exp < 0 or abs(w_acc + w_exp - 1.0) > 1e-12:
        raise ValueError("weights must be >= 0 and sum to 1")
    accuracy = max(0.0, 1.0 - total / rae_cap)
    explanation = (means.mean() - 1.0) / 4.0
    return float(10.0 * (w_acc * accuracy + w_exp * explanation))


def report_to_json(report: ScoreReport) -> dict:
    return {
        "schema": SCORE_SCHEMA,
        "pipeline_id": report.pipeline_id,
        "year_rae": report.year_rae,
        "month_rae": report.month_rae,
        "total_rae": report.total_rae,
        "per_meter_month_rae": dict(report.per_meter_month_rae),
        "skipped_meters": [
            {"meter_id": m, "reason": r} for m, r in report.skipped_meters
        ],
    }


def report_from_json(data: dict) -> ScoreReport:
    if data.get("schema") != SCORE_SCHEMA:
        raise ValueError(f"unsupported score schema {data.get('schema')!r}")
    return ScoreReport(
        pipeline_id=data["pipeline_id"],
        year_rae=data["year_rae"],
        month_rae=data["month_rae"],
        total_rae=data["total_rae"],
        per_meter_month_rae=dict(data["per_meter_month_rae"]),
        skipped_meters=[(d["meter_id"], d["reason"]) for d in data["skipped_meters"]],
    )

"""Named pipeline registry and the JSON pipeline-spec interpreter."""

from __future__ import annotations

from typing import Callable, Dict, Optional

from ..core.types import Cohort
from . import (
    ForecastSet,
    PrepView,
    cluster_centroid_forecaster,
    expectile_forecaster,
    knn_base_forecaster,
    median_profile_forecaster,
    naive_baseline,
    pooled_penalized_regression,
    prepare,
    svd_group_forecaster,
)
from .ensemble import ensemble, postprocess_wu
from .wu import wu_forecaster

Forecaster = Callable[..., ForecastSet]


def _naive(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return naive_baseline(prep, **kw)


def _median_profile(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return median_profile_forecaster(prep, **kw)


def _svd_group(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return svd_group_forecaster(prep, **kw)


def _knn_base(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return knn_base_forecaster(prep, seed=seed, **kw)


def _cluster_centroid(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return cluster_centroid_forecaster(prep, seed=seed, **kw)


def _pooled_regression(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return pooled_penalized_regression(prep, seed=seed, **kw)


def _expectile(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return expectile_forecaster(prep, seed=seed, **kw)


def _wu(prep: PrepView, seed: int, **kw) -> ForecastSet:
    return wu_forecaster(prep, seed=seed, **kw)


PIPELINES: Dict[str, Forecaster] = {
    "naive": _naive,
    "sr_median_profile": _median_profile,
    "ad_svd_group": _svd_group,
    "sl_knn_base": _knn_base,
    "jl_cluster_centroid": _cluster_centroid,
    "kb_pooled_regression": _pooled_regression,
    "dr_expectile": _expectile,
    "wu_ensemble": _wu,
}


def run_pipeline(name: str, cohort: Cohort, seed: int = 0,
                 prep: Optional[PrepView] = None, **params) -> ForecastSet:
    if name not in PIPELINES:
        raise ValueError(f"unknown pipeline {name!r}; choose from {sorted(PIPELINES)}")
    if prep is None:
        prep = prepare(cohort)
    forecast = PIPELINES[name](prep, seed, **params)
    forecast.validate_against(cohort)
    return forecast


def run_spec(spec: dict, cohort: Cohort, seed: int = 0) -> ForecastSet:
    """Interpret a pipeline spec: preprocess params, model list, optional
    ensemble and postprocess stages.

    Shape: {"id": str?, "preprocess": {...}?, "models": [{"name": ..., **params}],
    "ensemble": {"method": ..., "weights": ...}?, "postprocess": {"name": "wu", **params}?}
    """
    prep = prepare(cohort, **spec.get("preprocess", {}))

    models = spec.get("models")
    if not models:
        raise ValueError("pipeline spec needs a non-empty 'models' list")
    sets = []
    for entry in models:
        params = dict(entry)
        name = params.pop("name")
        if name not in PIPELINES:
            raise ValueError(f"unknown pipeline {name!r} in spec")
        sets.append(PIPELINES[name](prep, seed, **params))

    if len(sets) == 1 and "ensemble" not in spec:
        forecast = sets[0]
    else:
        combo = spec.get("ensemble", {})
        forecast = ensemble(sets, method=combo.get("method", "mean"),
                            weights=combo.get("weights"),
                            pipeline_id=spec.get("id"))

    post = spec.get("postprocess")
    if post:
        params = dict(post)
        name = params.pop("name")
        if name != "wu":
            raise ValueError(f"unknown postprocess {name!r}")
        forecast = postprocess_wu(forecast, cohort, **params)

    if spec.get("id") and forecast.pipeline_id != spec["id"]:
        forecast = ForecastSet(spec["id"], dict(forecast.predictions))
    forecast.validate_against(cohort)
    return forecast

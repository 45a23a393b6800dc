"""Pooled lag-regression pipelines: penalized linear and expectile.

Both fit one global model on rows pooled across meters (lagged daily
consumption plus exogenous features), then roll 2018 out day by day,
feeding predictions back as lags, with bootstrapped 2018 temperature.
"""

from __future__ import annotations

import warnings

import numpy as np

from ..core import calendar as cal
from ..kernels import lasso_cd
from ..preprocess import bootstrap_temperature
from . import ForecastSet, PrepView

EXOG_CHOICES = ("temperature", "day-of-week", "month")


def _exog_block(day_index: np.ndarray, year: int, temps: np.ndarray, exog) -> np.ndarray:
    cols = []
    if "temperature" in exog:
        cols.append(temps[day_index][:, None])
    if "day-of-week" in exog:
        dows = cal.weekdays_of_year(year)[day_index]
        cols.append((dows[:, None] == np.arange(1, 7)[None, :]).astype(float))
    if "month" in exog:
        months = cal.MONTH_OF_DAY[day_index]
        cols.append((months[:, None] == np.arange(1, 12)[None, :]).astype(float))
    if not cols:
        return np.empty((len(day_index), 0))
    return np.hstack(cols)


def _pooled_design(prep: PrepView, lags: int, exog):
    """Stack per-meter rows: lagged filled dailies for observed target days."""
    temps = prep.cohort.weather.y2017.temp_avg
    X_rows, y_rows = [], []
    for mid, daily in prep.daily.items():
        v = daily.values
        observed = prep.daily_observed[mid]
        valid = observed.copy()
        valid[:lags] = False
        for k in range(1, lags + 1):
            valid[k:] &= ~np.isnan(v[:-k])
        days = np.flatnonzero(valid & ~np.isnan(v))
        if days.size == 0:
            continue
        lag_block = np.column_stack([v[days - k] for k in range(1, lags + 1)])
        X_rows.append(np.hstack([lag_block, _exog_block(days, cal.BASE_YEAR, temps, exog)]))
        y_rows.append(v[days])
    if not X_rows:
        raise ValueError("no usable training rows; history too sparse")
    return np.vstack(X_rows), np.concatenate(y_rows)


def _rollout(prep: PrepView, weights: np.ndarray, intercept: float, lags: int,
             exog, temps_2018: np.ndarray, pipeline_id: str) -> ForecastSet:
    ids = list(prep.daily)
    state = np.vstack([_seed_history(prep.daily[m].values, lags) for m in ids])
    daily_pred = np.zeros((len(ids), cal.DAYS_PER_YEAR))
    for d in range(cal.DAYS_PER_YEAR):
        exog_row = _exog_block(np.array([d]), cal.TARGET_YEAR, temps_2018, exog)[0]
        X = np.hstack([state, np.tile(exog_row, (len(ids), 1))])
        pred = np.maximum(X @ weights + intercept, 0.0)
        daily_pred[:, d] = pred
        state[:, 1:] = state[:, :-1]
        state[:, 0] = pred
    monthly = np.add.reduceat(daily_pred, cal.MONTH_START_DAY, axis=1)
    return ForecastSet(pipeline_id, {m: monthly[i] for i, m in enumerate(ids)})


def _seed_history(values: np.ndarray, lags: int) -> np.ndarray:
    """Trailing 2017 dailies, most recent first; gaps fall back to the mean."""
    tail = values[-lags:][::-1].copy()
    fallback = np.nanmean(values)
    if np.isnan(fallback):
        fallback = 0.0
    tail[np.isnan(tail)] = fallback
    return tail


def pooled_penalized_regression(prep: PrepView, lags: int = 7, penalty: str = "l1",
                                lam: float = 0.5,
                                exog=("temperature", "day-of-week", "month"),
                                seed: int = 0, block_length: int = 30) -> ForecastSet:
    if lags < 1:
        raise ValueError("lags must be >= 1")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if penalty not in ("none", "l1", "l2"):
        raise ValueError(f"unknown penalty {penalty!r}")
    unknown = set(exog) - set(EXOG_CHOICES)
    if unknown:
        raise ValueError(f"unknown exogenous features: {sorted(unknown)}")

    X, y = _pooled_design(prep, lags, exog)
    if penalty == "l1":
        w, b, _ = lasso_cd(X, y, lam, tol=1e-8, max_iters=2000)
    elif penalty == "l2":
        Xc = X - X.mean(axis=0)
        yc = y - y.mean()
        w = np.linalg.solve(Xc.T @ Xc + lam * len(y) * np.eye(X.shape[1]), Xc.T @ yc)
        b = float(y.mean() - X.mean(axis=0) @ w)
    else:
        A = np.column_stack([np.ones(len(y)), X])
        beta, *_ = np.linalg.lstsq(A, y, rcond=None)
        b, w = float(beta[0]), beta[1:]

    temps18 = bootstrap_temperature(prep.cohort.weather.y2017, block_length, seed).temp_avg
    return _rollout(prep, w, b, lags, exog, temps18, "kb_pooled_regression")


def fit_expectile(X: np.ndarray, y: np.ndarray, tau: float,
                  max_iters: int = 100) -> np.ndarray:
    """Asymmetric least squares by IRLS; returns coefficients with the
    intercept first. Stops when the residual sign pattern stabilizes."""
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0,1)")
    A = np.column_stack([np.ones(len(y)), X])
    beta, *_ = np.linalg.lstsq(A, y, rcond=None)
    signs = None
    for _ in range(max_iters):
        r = y - A @ beta
        new_signs = r > 0
        if signs is not None and np.array_equal(new_signs, signs):
            return beta
        signs = new_signs
        sw = np.sqrt(np.where(new_signs, tau, 1.0 - tau))
        beta, *_ = np.linalg.lstsq(A * sw[:, None], y * sw, rcond=None)
    warnings.warn("expectile IRLS did not stabilize; returning last iterate", stacklevel=2)
    return beta


def expectile_forecaster(prep: PrepView, tau: float = 0.5, lag_days: int = 20,
                         seed: int = 0, block_length: int = 30) -> ForecastSet:
    exog = ("temperature", "month")
    X, y = _pooled_design(prep, lag_days, exog)
    beta = fit_expectile(X, y, tau)
    temps18 = bootstrap_temperature(prep.cohort.weather.y2017, block_length, seed).temp_avg
    return _rollout(prep, beta[1:], float(beta[0]), lag_days, exog, temps18, "dr_expectile")

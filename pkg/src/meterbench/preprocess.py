"""Imputation, transformation, and exogenous-simulation steps.

Every fill operation is idempotent and never alters a present value;
drop_dead_windows only removes. Operations take and return immutable
series objects or plain arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import calendar as cal
from .core.types import DailySeries, MeterSeries, MonthlySeries, WeatherYear


@dataclass(frozen=True)
class BoxCoxParam:
    lam: float
    shift: float = 0.0

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be >= 0")


@dataclass(frozen=True)
class CompletionConfig:
    max_rank: int = 12
    shrinkage: float = 0.0
    max_iters: int = 500
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.max_rank < 1:
            raise ValueError("max_rank must be >= 1")
        if self.shrinkage < 0:
            raise ValueError("shrinkage must be >= 0")


def drop_dead_windows(series: MeterSeries, window_days: int = 3) -> MeterSeries:
    """Turn every run of >= window_days all-zero-or-missing days into missing."""
    if window_days < 1:
        raise ValueError("window_days must be >= 1")
    v = series.values.reshape(cal.DAYS_PER_YEAR, cal.SLOTS_PER_DAY).copy()
    dead = np.all(np.isnan(v) | (v == 0.0), axis=1)
    out = v
    run_start = None
    for d in range(cal.DAYS_PER_YEAR + 1):
        if d < cal.DAYS_PER_YEAR and dead[d]:
            if run_start is None:
                run_start = d
        elif run_start is not None:
            if d - run_start >= window_days:
                out[run_start:d] = np.nan
            run_start = None
    return MeterSeries(series.meter_id, out.reshape(-1))


def _nearest_day_pass(v: np.ndarray) -> bool:
    """One same-slot copy pass over a (days, 48) view; returns True if it filled anything."""
    missing = np.isnan(v)
    if not missing.any():
        return False
    fill = np.full_like(v, np.nan)
    for offset in (-1, 1, -2, 2):
        src = np.full_like(v, np.nan)
        if offset < 0:
            src[-offset:] = v[:offset]
        else:
            src[:-offset] = v[offset:]
        take = missing & np.isnan(fill) & ~np.isnan(src)
        fill[take] = src[take]
    found = missing & ~np.isnan(fill)
    if not found.any():
        return False
    v[found] = fill[found]
    return True


def _short_gap_interpolation(flat: np.ndarray, max_run: int = 2) -> bool:
    isna = np.isnan(flat)
    if not isna.any():
        return False
    edges = np.flatnonzero(np.diff(np.concatenate(([False], isna, [False])).astype(int)))
    starts, ends = edges[::2], edges[1::2]
    changed = False
    for a, b in zip(starts, ends):
        if b - a > max_run or a == 0 or b == len(flat):
            continue
        left, right = flat[a - 1], flat[b]
        if np.isnan(left) or np.isnan(right):
            continue
        steps = b - a + 1
        for k in range(a, b):
            flat[k] = left + (right - left) * (k - a + 1) / steps
        changed = True
    return changed


def fill_nearest_day(series: MeterSeries) -> MeterSeries:
    """Fill missing slots from the same time of day on days d-1, d+1, d-2, d+2
    (first present wins), then linearly interpolate remaining gaps of <= 2
    slots. Repeated until stable, so the operation is idempotent."""
    flat = series.values.copy()
    v = flat.reshape(cal.DAYS_PER_YEAR, cal.SLOTS_PER_DAY)
    while True:
        copied = _nearest_day_pass(v)
        interpolated = _short_gap_interpolation(flat)
        if not (copied or interpolated):
            break
    return MeterSeries(series.meter_id, flat)


def fill_seasonal_median(daily: DailySeries, year: int = cal.BASE_YEAR) -> DailySeries:
    """Fill each missing day with the meter's median for that day of week."""
    v = daily.values.copy()
    weekdays = cal.weekdays_of_year(year)
    for w in range(7):
        sel = weekdays == w
        present = sel & ~np.isnan(v)
        if not present.any():
            continue
        v[sel & np.isnan(v)] = np.median(v[present])
    return DailySeries(daily.meter_id, v)


def interpolate_daily(daily: DailySeries) -> DailySeries:
    """Linearly interpolate interior gaps; leading/trailing gaps stay missing."""
    v = daily.values.copy()
    present = np.flatnonzero(~np.isnan(v))
    if present.size < 2:
        return DailySeries(daily.meter_id, v)
    interior = np.arange(present[0], present[-1] + 1)
    gaps = interior[np.isnan(v[interior])]
    v[gaps] = np.interp(gaps, present, v[present])
    return DailySeries(daily.meter_id, v)


def boxcox(values, param: BoxCoxParam):
    x = np.asarray(values, dtype=np.float64) + param.shift
    if np.any(x <= 0):
        raise ValueError("box-cox input must be positive after shift")
    if abs(param.lam) < 1e-12:
        return np.log(x)
    return (np.power(x, param.lam) - 1.0) / param.lam


def inv_boxcox(values, param: BoxCoxParam):
    y = np.asarray(values, dtype=np.float64)
    if abs(param.lam) < 1e-12:
        return np.exp(y) - param.shift
    return np.power(param.lam * y + 1.0, 1.0 / param.lam) - param.shift


def fit_boxcox(values, shift: float = 0.0) -> BoxCoxParam:
    """Maximum-likelihood lambda over the grid [-1, 2] in steps of 0.01."""
    x = np.asarray(values, dtype=np.float64) + shift
    if np.any(x <= 0):
        raise ValueError("box-cox input must be positive after shift")
    log_x = np.log(x)
    best_lam, best_llf = 0.0, -np.inf
    for lam in np.round(np.arange(-1.0, 2.0 + 1e-9, 0.01), 2):
        y = np.log(x) if abs(lam) < 1e-12 else (np.power(x, lam) - 1.0) / lam
        var = y.var()
        if var <= 0:
            continue
        llf = -0.5 * x.size * np.log(var) + (lam - 1.0) * log_x.sum()
        if llf > best_llf:
            best_lam, best_llf = float(lam), llf
    return BoxCoxParam(best_lam, shift)


def complete_monthly_matrix(matrix, config: Optional[CompletionConfig] = None,
                            return_objective: bool = False):
    """Soft-impute completion of a meters-by-12 matrix.

    Iterates Z <- SVD-shrink(observed entries + current fill) until the
    relative change drops below tolerance. Observed entries pass through
    to the output unchanged.
    """
    config = config or CompletionConfig()
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("matrix must be 2-D")
    if config.max_rank > min(X.shape):
        raise ValueError("max_rank exceeds matrix rank bound")
    observed = ~np.isnan(X)
    if (~observed).all(axis=1).any():
        raise ValueError("matrix has empty rows")
    objective = []
    if observed.all():
        if return_objective:
            return X.copy(), np.array([_si_objective(X, X, observed, config.shrinkage)])
        return X.copy()

    X0 = np.where(observed, X, 0.0)
    Z = np.zeros_like(X)
    for _ in range(config.max_iters):
        W = np.where(observed, X0, Z)
        U, s, Vt = np.linalg.svd(W, full_matrices=False)
        s = np.maximum(s - config.shrinkage, 0.0)
        s[config.max_rank:] = 0.0
        Z_new = (U * s) @ Vt
        objective.append(_si_objective(X0, Z_new, observed, config.shrinkage))
        denom = max(np.linalg.norm(Z), 1.0)
        delta = np.linalg.norm(Z_new - Z) / denom
        Z = Z_new
        if delta < config.tolerance:
            break
    filled = np.where(observed, X, Z)
    if return_objective:
        return filled, np.array(objective)
    return filled


def _si_objective(X0, Z, observed, shrinkage):
    resid = np.where(observed, X0 - Z, 0.0)
    nuclear = np.linalg.svd(Z, compute_uv=False).sum()
    return 0.5 * float((resid * resid).sum()) + shrinkage * float(nuclear)


def normalize_fraction(monthly: MonthlySeries) -> np.ndarray:
    """Monthly totals as fractions of the yearly total; requires a full year."""
    v = monthly.values
    if np.isnan(v).any():
        raise ValueError(f"meter {monthly.meter_id}: cannot normalize with missing months")
    total = v.sum()
    if total <= 0:
        raise ValueError(f"meter {monthly.meter_id}: zero yearly total")
    return v / total


def bootstrap_temperature(weather_2017: WeatherYear, block_length: int = 30,
                          seed: int = 0) -> WeatherYear:
    """Simulated 2018 daily temperatures from contiguous 2017 blocks."""
    if not 2 <= block_length <= cal.DAYS_PER_YEAR:
        raise ValueError("block_length must be in [2, 365]")
    rng = np.random.default_rng(seed)
    n_blocks = -(-cal.DAYS_PER_YEAR // block_length)
    starts = rng.integers(0, cal.DAYS_PER_YEAR - block_length + 1, size=n_blocks)
    idx = np.concatenate([
        np.arange(s, s + block_length) for s in starts
    ])[: cal.DAYS_PER_YEAR]
    return WeatherYear(
        cal.TARGET_YEAR,
        weather_2017.temp_avg[idx],
        weather_2017.temp_min[idx],
        weather_2017.temp_max[idx],
    )


def cf_fill_temperature(matrix, rank: int = 2, iters: int = 100, seed: int = 0,
                        ridge: float = 1e-8):
    """Fill missing temperature entries by rank-r alternating least squares."""
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("matrix must be 2-D")
    if rank > min(X.shape):
        raise ValueError("rank exceeds matrix dimensions")
    observed = ~np.isnan(X)
    if observed.all():
        return X.copy()
    rng = np.random.default_rng(seed)
    n, m = X.shape
    U = rng.normal(0.0, 1.0, (n, rank))
    V = rng.normal(0.0, 1.0, (m, rank))
    eye = ridge * np.eye(rank)
    for _ in range(iters):
        for i in range(n):
            cols = observed[i]
            if cols.any():
                Vi = V[cols]
                U[i] = np.linalg.solve(Vi.T @ Vi + eye, Vi.T @ X[i, cols])
        for j in range(m):
            rows = observed[:, j]
            if rows.any():
                Uj = U[rows]
                V[j] = np.linalg.solve(Uj.T @ Uj + eye, Uj.T @ X[rows, j])
    approx = U @ V.T
    return np.where(observed, X, approx)


def monthly_matrix(monthlies: dict) -> Tuple[list, np.ndarray]:
    """Stack {meter_id: MonthlySeries} into (ids, meters-by-12 array)."""
    ids = sorted(monthlies)
    return ids, np.vstack([monthlies[m].values for m in ids])

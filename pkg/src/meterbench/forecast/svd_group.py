"""Availability-group SVD pipeline.

Average-daily-per-month values are Box-Cox transformed, interior gaps are
soft-imputed, and a robust right-singular basis is learned from the
fully observed group. Each meter's trailing observed months determine OLS
coefficients on the leading components; a recency-weighted residual term is
added before the inverse transform.
"""

from __future__ import annotations

import numpy as np

from ..core import calendar as cal
from ..core.aggregate import availability_group
from ..preprocess import (
    BoxCoxParam,
    CompletionConfig,
    boxcox,
    complete_monthly_matrix,
    fit_boxcox,
    inv_boxcox,
)
from . import ForecastSet, PrepView

_VALUE_FLOOR = 1e-9


def _robust_right_basis(M: np.ndarray, rounds: int = 3, recon_rank: int = 3) -> np.ndarray:
    """Right singular vectors after iteratively winsorizing residuals
    against a low-rank reconstruction (3-MAD clip)."""
    W = M.copy()
    for _ in range(rounds):
        U, s, Vt = np.linalg.svd(W, full_matrices=False)
        r = min(recon_rank, len(s))
        recon = (U[:, :r] * s[:r]) @ Vt[:r]
        resid = W - recon
        med = np.median(resid)
        mad = np.median(np.abs(resid - med))
        if mad > 0:
            resid = np.clip(resid, med - 3.0 * mad, med + 3.0 * mad)
        W = recon + resid
    _, _, Vt = np.linalg.svd(W, full_matrices=False)
    return Vt.T  # (12, 12) components ordered by singular value


def svd_group_forecaster(prep: PrepView, rho: float = 0.6, delta: float = 0.8,
                         completion: CompletionConfig = None) -> ForecastSet:
    ids = list(prep.monthly)
    days = cal.MONTH_LENGTHS.astype(float)
    X = np.vstack([prep.monthly[m].values for m in ids]) / days[None, :]

    groups = np.array([availability_group(prep.monthly[m]) for m in ids])
    if not (groups == 0).any():
        raise ValueError("group G0 is empty; no fully observed meters")

    param = fit_boxcox(X[~np.isnan(X)].clip(min=_VALUE_FLOOR))
    T = np.full_like(X, np.nan)
    obs = ~np.isnan(X)
    T[obs] = boxcox(X[obs].clip(min=_VALUE_FLOOR), param)

    completion = completion or CompletionConfig(max_rank=4, shrinkage=0.1, max_iters=300)
    T_filled = complete_monthly_matrix(T, completion)

    basis = _robust_right_basis(T_filled[groups == 0])  # (12, k) columns

    lam = param.lam
    predictions = {}
    for row, (mid, g) in enumerate(zip(ids, groups)):
        window = np.arange(g, 12)
        k = min(12 - g, basis.shape[1])
        A = basis[window, :k]
        t_obs = T_filled[row, window]
        try:
            coef, *_ = np.linalg.lstsq(A, t_obs, rcond=None)
        except np.linalg.LinAlgError:
            coef = np.linalg.solve(A.T @ A + 1e-10 * np.eye(k), A.T @ t_obs)
        prelim = basis[:, :k] @ coef

        resid = t_obs - prelim[window]
        n = resid.size
        weights = rho ** (n - 1 - np.arange(n))  # most recent month weighs 1
        residual_term = delta * float(weights @ resid)

        t_hat = prelim + residual_term
        if lam > 1e-12:
            t_hat = np.maximum(t_hat, (_VALUE_FLOOR - 1.0) / lam)
        elif lam < -1e-12:
            t_hat = np.minimum(t_hat, (_VALUE_FLOOR - 1.0) / lam)
        avg_daily = inv_boxcox(t_hat, param)
        predictions[mid] = np.maximum(avg_daily * days, 0.0)
    return ForecastSet("ad_svd_group", predictions)

"""Lasso coordinate descent.

Minimizes (1/2n)·||y - Xw - b||^2 + lam·||w||_1 with an unpenalized
intercept b. Cyclic coordinate updates with soft thresholding; stops when
the largest coefficient move in a sweep falls below tol.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _fit_numpy(X, y, lam, tol, max_iters):
    n, p = X.shape
    col_sq = (X * X).sum(axis=0) / n
    w = np.zeros(p)
    b = y.mean()
    r = y - b  # residual y - b - Xw, maintained incrementally
    for it in range(max_iters):
        delta = 0.0
        for j in range(p):
            if col_sq[j] == 0.0:
                continue
            old = w[j]
            rho = X[:, j] @ r / n + col_sq[j] * old
            w[j] = np.sign(rho) * max(abs(rho) - lam, 0.0) / col_sq[j]
            if w[j] != old:
                r -= X[:, j] * (w[j] - old)
                delta = max(delta, abs(w[j] - old))
        db = r.mean()
        b += db
        r -= db
        delta = max(delta, abs(db))
        if delta < tol:
            return w, b, it + 1
    return w, b, max_iters


@njit(cache=True)
def _fit_loop(X, y, lam, tol, max_iters):
    n, p = X.shape
    col_sq = np.zeros(p)
    for j in range(p):
        s = 0.0
        for i in range(n):
            s += X[i, j] * X[i, j]
        col_sq[j] = s / n
    w = np.zeros(p)
    b = 0.0
    for i in range(n):
        b += y[i]
    b /= n
    r = y - b
    for it in range(max_iters):
        delta = 0.0
        for j in range(p):
            if col_sq[j] == 0.0:
                continue
            old = w[j]
            dot = 0.0
            for i in range(n):
                dot += X[i, j] * r[i]
            rho = dot / n + col_sq[j] * old
            mag = abs(rho) - lam
            if mag < 0.0:
                mag = 0.0
            wj = mag / col_sq[j]
            if rho < 0.0:
                wj = -wj
            w[j] = wj
            if wj != old:
                step = wj - old
                for i in range(n):
                    r[i] -= X[i, j] * step
                if abs(step) > delta:
                    delta = abs(step)
        db = 0.0
        for i in range(n):
            db += r[i]
        db /= n
        b += db
        for i in range(n):
            r[i] -= db
        if abs(db) > delta:
            delta = abs(db)
        if delta < tol:
            return w, b, it + 1
    return w, b, max_iters


def lasso_cd(X, y, lam, tol=1e-10, max_iters=100000, backend=None):
    """Fit lasso coefficients; returns (weights, intercept, sweeps_used)."""
    from . import BACKEND

    if lam < 0:
        raise ValueError("lam must be >= 0")
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be (n,p) and y (n,)")
    use = backend or BACKEND
    if use == "numba" and HAVE_NUMBA:
        w, b, iters = _fit_loop(X, y, lam, tol, max_iters)
    else:
        w, b, iters = _fit_numpy(X, y, lam, tol, max_iters)
    return w, float(b), int(iters)


def lasso_objective(X, y, w, b, lam):
    r = y - X @ w - b
    return float(0.5 * (r @ r) / len(y) + lam * np.abs(w).sum())

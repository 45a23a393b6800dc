import itertools

import numpy as np
import pytest

from meterbench.kernels import IsolationForest, isolation_forest, lasso_cd, lasso_objective
from meterbench.kernels.lasso import HAVE_NUMBA


def brute_force_lasso(X, y, lam, sweeps=20000):
    """Naive per-coordinate reference, no vectorization tricks."""
    n, p = X.shape
    w = np.zeros(p)
    b = y.mean()
    for _ in range(sweeps):
        b = float(np.mean(y - X @ w))
        for j in range(p):
            r_j = y - b - X @ w + X[:, j] * w[j]
            rho = X[:, j] @ r_j / n
            z = (X[:, j] @ X[:, j]) / n
            w[j] = np.sign(rho) * max(abs(rho) - lam, 0.0) / z if z > 0 else 0.0
    return w, b


def test_lasso_matches_brute_force_three_features():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(80, 3))
    y = 2.0 * X[:, 0] - 1.5 * X[:, 2] + rng.normal(scale=0.1, size=80)
    w_ref, b_ref = brute_force_lasso(X, y, lam=0.1, sweeps=5000)
    w, b, _ = lasso_cd(X, y, lam=0.1, tol=1e-14)
    np.testing.assert_allclose(w, w_ref, atol=1e-6)
    assert abs(b - b_ref) < 1e-6


def test_lasso_zero_penalty_is_least_squares():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(60, 4))
    y = X @ np.array([1.0, -2.0, 0.5, 3.0]) + 0.7
    w, b, _ = lasso_cd(X, y, lam=0.0, tol=1e-14)
    Xc = np.column_stack([np.ones(60), X])
    beta = np.linalg.lstsq(Xc, y, rcond=None)[0]
    np.testing.assert_allclose(w, beta[1:], atol=1e-8)
    assert abs(b - beta[0]) < 1e-8


def test_lasso_shrinks_to_zero_for_large_penalty():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(50, 5))
    y = X[:, 0] + rng.normal(size=50)
    w, b, _ = lasso_cd(X, y, lam=1e6)
    assert (w == 0).all()
    assert b == pytest.approx(y.mean())


def test_lasso_objective_never_increased_by_solution():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(40, 6))
    y = rng.normal(size=40)
    w, b, _ = lasso_cd(X, y, lam=0.2)
    best = lasso_objective(X, y, w, b, 0.2)
    for _ in range(200):
        w_alt = w + rng.normal(scale=0.05, size=6)
        assert lasso_objective(X, y, w_alt, b, 0.2) >= best - 1e-12


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_lasso_backends_agree():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(100, 8))
    y = rng.normal(size=100)
    w_np, b_np, _ = lasso_cd(X, y, lam=0.05, backend="numpy")
    w_nb, b_nb, _ = lasso_cd(X, y, lam=0.05, backend="numba")
    np.testing.assert_allclose(w_np, w_nb, atol=1e-9)
    assert abs(b_np - b_nb) < 1e-9


def test_lasso_input_validation():
    with pytest.raises(ValueError):
        lasso_cd(np.zeros((4, 2)), np.zeros(3), lam=0.1)
    with pytest.raises(ValueError):
        lasso_cd(np.zeros((4, 2)), np.zeros(4), lam=-1.0)


def test_planted_outlier_ranks_first():
    rng = np.random.default_rng(0)
    for seed in range(20):
        X = np.random.default_rng(seed).normal(0, 1, size=(256, 4))
        X[17] = 12.0  # far outside the cloud
        scores = isolation_forest(X, n_trees=100, subsample=128, seed=seed)
        assert int(np.argmax(scores)) == 17


def test_iforest_scores_in_unit_interval():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(300, 3))
    scores = isolation_forest(X, seed=1)
    assert ((scores > 0) & (scores <= 1)).all()


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_iforest_backends_agree():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(200, 4))
    forest = IsolationForest(n_trees=50, subsample=64, seed=2).fit(X)
    np.testing.assert_allclose(forest.score(X, backend="numpy"),
                               forest.score(X, backend="numba"), atol=1e-12)


def test_iforest_deterministic():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(100, 2))
    a = isolation_forest(X, seed=9)
    b = isolation_forest(X, seed=9)
    np.testing.assert_array_equal(a, b)

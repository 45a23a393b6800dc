"""K-means with elbow selection and fuzzy c-means."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClusterModel:
    method: str  # "kmeans" | "fcm"
    k: int
    centroids: np.ndarray            # (k, d)
    memberships: np.ndarray          # fcm: (n, k) weights; kmeans: (n,) labels
    fuzzifier: float = 0.0

    def __post_init__(self):
        if self.method not in ("kmeans", "fcm"):
            raise ValueError(f"unknown method {self.method}")
        if not np.isfinite(self.centroids).all():
            raise ValueError("centroids must be finite")
        if self.method == "fcm":
            sums = self.memberships.sum(axis=1)
            if not np.allclose(sums, 1.0, atol=1e-9):
                raise ValueError("fcm memberships must sum to 1 per point")

    def assign(self, points) -> np.ndarray:
        d = _sq_distances(np.asarray(points, dtype=np.float64), self.centroids)
        return d.argmin(axis=1)


def _sq_distances(X, C):
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def _kmeans_once(X, k, rng, max_iters=300):
    n = X.shape[0]
    # k-means++ seeding
    centroids = np.empty((k, X.shape[1]))
    centroids[0] = X[rng.integers(n)]
    closest = ((X - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = closest.sum()
        if total <= 0:
            centroids[j:] = centroids[0]
            break
        probs = closest / total
        centroids[j] = X[rng.choice(n, p=probs)]
        closest = np.minimum(closest, ((X - centroids[j]) ** 2).sum(axis=1))
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(max_iters):
        d = _sq_distances(X, centroids)
        new_labels = d.argmin(axis=1)
        for j in range(k):
            members = new_labels == j
            if members.any():
                centroids[j] = X[members].mean(axis=0)
            else:
                # re-seed an empty cluster at the point farthest from its centroid
                far = d.min(axis=1).argmax()
                centroids[j] = X[far]
                new_labels[far] = j
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    inertia = float(((X - centroids[labels]) ** 2).sum())
    return centroids, labels, inertia


def fit_kmeans_elbow(points, k_max: int = 8, seed: int = 0,
                     elbow_threshold: float = 0.15) -> ClusterModel:
    """K-means at the smallest k whose marginal inertia gain falls below the
    elbow threshold; all-identical points collapse to a single centroid."""
    X = np.asarray(points, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("points must be a non-empty 2-D array")
    k_max = min(k_max, X.shape[0])
    rng = np.random.default_rng(seed)
    fits = {}
    prev_inertia = None
    chosen = k_max
    for k in range(1, k_max + 1):
        fits[k] = _kmeans_once(X, k, rng)
        inertia = fits[k][2]
        if k == 1 and inertia == 0.0:
            chosen = 1
            break
        if prev_inertia is not None:
            drop = (prev_inertia - inertia) / max(prev_inertia, 1e-300)
            if drop < elbow_threshold:
                chosen = k
                break
        prev_inertia = inertia
    centroids, labels, _ = fits[chosen]
    return ClusterModel("kmeans", chosen, centroids, labels)


def fit_fcm(points, k: int, m: float = 2.0, tol: float = 1e-6, seed: int = 0,
            max_iters: int = 300) -> ClusterModel:
    """Fuzzy c-means: alternate membership/centroid updates until the largest
    centroid shift drops below tol."""
    X = np.asarray(points, dtype=np.float64)
    n = X.shape[0]
    if k > n:
        raise ValueError("k exceeds number of points")
    if m <= 1:
        raise ValueError("fuzzifier m must be > 1")
    rng = np.random.default_rng(seed)
    U = rng.random((n, k))
    U /= U.sum(axis=1, keepdims=True)
    centroids = np.zeros((k, X.shape[1]))
    for _ in range(max_iters):
        W = U ** m
        centroids_new = (W.T @ X) / np.maximum(W.sum(axis=0)[:, None], 1e-300)
        d = np.sqrt(_sq_distances(X, centroids_new))
        zero = d < 1e-12
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (d[:, :, None] / d[:, None, :]) ** (2.0 / (m - 1.0))
            U = 1.0 / ratio.sum(axis=2)
        hit = zero.any(axis=1)
        if hit.any():
            U[hit] = 0.0
            U[hit, d[hit].argmin(axis=1)] = 1.0
        shift = np.abs(centroids_new - centroids).max()
        centroids = centroids_new
        if shift < tol:
            break
    return ClusterModel("fcm", k, centroids, U, fuzzifier=m)

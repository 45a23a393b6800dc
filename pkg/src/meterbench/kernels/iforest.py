"""Isolation forest anomaly scores.

Trees are grown once from pregenerated random streams (subsample indices,
feature picks, split fractions), stored as flat arrays, and traversed by
either the numba or the numpy scorer. Both scorers accumulate path lengths
tree by tree in the same order, so scores match across backends.

Score of a point: 2^(-E[h]/c(subsample)) where h is the path length plus the
usual c(leaf_size) adjustment, c(n) = 2·(ln(n-1)+γ) - 2(n-1)/n, c(2) = 1.
"""

from __future__ import annotations

import math

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

_EULER_GAMMA = 0.5772156649015329


def average_path_length(n: int) -> float:
    if n <= 1:
        return 0.0
    if n == 2:
        return 1.0
    return 2.0 * (math.log(n - 1.0) + _EULER_GAMMA) - 2.0 * (n - 1.0) / n


class IsolationForest:
    """Array-backed isolation forest, deterministic per seed."""

    def __init__(self, n_trees: int = 100, subsample: int = 256, seed: int = 0):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if subsample < 2:
            raise ValueError("subsample must be >= 2")
        self.n_trees = n_trees
        self.subsample = subsample
        self.seed = seed
        self._fitted = False

    def fit(self, X) -> "IsolationForest":
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 2:
            raise ValueError("X must be (n,d) with n >= 2")
        n, d = X.shape
        psi = min(self.subsample, n)
        depth_limit = int(math.ceil(math.log2(psi)))
        rng = np.random.default_rng(self.seed)

        feature, threshold, left, right, leaf_adjust = [], [], [], [], []
        roots = np.zeros(self.n_trees, dtype=np.int64)
        for t in range(self.n_trees):
            idx = rng.choice(n, size=psi, replace=False)
            stream = rng.random(4 * psi)
            roots[t] = len(feature)
            self._grow(X, idx, depth_limit, stream, d,
                       feature, threshold, left, right, leaf_adjust)

        self._feature = np.array(feature, dtype=np.int64)
        self._threshold = np.array(threshold, dtype=np.float64)
        self._left = np.array(left, dtype=np.int64)
        self._right = np.array(right, dtype=np.int64)
        self._leaf_adjust = np.array(leaf_adjust, dtype=np.float64)
        self._roots = roots
        self._depth_limit = depth_limit
        self._c_psi = average_path_length(psi)
        self._fitted = True
        return self

    @staticmethod
    def _grow(X, idx, depth_limit, stream, d, feature, threshold, left, right, leaf_adjust):
        cursor = 0

        def new_node():
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            leaf_adjust.append(0.0)
            return len(feature) - 1

        root = new_node()
        stack = [(root, idx, 0)]
        while stack:
            node, members, depth = stack.pop()
            col = X[members]
            split = None
            if len(members) > 1 and depth < depth_limit:
                q = int(stream[cursor] * d)
                cursor += 1
                lo = col[:, q].min()
                hi = col[:, q].max()
                if lo < hi:
                    t = lo + stream[cursor] * (hi - lo)
                    cursor += 1
                    split = (q, t)
            if split is None:
                leaf_adjust[node] = average_path_length(len(members))
                continue
            q, t = split
            feature[node] = q
            threshold[node] = t
            go_left = col[:, q] <= t
            ln, rn = new_node(), new_node()
            left[node], right[node] = ln, rn
            stack.append((rn, members[~go_left], depth + 1))
            stack.append((ln, members[go_left], depth + 1))

    def score(self, X, backend=None):
        """Anomaly score in (0, 1] per row; higher = more isolated."""
        from . import BACKEND

        if not self._fitted:
            raise RuntimeError("fit() first")
        X = np.ascontiguousarray(X, dtype=np.float64)
        use = backend or BACKEND
        if use == "numba" and HAVE_NUMBA:
            totals = _paths_loop(X, self._feature, self._threshold,
                                 self._left, self._right, self._leaf_adjust, self._roots)
        else:
            totals = self._paths_numpy(X)
        mean_path = totals / self.n_trees
        return np.power(2.0, -mean_path / self._c_psi)

    def _paths_numpy(self, X):
        totals = np.zeros(X.shape[0])
        for root in self._roots:
            cur = np.full(X.shape[0], root, dtype=np.int64)
            depth = np.zeros(X.shape[0])
            for _ in range(self._depth_limit):
                feat = self._feature[cur]
                active = feat >= 0
                if not active.any():
                    break
                ai = np.flatnonzero(active)
                an = cur[ai]
                goes_left = X[ai, feat[ai]] <= self._threshold[an]
                cur[ai] = np.where(goes_left, self._left[an], self._right[an])
                depth[ai] += 1.0
            totals += depth + self._leaf_adjust[cur]
        return totals


@njit(cache=True)
def _paths_loop(X, feature, threshold, left, right, leaf_adjust, roots):
    n = X.shape[0]
    totals = np.zeros(n)
    for t in range(roots.shape[0]):
        for i in range(n):
            node = roots[t]
            depth = 0.0
            while feature[node] >= 0:
                if X[i, feature[node]] <= threshold[node]:
                    node = left[node]
                else:
                    node = right[node]
                depth += 1.0
            totals[i] += depth + leaf_adjust[node]
    return totals


def isolation_forest(points, n_trees: int = 100, subsample: int = 256, seed: int = 0):
    """Fit on ``points`` and score the same points."""
    forest = IsolationForest(n_trees=n_trees, subsample=subsample, seed=seed)
    return forest.fit(points).score(points)

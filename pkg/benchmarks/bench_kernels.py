"""Time the compiled and pure-numpy kernel backends on matched workloads.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
The numba backend is skipped (with a note) when numba is unavailable.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from meterbench.kernels import IsolationForest, lasso_cd
from meterbench.kernels.lasso import HAVE_NUMBA


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lasso(repeat: int):
    rng = np.random.default_rng(0)
    X = rng.normal(size=(2000, 60))
    beta = np.zeros(60)
    beta[:8] = rng.normal(size=8) * 3
    y = X @ beta + rng.normal(scale=0.5, size=2000)

    out = {}
    for backend in ("numpy", "numba"):
        if backend == "numba" and not HAVE_NUMBA:
            continue
        lasso_cd(X, y, lam=0.05, backend=backend)  # warm-up / JIT
        out[backend] = _time(lambda: lasso_cd(X, y, lam=0.05, backend=backend), repeat)
    w_ref, b_ref, _ = lasso_cd(X, y, lam=0.05, backend="numpy")
    if HAVE_NUMBA:
        w_nb, b_nb, _ = lasso_cd(X, y, lam=0.05, backend="numba")
        gap = max(float(np.abs(w_ref - w_nb).max()), abs(b_ref - b_nb))
        assert gap < 1e-8, f"backend mismatch: {gap}"
    return "lasso_cd 2000x60", out


def bench_iforest(repeat: int):
    rng = np.random.default_rng(1)
    X = rng.normal(size=(4000, 8))
    forest = IsolationForest(n_trees=100, subsample=256, seed=3).fit(X)

    out = {}
    for backend in ("numpy", "numba"):
        if backend == "numba" and not HAVE_NUMBA:
            continue
        forest.score(X, backend=backend)
        out[backend] = _time(lambda: forest.score(X, backend=backend), repeat)
    if HAVE_NUMBA:
        gap = float(np.abs(forest.score(X, backend="numpy")
                           - forest.score(X, backend="numba")).max())
        assert gap < 1e-12, f"backend mismatch: {gap}"
    return "iforest score 4000x8", out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not HAVE_NUMBA:
        print("numba not installed; timing the numpy backend only")
    print(f"{'workload':22s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for bench in (bench_lasso, bench_iforest):
        name, times = bench(args.repeat)
        np_t = times["numpy"]
        if "numba" in times:
            nb_t = times["numba"]
            print(f"{name:22s} {np_t * 1e3:9.2f}ms {nb_t * 1e3:9.2f}ms {np_t / nb_t:7.2f}x")
        else:
            print(f"{name:22s} {np_t * 1e3:9.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()

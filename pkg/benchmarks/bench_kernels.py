"""Benchmark the numba-jitted hot kernels against their numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py [--pooled 4000] [--perms 200] [--dims 100]

The permutation-MMD kernel dominates experiment runtime (B relabelings of
an NxN Gram matrix); the KS kernel runs once per feature dimension.
"""

import argparse
import time

import numpy as np

from docdrift import _accel


def _time(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_perm_mmd(pooled_rows, n_perms):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((pooled_rows, 16))
    sq = np.maximum(
        (X**2).sum(1)[:, None] + (X**2).sum(1)[None, :] - 2.0 * X @ X.T, 0.0
    )
    K = np.exp(-sq / 2.0)
    n = pooled_rows // 2
    perms = np.vstack(
        [np.arange(pooled_rows)]
        + [rng.permutation(pooled_rows) for _ in range(n_perms)]
    ).astype(np.int64)

    rows = []
    t_np = _time(_accel._perm_mmd_stats_numpy, K, perms, n)
    rows.append(("perm-MMD", "numpy", t_np))
    if _accel.NUMBA_ENABLED:
        _accel._perm_mmd_stats_numba(K, perms[:2], n)  # compile outside the clock
        t_nb = _time(_accel._perm_mmd_stats_numba, K, perms, n)
        rows.append(("perm-MMD", "numba", t_nb))
        a = _accel._perm_mmd_stats_numpy(K, perms, n)
        b = _accel._perm_mmd_stats_numba(K, perms, n)
        assert np.allclose(a, b, atol=1e-12), "paths disagree"
    return rows


def bench_ks(pooled_rows, dims):
    rng = np.random.default_rng(1)
    xs = np.sort(rng.standard_normal((dims, pooled_rows // 2)), axis=1)
    ys = np.sort(rng.standard_normal((dims, pooled_rows // 2)), axis=1)

    def run(fn):
        for j in range(dims):
            fn(xs[j], ys[j])

    rows = [("KS-D x dims", "numpy", _time(run, _accel._ks_d_sorted_numpy))]
    if _accel.NUMBA_ENABLED:
        _accel._ks_d_sorted_numba(xs[0], ys[0])  # compile outside the clock
        rows.append(("KS-D x dims", "numba", _time(run, _accel._ks_d_sorted_numba)))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pooled", type=int, default=4000, help="pooled sample rows (n + m)")
    ap.add_argument("--perms", type=int, default=200)
    ap.add_argument("--dims", type=int, default=100)
    args = ap.parse_args()

    print(f"numba enabled: {_accel.NUMBA_ENABLED} "
          "(set DOCDRIFT_DISABLE_NUMBA=1 to force the numpy path)")
    print(f"pooled rows = {args.pooled}, permutations = {args.perms}, dims = {args.dims}\n")
    rows = bench_perm_mmd(args.pooled, args.perms) + bench_ks(args.pooled, args.dims)
    print(f"{'kernel':<14}{'path':<8}{'best of 3':>12}")
    baselines = {}
    for kernel, path, secs in rows:
        baselines.setdefault(kernel, secs)
        speedup = baselines[kernel] / secs
        print(f"{kernel:<14}{path:<8}{secs:>10.3f}s   x{speedup:.1f} vs numpy")


if __name__ == "__main__":
    main()

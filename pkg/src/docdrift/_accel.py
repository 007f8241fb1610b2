"""Hot numeric kernels: numba-jitted and pure-numpy variants.

Each kernel ships both ways and the faster one is selected per kernel
(see ``benchmarks/bench_kernels.py`` for the numbers): the KS merge walk
is branchy scalar code where the jit wins severalfold, while the
permutation-MMD statistic reduces to dense matrix products where BLAS
beats any loop nest, so its default is the numpy path. Set
``DOCDRIFT_DISABLE_NUMBA=1`` to force pure numpy everywhere. Both variants
of a kernel compute identical quantities (KS bitwise, MMD to float
roundoff).
"""

import os

import numpy as np

_NUMPY_CHUNK = 512  # permutation columns per GEMM in the fallback path

_disabled = os.environ.get("DOCDRIFT_DISABLE_NUMBA", "") not in ("", "0")

try:
    if _disabled:
        raise ImportError("disabled by DOCDRIFT_DISABLE_NUMBA")
    from numba import njit, prange

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False


def _ks_d_sorted_numpy(xs, ys):
    """Two-sample KS statistic from two sorted 1-d arrays."""
    n = xs.size
    m = ys.size
    pooled = np.concatenate([xs, ys])
    cx = np.searchsorted(xs, pooled, side="right") / n
    cy = np.searchsorted(ys, pooled, side="right") / m
    return float(np.abs(cx - cy).max())


def _perm_mmd_stats_numpy(K, perms, n):
    """Unbiased MMD^2 statistics from a pooled Gram matrix under row relabelings.

    ``perms[b]`` is a permutation of ``range(N)``; its first ``n`` entries are
    the rows assigned to the first sample. Uses the indicator identity
    sum_{i,j in X} K_ij = v^T K v with v the 0/1 membership vector, so each
    chunk of permutations costs one GEMM instead of B gather-and-sum passes.
    """
    N = K.shape[0]
    m = N - n
    diag = np.ascontiguousarray(np.diag(K))
    t = K.sum(axis=1)
    s_tot = float(t.sum())
    trace = float(diag.sum())
    B = perms.shape[0]
    out = np.empty(B)
    for lo in range(0, B, _NUMPY_CHUNK):
        hi = min(lo + _NUMPY_CHUNK, B)
        nb = hi - lo
        V = np.zeros((N, nb))
        V[perms[lo:hi, :n].ravel(), np.repeat(np.arange(nb), n)] = 1.0
        U = K @ V
        q = np.einsum("ib,ib->b", V, U)
        vd = diag @ V
        r = t @ V
        sxx = q - vd
        sxy = r - q
        syy = (s_tot - 2.0 * r + q) - (trace - vd)
        out[lo:hi] = sxx / (n * (n - 1)) + syy / (m * (m - 1)) - 2.0 * sxy / (n * m)
    return out


if NUMBA_ENABLED:

    @njit(cache=True)
    def _ks_d_sorted_numba(xs, ys):
        n = xs.size
        m = ys.size
        i = 0
        j = 0
        d = 0.0
        while i < n and j < m:
            v = xs[i] if xs[i] <= ys[j] else ys[j]
            while i < n and xs[i] <= v:
                i += 1
            while j < m and ys[j] <= v:
                j += 1
            diff = abs(i / n - j / m)
            if diff > d:
                d = diff
        return d

    @njit(cache=True, parallel=True)
    def _perm_mmd_stats_numba(K, perms, n):
        # same indicator identity as the numpy path, but one permutation per
        # thread with sequential row scans (SIMD-friendly, no NxB temporary)
        B = perms.shape[0]
        N = perms.shape[1]
        m = N - n
        diag = np.empty(N)
        t = np.empty(N)
        for i in range(N):
            diag[i] = K[i, i]
            acc = 0.0
            for j in range(N):
                acc += K[i, j]
            t[i] = acc
        s_tot = 0.0
        trace = 0.0
        for i in range(N):
            s_tot += t[i]
            trace += diag[i]
        out = np.empty(B)
        for b in prange(B):
            v = np.zeros(N)
            for a in range(n):
                v[perms[b, a]] = 1.0
            q = 0.0
            vd = 0.0
            r = 0.0
            for a in range(n):
                ia = perms[b, a]
                acc = 0.0
                for j in range(N):
                    acc += K[ia, j] * v[j]
                q += acc
                vd += diag[ia]
                r += t[ia]
            sxx = q - vd
            sxy = r - q
            syy = (s_tot - 2.0 * r + q) - (trace - vd)
            out[b] = (
                sxx / (n * (n - 1))
                + syy / (m * (m - 1))
                - 2.0 * sxy / (n * m)
            )
        return out

    ks_d_sorted = _ks_d_sorted_numba
    perm_mmd_stats = _perm_mmd_stats_numpy  # BLAS wins this one; see module docstring
else:
    ks_d_sorted = _ks_d_sorted_numpy
    perm_mmd_stats = _perm_mmd_stats_numpy

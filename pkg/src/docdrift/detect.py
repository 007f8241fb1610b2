"""Two-sample drift detectors.

Multivariate Kolmogorov-Smirnov: the KS statistic per dimension, overall
statistic = max over dimensions, Bonferroni-corrected p = min(1, dims *
min per-dimension p). Maximum mean discrepancy: unbiased MMD^2 estimate
under a Gaussian kernel, with a permutation test on the pooled Gram
matrix for its p-value.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from ._accel import ks_d_sorted, perm_mmd_stats
from .errors import DegenerateDataError, ParameterError
from .linalg import as_matrix, pairwise_sq_dists

DEFAULT_PERMUTATIONS = 200
MEDIAN_HEURISTIC = "median-heuristic"
_MEDIAN_MAX_ROWS = 1000
_SUBSAMPLE_CAP = 2000  # per sample; the guard fires when n + m > 2 * cap
_MIN_P = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class SignificanceConfig:
    alpha: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must be in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "gaussian"
    sigma: object = MEDIAN_HEURISTIC  # positive float or "median-heuristic"

    def __post_init__(self):
        if self.kind != "gaussian":
            raise ParameterError(f"unsupported kernel kind {self.kind!r}")
        if self.sigma != MEDIAN_HEURISTIC:
            if not (isinstance(self.sigma, (int, float)) and self.sigma > 0):
                raise ParameterError(f"sigma must be positive or {MEDIAN_HEURISTIC!r}")


@dataclass
class KsResult:
    per_dim_statistic: np.ndarray
    per_dim_p: np.ndarray
    overall_statistic: float
    adjusted_p: float
    drift_detected: bool
    dims: int

    def as_dict(self):
        d = asdict(self)
        d["per_dim_statistic"] = [float(v) for v in self.per_dim_statistic]
        d["per_dim_p"] = [float(v) for v in self.per_dim_p]
        return d


@dataclass
class MmdResult:
    statistic: float
    p_value: float
    permutations: int
    sigma_used: float
    drift_detected: bool
    n_used: int
    m_used: int

    def as_dict(self):
        return asdict(self)


def _as_sample_1d(a, name):
    a = np.asarray(a, dtype=np.float64).ravel()
    if a.size == 0:
        raise ParameterError(f"{name} sample is empty")
    return a


def ks_asymptotic_p(d_stat, n, m):
    """Two-sided asymptotic KS p-value at effective size n*m/(n+m).

    p = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2) with
    lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D; the series stops once a
    term drops below 1e-12 and the result is clamped into (0, 1].
    """
    if d_stat <= 0.0:
        return 1.0
    ne = n * m / (n + m)
    sqrt_ne = math.sqrt(ne)
    lam = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d_stat
    total = 0.0
    sign = 1.0
    for k in range(1, 100_000):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += sign * term
        if term < 1e-12:
            break
        sign = -sign
    return min(1.0, max(2.0 * total, _MIN_P))


def ks_two_sample_1d(x, y):
    """KS statistic D and asymptotic p-value for two 1-d samples.

    D is the supremum over pooled sample points of the absolute difference
    of the right-continuous empirical CDFs.
    """
    x = _as_sample_1d(x, "x")
    y = _as_sample_1d(y, "y")
    d_stat = float(ks_d_sorted(np.sort(x), np.sort(y)))
    return d_stat, ks_asymptotic_p(d_stat, x.size, y.size)


def ks_multivariate(X, Y, cfg=SignificanceConfig()):
    """Per-dimension KS tests with Bonferroni aggregation."""
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise ParameterError(
            f"column mismatch: X has {X.shape[1]} columns, Y has {Y.shape[1]}"
        )
    if X.shape[0] < 1 or Y.shape[0] < 1:
        raise ParameterError("samples must be non-empty")
    dims = X.shape[1]
    if dims < 1:
        raise ParameterError("need at least one dimension")
    stats = np.empty(dims)
    pvals = np.empty(dims)
    xs = np.sort(X, axis=0)
    ys = np.sort(Y, axis=0)
    for j in range(dims):
        stats[j] = ks_d_sorted(np.ascontiguousarray(xs[:, j]), np.ascontiguousarray(ys[:, j]))
        pvals[j] = ks_asymptotic_p(stats[j], X.shape[0], Y.shape[0])
    adjusted = min(1.0, dims * float(pvals.min()))
    return KsResult(
        per_dim_statistic=stats,
        per_dim_p=pvals,
        overall_statistic=float(stats.max()),
        adjusted_p=adjusted,
        drift_detected=adjusted <= cfg.alpha,
        dims=dims,
    )


def gaussian_kernel_matrix(sqdists, sigma):
    """Elementwise exp(-sqdist / (2 sigma^2))."""
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    sqdists = np.asarray(sqdists, dtype=np.float64)
    if sqdists.size and sqdists.min() < 0:
        raise ParameterError("squared distances must be >= 0")
    return np.exp(sqdists / (-2.0 * sigma * sigma))


def median_heuristic_sigma(pooled, seed=0, max_rows=_MEDIAN_MAX_ROWS):
    """Median pairwise Euclidean distance over (a seeded subsample of) the rows.

    Zero distances are excluded; if every pair coincides the data has no
    scale and a DegenerateDataError is raised.
    """
    pooled = as_matrix(pooled, "pooled")
    if pooled.shape[0] < 2:
        raise ParameterError("need at least 2 rows for the median heuristic")
    if pooled.shape[0] > max_rows:
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(pooled.shape[0], size=max_rows, replace=False))
        pooled = pooled[idx]
    sq = pairwise_sq_dists(pooled, pooled)
    iu = np.triu_indices(pooled.shape[0], k=1)
    dists = np.sqrt(sq[iu])
    dists = dists[dists > 0.0]
    if dists.size == 0:
        raise DegenerateDataError("all rows are identical: no variation to set a bandwidth")
    return float(np.median(dists))


def _resolve_sigma(kernel, pooled, seed):
    if kernel.sigma == MEDIAN_HEURISTIC:
        return median_heuristic_sigma(pooled, seed=seed)
    return float(kernel.sigma)


def _check_two_samples(X, Y):
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise ParameterError(
            f"column mismatch: X has {X.shape[1]} columns, Y has {Y.shape[1]}"
        )
    if X.shape[0] < 2 or Y.shape[0] < 2:
        raise ParameterError("unbiased MMD needs at least 2 rows per sample")
    return X, Y


def mmd_unbiased(X, Y, kernel=KernelSpec()):
    """Unbiased MMD^2 estimate; may be negative; symmetric in X and Y."""
    X, Y = _check_two_samples(X, Y)
    n, m = X.shape[0], Y.shape[0]
    sigma = _resolve_sigma(kernel, np.vstack([X, Y]), seed=0)
    kxx = gaussian_kernel_matrix(pairwise_sq_dists(X, X), sigma)
    kyy = gaussian_kernel_matrix(pairwise_sq_dists(Y, Y), sigma)
    kxy = gaussian_kernel_matrix(pairwise_sq_dists(X, Y), sigma)
    return (
        (kxx.sum() - np.trace(kxx)) / (n * (n - 1))
        + (kyy.sum() - np.trace(kyy)) / (m * (m - 1))
        - 2.0 * kxy.mean()
    )


def mmd_permutation_test(X, Y, kernel=KernelSpec(), permutations=DEFAULT_PERMUTATIONS,
                         seed=0, cfg=SignificanceConfig(), subsample_cap=_SUBSAMPLE_CAP):
    """Permutation test for the unbiased MMD^2 statistic.

    The bandwidth is resolved once on the pooled sample and held fixed; the
    pooled Gram matrix is computed once and every permutation re-reads it
    under shuffled row labels (permutation b uses a generator seeded from
    (seed, b)). p = (1 + #{stat_b >= stat_obs}) / (1 + B). When n + m
    exceeds twice ``subsample_cap`` each sample is first subsampled
    (seeded) to the cap; pass ``subsample_cap=None`` to disable the guard.
    """
    if permutations < 1:
        raise ParameterError(f"permutation count must be >= 1, got {permutations}")
    X, Y = _check_two_samples(X, Y)
    n, m = X.shape[0], Y.shape[0]
    if subsample_cap is not None and n + m > 2 * subsample_cap:
        rng = np.random.default_rng([seed, 0x5AB5])
        if n > subsample_cap:
            X = X[np.sort(rng.choice(n, size=subsample_cap, replace=False))]
        if m > subsample_cap:
            Y = Y[np.sort(rng.choice(m, size=subsample_cap, replace=False))]
        n, m = X.shape[0], Y.shape[0]

    pooled = np.vstack([X, Y])
    sigma = _resolve_sigma(kernel, pooled, seed=[seed, 0x3ED1])
    total = n + m
    K = gaussian_kernel_matrix(pairwise_sq_dists(pooled, pooled), sigma)

    perms = np.empty((permutations + 1, total), dtype=np.int64)
    perms[0] = np.arange(total)
    for b in range(1, permutations + 1):
        perms[b] = np.random.default_rng([seed, b]).permutation(total)
    stats = perm_mmd_stats(K, perms, n)
    stat_obs = float(stats[0])
    p_value = (1 + int((stats[1:] >= stat_obs).sum())) / (1 + permutations)
    return MmdResult(
        statistic=stat_obs,
        p_value=p_value,
        permutations=permutations,
        sigma_used=sigma,
        drift_detected=p_value <= cfg.alpha,
        n_used=n,
        m_used=m,
    )

"""Dimensionality reduction fitted on the reference sample.

PCA operates on column-centered dense matrices; LSA runs truncated SVD on
the raw (uncentered) TF-IDF matrix. Both produce immutable models whose
transforms never look at current-sample statistics.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError
from .linalg import as_matrix, center_columns, svd_truncated

DEFAULT_LSA_COMPONENTS = 100
DEFAULT_PCA_COMPONENTS = 50

_RANK_TOL = 1e-10  # singular values below tol * s_1 are treated as rank deficit


@dataclass
class PcaModel:
    means: np.ndarray  # (d,)
    components: np.ndarray  # (d, k), orthonormal columns (zero where degenerate)
    explained_variance: np.ndarray  # (k,), non-increasing
    k: int
    n_degenerate: int = 0


@dataclass
class LsaModel:
    components: np.ndarray  # (d, k)
    singular_values: np.ndarray  # (k,), non-increasing
    k: int
    n_degenerate: int = 0


def _zero_fill_degenerate(components, values):
    """Zero out trailing components whose singular value is numerically rank-deficient."""
    if values.size == 0 or values[0] <= 0.0:
        n_deg = values.size
    else:
        keep = values >= _RANK_TOL * values[0]
        n_deg = int((~keep).sum())
    if n_deg:
        components = components.copy()
        values = values.copy()
        components[:, components.shape[1] - n_deg :] = 0.0
        values[values.size - n_deg :] = 0.0
    return components, values, n_deg


def fit_pca(X, k, seed=0):
    """PCA via truncated SVD of the column-centered data.

    ``explained_variance[i] = s_i^2 / (n - 1)``. Requires
    ``1 <= k <= min(n - 1, d)`` and at least two rows.
    """
    X = as_matrix(X)
    n, d = X.shape
    if n < 2:
        raise ParameterError("PCA needs at least 2 rows")
    if not 1 <= k <= min(n - 1, d):
        raise ParameterError(f"k={k} out of range [1, {min(n - 1, d)}]")
    centered, means = center_columns(X)
    res = svd_truncated(centered, k, seed=seed)
    components, svals, n_deg = _zero_fill_degenerate(res.V, res.singular_values)
    return PcaModel(
        means=means,
        components=components,
        explained_variance=svals**2 / (n - 1),
        k=k,
        n_degenerate=n_deg,
    )


def transform_pca(X, model):
    """Project rows onto the fitted components: (X - means) @ components."""
    X = as_matrix(X)
    if X.shape[1] != model.means.shape[0]:
        raise ParameterError(
            f"width mismatch: model expects d={model.means.shape[0]}, input has d={X.shape[1]}"
        )
    return (X - model.means) @ model.components


def inverse_transform_pca(T, model):
    """Map reduced coordinates back to the original space."""
    T = as_matrix(T)
    return T @ model.components.T + model.means


def fit_lsa(X, k, seed=0):
    """LSA: truncated SVD of the raw matrix, no centering."""
    if not sp.issparse(X):
        X = as_matrix(X)
    n, d = X.shape
    if not 1 <= k <= min(n, d):
        raise ParameterError(f"k={k} out of range [1, {min(n, d)}]")
    res = svd_truncated(X, k, seed=seed)
    components, svals, n_deg = _zero_fill_degenerate(res.V, res.singular_values)
    return LsaModel(components=components, singular_values=svals, k=k, n_degenerate=n_deg)


def transform_lsa(X, model):
    """Project rows into the latent space: X @ components."""
    d = model.components.shape[0]
    if X.shape[1] != d:
        raise ParameterError(
            f"width mismatch: model expects d={d}, input has d={X.shape[1]}"
        )
    if sp.issparse(X):
        return np.asarray(X @ model.components)
    return as_matrix(X) @ model.components

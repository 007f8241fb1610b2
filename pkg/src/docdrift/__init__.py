"""Covariate drift detection for document-vector data.

Fit a reference pipeline (TF-IDF + LSA, or ingested embeddings with
optional PCA), then compare reference vs current samples with a
Bonferroni-corrected multivariate KS test and a permutation-tested
Gaussian-kernel MMD test; an experiment harness reproduces the
sports-injection drift grid with mean/stddev p-value reports.
"""

from .dataio import (
    CATEGORIES,
    Dataset,
    DriftReport,
    Record,
    ReportRow,
    load_agnews_csv,
    read_embeddings,
    read_report_csv,
    write_embeddings,
    write_report,
)
from .detect import (
    KernelSpec,
    KsResult,
    MmdResult,
    SignificanceConfig,
    gaussian_kernel_matrix,
    ks_multivariate,
    ks_two_sample_1d,
    median_heuristic_sigma,
    mmd_permutation_test,
    mmd_unbiased,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateDataError,
    DocdriftError,
    ParameterError,
)
from .harness import (
    ExperimentSpec,
    SplitSet,
    build_splits,
    load_spec,
    make_drifted_test,
    run_experiment,
)
from .pipeline import (
    FittedPipeline,
    fit_pca_pipeline,
    fit_tfidf_lsa,
    load_pipeline,
    save_pipeline,
)

__version__ = "0.1.0"

__all__ = [
    "CATEGORIES",
    "ConfigError",
    "DataError",
    "Dataset",
    "DegenerateDataError",
    "DocdriftError",
    "DriftReport",
    "ExperimentSpec",
    "FittedPipeline",
    "KernelSpec",
    "KsResult",
    "MmdResult",
    "ParameterError",
    "Record",
    "ReportRow",
    "SignificanceConfig",
    "SplitSet",
    "build_splits",
    "fit_pca_pipeline",
    "fit_tfidf_lsa",
    "gaussian_kernel_matrix",
    "ks_multivariate",
    "ks_two_sample_1d",
    "load_agnews_csv",
    "load_pipeline",
    "load_spec",
    "make_drifted_test",
    "median_heuristic_sigma",
    "mmd_permutation_test",
    "mmd_unbiased",
    "read_embeddings",
    "read_report_csv",
    "run_experiment",
    "save_pipeline",
    "write_embeddings",
    "write_report",
]

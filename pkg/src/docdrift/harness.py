"""Drift-injection experiment harness.

Builds a sports-free training split, constructs test sets with a controlled
fraction of sports documents (sampled with replacement), runs both
detectors per (drift level, repeat) cell, and aggregates p-values into a
DriftReport. Every random draw is seeded through a stated splitmix64 chain
of (master_seed, level index, repeat index), so identical specs produce
byte-identical reports.
"""

import json
from dataclasses import dataclass, fields

import numpy as np

from .dataio import (
    DriftReport,
    ReportRow,
    document_text,
    load_agnews_csv,
    read_embeddings,
)
from .detect import (
    DEFAULT_PERMUTATIONS,
    KernelSpec,
    MEDIAN_HEURISTIC,
    SignificanceConfig,
    ks_multivariate,
    mmd_permutation_test,
)
from .errors import ConfigError, DataError, ParameterError
from .pipeline import fit_pca_pipeline, fit_tfidf_lsa
from .reduction import DEFAULT_LSA_COMPONENTS, DEFAULT_PCA_COMPONENTS
from .vectorize import DEFAULT_MAX_FEATURES

DEFAULT_DRIFT_LEVELS = (0.0, 0.10, 0.25, 0.50, 0.75, 1.0)

_MASK64 = (1 << 64) - 1


def mix64(*parts):
    """Splitmix64 chain over integer parts; the cell-seed derivation."""
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h = (h + (int(p) & _MASK64)) & _MASK64
        h ^= h >> 30
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


@dataclass
class ExperimentSpec:
    dataset: str
    pipeline: str = "tfidf-lsa"  # or "external-embeddings"
    use_pca: bool = False  # external-embeddings only
    label: str = None  # report pipeline id; derived when omitted
    reference_embeddings: str = None
    corpus_embeddings: str = None
    train_size: int = 15_000
    test_size: int = 5_000
    drift_levels: tuple = DEFAULT_DRIFT_LEVELS
    repeats: int = 5
    master_seed: int = 0
    alpha: float = 0.05
    permutations: int = DEFAULT_PERMUTATIONS
    sigma: object = MEDIAN_HEURISTIC
    lsa_components: int = DEFAULT_LSA_COMPONENTS
    pca_components: int = DEFAULT_PCA_COMPONENTS
    max_features: int = DEFAULT_MAX_FEATURES
    mmd_subsample_cap: int = 2_000

    def __post_init__(self):
        self.drift_levels = tuple(float(v) for v in self.drift_levels)
        self.validate()

    def validate(self):
        if not self.dataset:
            raise ConfigError("dataset", "a dataset path is required")
        if self.pipeline not in ("tfidf-lsa", "external-embeddings"):
            raise ConfigError("pipeline", f"unknown pipeline {self.pipeline!r}")
        if self.pipeline == "external-embeddings":
            if not self.reference_embeddings:
                raise ConfigError("embeddings.reference", "required for external-embeddings")
            if not self.corpus_embeddings:
                raise ConfigError("embeddings.corpus", "required for external-embeddings")
        elif self.use_pca:
            raise ConfigError("use_pca", "only applies to the external-embeddings pipeline")
        if self.train_size < 0:
            raise ConfigError("train_size", "must be >= 0")
        if self.test_size < 1:
            raise ConfigError("test_size", "must be >= 1")
        if not self.drift_levels:
            raise ConfigError("drift_levels", "must be non-empty")
        for v in self.drift_levels:
            if not 0.0 <= v <= 1.0:
                raise ConfigError("drift_levels", f"level {v} outside [0, 1]")
        if list(self.drift_levels) != sorted(self.drift_levels):
            raise ConfigError("drift_levels", "must be sorted ascending")
        if self.repeats < 1:
            raise ConfigError("repeats", "must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha", "must be in (0, 1)")
        if self.permutations < 1:
            raise ConfigError("permutations", "must be >= 1")
        if self.sigma != MEDIAN_HEURISTIC and not (
            isinstance(self.sigma, (int, float)) and self.sigma > 0
        ):
            raise ConfigError("sigma", f"must be positive or {MEDIAN_HEURISTIC!r}")
        for name in ("lsa_components", "pca_components", "max_features"):
            if getattr(self, name) < 1:
                raise ConfigError(name, "must be >= 1")
        if self.mmd_subsample_cap is not None and self.mmd_subsample_cap < 2:
            raise ConfigError("mmd_subsample_cap", "must be >= 2 (or null to disable)")

    @property
    def report_label(self):
        if self.label:
            return self.label
        if self.pipeline == "tfidf-lsa":
            return "tfidf-lsa"
        return "external-pca" if self.use_pca else "external"

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        data = dict(raw)
        emb = data.pop("embeddings", None)
        if emb is not None:
            if not isinstance(emb, dict):
                raise ConfigError("embeddings", "must be an object")
            unknown = set(emb) - {"reference", "corpus"}
            if unknown:
                raise ConfigError(f"embeddings.{sorted(unknown)[0]}", "unknown key")
            data["reference_embeddings"] = emb.get("reference")
            data["corpus_embeddings"] = emb.get("corpus")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown key")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError("<root>", str(exc)) from None


def load_spec(path):
    """Read an ExperimentSpec from a JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON: {exc}") from None
    return ExperimentSpec.from_dict(raw)


@dataclass
class SplitSet:
    train_idx: np.ndarray  # sports-free, order of drawing
    pool_nonsports_idx: np.ndarray  # dataset order, disjoint from train
    pool_sports_idx: np.ndarray  # dataset order


def build_splits(dataset, train_size, seed):
    """Sample a sports-free training set; the rest become the test pools."""
    labels = np.array([r.label for r in dataset.records])
    nonsports = np.flatnonzero(labels != "Sports")
    sports = np.flatnonzero(labels == "Sports")
    if nonsports.size < train_size:
        raise DataError(
            f"not enough non-sports records: need {train_size}, have {nonsports.size}"
        )
    rng = np.random.default_rng(seed)
    train = rng.choice(nonsports, size=train_size, replace=False)
    pool_nonsports = np.setdiff1d(nonsports, train)
    return SplitSet(
        train_idx=train,
        pool_nonsports_idx=pool_nonsports,
        pool_sports_idx=sports,
    )


def make_drifted_test(splits, test_size, rho, seed):
    """Indices of a test set with a round-half-up(rho * test_size) sports share.

    Both portions are drawn with replacement from their pools, then the
    combined order is shuffled.
    """
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"drift level must be in [0, 1], got {rho}")
    n_sports = int(np.floor(rho * test_size + 0.5))
    n_other = test_size - n_sports
    if n_sports > 0 and splits.pool_sports_idx.size == 0:
        raise DataError("sports pool is empty but the drift level needs sports docs")
    if n_other > 0 and splits.pool_nonsports_idx.size == 0:
        raise DataError("non-sports pool is empty")
    rng = np.random.default_rng(seed)
    parts = []
    if n_sports:
        parts.append(splits.pool_sports_idx[rng.integers(0, splits.pool_sports_idx.size, size=n_sports)])
    if n_other:
        parts.append(splits.pool_nonsports_idx[rng.integers(0, splits.pool_nonsports_idx.size, size=n_other)])
    combined = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    return combined[rng.permutation(combined.size)]


def write_train_indices(splits, path):
    """Write the train split as one 0-based dataset row index per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in splits.train_idx:
            fh.write(f"{int(i)}\n")


class _FittedExperiment:
    """One fit per (pipeline, train split), reused across all cells."""

    def __init__(self, spec, dataset, splits):
        self.spec = spec
        self.dataset = dataset
        self.splits = splits
        fit_seed = mix64(spec.master_seed, 0xF17)
        if spec.pipeline == "tfidf-lsa":
            train_texts = [document_text(dataset.records[i]) for i in splits.train_idx]
            self.pipeline = fit_tfidf_lsa(
                train_texts,
                n_components=spec.lsa_components,
                seed=fit_seed,
                max_features=spec.max_features,
            )
            self.reference = self.pipeline.transform_docs(train_texts)
            self.corpus_matrix = None
        else:
            reference_raw, _ = read_embeddings(spec.reference_embeddings)
            corpus_raw, _ = read_embeddings(spec.corpus_embeddings)
            if reference_raw.shape[0] != splits.train_idx.size:
                raise DataError(
                    f"reference embeddings have {reference_raw.shape[0]} rows, "
                    f"train split has {splits.train_idx.size}"
                )
            if corpus_raw.shape[0] != len(dataset):
                raise DataError(
                    f"corpus embeddings have {corpus_raw.shape[0]} rows, "
                    f"dataset has {len(dataset)} records"
                )
            if corpus_raw.shape[1] != reference_raw.shape[1]:
                raise DataError(
                    f"width mismatch: reference d={reference_raw.shape[1]}, "
                    f"corpus d={corpus_raw.shape[1]}"
                )
            self.corpus_matrix = corpus_raw
            if spec.use_pca:
                self.pipeline = fit_pca_pipeline(
                    reference_raw, n_components=spec.pca_components, seed=fit_seed
                )
                self.reference = self.pipeline.transform_matrix(reference_raw)
            else:
                self.pipeline = None
                self.reference = reference_raw

    def test_matrix(self, test_idx):
        if self.spec.pipeline == "tfidf-lsa":
            texts = [document_text(self.dataset.records[i]) for i in test_idx]
            return self.pipeline.transform_docs(texts)
        raw = self.corpus_matrix[test_idx]
        if self.pipeline is not None:
            return self.pipeline.transform_matrix(raw)
        return raw


def run_experiment(spec, progress=None):
    """Run the full grid; returns a DriftReport with 2 x len(levels) rows.

    A failing cell is recorded in ``report.errors`` with its (level, repeat)
    coordinates and the run continues; its report rows then aggregate fewer
    repeats (``n_repeats`` below ``spec.repeats`` marks an incomplete row).
    """
    dataset = load_agnews_csv(spec.dataset)
    splits = build_splits(dataset, spec.train_size, seed=spec.master_seed)
    fitted = _FittedExperiment(spec, dataset, splits)
    cfg = SignificanceConfig(alpha=spec.alpha)
    kernel = KernelSpec(sigma=spec.sigma)

    cells = {}  # (detector, level index) -> list of (p, statistic)
    errors = []
    for li, rho in enumerate(spec.drift_levels):
        for rep in range(spec.repeats):
            sample_seed = mix64(spec.master_seed, li, rep, 0)
            mmd_seed = mix64(spec.master_seed, li, rep, 1)
            try:
                test_idx = make_drifted_test(splits, spec.test_size, rho, seed=sample_seed)
                current = fitted.test_matrix(test_idx)
                ks = ks_multivariate(fitted.reference, current, cfg)
                mmd = mmd_permutation_test(
                    fitted.reference,
                    current,
                    kernel,
                    permutations=spec.permutations,
                    seed=mmd_seed,
                    cfg=cfg,
                    subsample_cap=spec.mmd_subsample_cap,
                )
            except Exception as exc:  # keep the grid running; report the cell
                errors.append((rho, rep, f"{type(exc).__name__}: {exc}"))
                continue
            cells.setdefault(("ks", li), []).append((ks.adjusted_p, ks.overall_statistic))
            cells.setdefault(("mmd", li), []).append((mmd.p_value, mmd.statistic))
            if progress is not None:
                progress(rho, rep, ks.adjusted_p, mmd.p_value)

    rows = []
    for detector in ("ks", "mmd"):
        for li, rho in enumerate(spec.drift_levels):
            entries = cells.get((detector, li), [])
            ps = np.array([p for p, _ in entries])
            stats = np.array([s for _, s in entries])
            if ps.size:
                mean_p = float(ps.mean())
                std_p = float(ps.std())  # population std, divisor n
                mean_stat = float(stats.mean())
                significant = mean_p <= spec.alpha
            else:
                mean_p = float("nan")
                std_p = float("nan")
                mean_stat = float("nan")
                significant = False
            rows.append(
                ReportRow(
                    pipeline=spec.report_label,
                    detector=detector,
                    drift_level=rho,
                    mean_p=mean_p,
                    std_p=std_p,
                    n_repeats=int(ps.size),
                    significant=significant,
                    p_values=[float(p) for p in ps],
                    mean_statistic=mean_stat,
                )
            )
    return DriftReport(rows=rows, alpha=spec.alpha, errors=errors)

"""Shared fixtures: a deterministic synthetic corpus in AG-News CSV format.

Four categories draw from disjoint topical vocabularies plus a shared
pool, with head-heavy (Zipf) token frequencies so held-out documents have
a realistically small out-of-vocabulary rate (~1%). That keeps the
level-0 behavior of a train-fitted TF-IDF/LSA pipeline comparable to real
news text; flatter frequency profiles make the in-sample/out-of-sample
asymmetry of the fitted transform wildly stronger than anything real.

The real AG-News train CSV is used instead wherever a test reads the
DOCDRIFT_AGNEWS_CSV environment variable.
"""

import csv
import os

import numpy as np
import pytest

CATEGORIES = ("World", "Sports", "Business", "SciTech")

_N_TOPICAL = 800  # per-category vocabulary size
_N_SHARED = 3000
_ZIPF_TOPICAL = 1.5
_ZIPF_SHARED = 1.9
_TOPICAL_SHARE = 0.45  # expected fraction of topical tokens per document

_CLASS_INDEX = {c: i + 1 for i, c in enumerate(CATEGORIES)}


def _zipf_weights(n, exponent):
    w = 1.0 / np.arange(1, n + 1) ** exponent
    return w / w.sum()


def make_agnews_csv(path, per_category, seed=0):
    """Write a synthetic 3-column AG-News style CSV; rows are shuffled."""
    rng = np.random.default_rng(seed)
    topical = {
        c: np.array([f"{c.lower()}{i:04d}" for i in range(_N_TOPICAL)])
        for c in per_category
    }
    shared = np.array([f"common{i:04d}" for i in range(_N_SHARED)])
    w_topical = _zipf_weights(_N_TOPICAL, _ZIPF_TOPICAL)
    w_shared = _zipf_weights(_N_SHARED, _ZIPF_SHARED)
    rows = []
    for category, count in per_category.items():
        pool = topical[category]
        for _ in range(count):
            length = int(rng.integers(25, 46))
            n_topical = int(rng.binomial(length, _TOPICAL_SHARE))
            tokens = np.concatenate([
                rng.choice(pool, size=n_topical, p=w_topical),
                rng.choice(shared, size=length - n_topical, p=w_shared),
            ])
            rng.shuffle(tokens)
            rows.append(
                [_CLASS_INDEX[category], " ".join(tokens[:6]), " ".join(tokens[6:])]
            )
    order = rng.permutation(len(rows))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for i in order:
            writer.writerow(rows[i])
    return path


@pytest.fixture(scope="session")
def small_agnews_csv(tmp_path_factory):
    """~600 docs, enough for functional harness tests."""
    path = tmp_path_factory.mktemp("data") / "agnews_small.csv"
    return make_agnews_csv(
        path, {"World": 150, "Sports": 150, "Business": 150, "SciTech": 150}, seed=11
    )


@pytest.fixture(scope="session")
def desk_agnews_csv(tmp_path_factory):
    """Desk-scale corpus: the real AG-News train CSV when available, else a
    synthetic stand-in sized for train_size=3000 / test_size=1000 (pools
    must dwarf the test draws the way the real dataset's do)."""
    real = os.environ.get("DOCDRIFT_AGNEWS_CSV")
    if real:
        return real
    path = tmp_path_factory.mktemp("data") / "agnews_desk.csv"
    return make_agnews_csv(
        path,
        {"World": 4000, "Sports": 4000, "Business": 4000, "SciTech": 4000},
        seed=29,
    )

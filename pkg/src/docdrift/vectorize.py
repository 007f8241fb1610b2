"""TF-IDF document vectorization, fitted on the reference corpus only.

Tokens are lowercased maximal runs of Unicode letters/digits. The idf
weight is the smoothed variant ln((1 + n_docs) / (1 + df)) + 1, and every
nonzero row of the output is L2-normalized.
"""

import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError

DEFAULT_MAX_FEATURES = 20_000

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)  # \w minus underscore


def tokenize(text):
    """Lowercased runs of letters/digits, in order of appearance."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Vocabulary:
    term_to_index: dict[str, int]
    document_frequency: np.ndarray  # (|vocab|,) int64, per-term doc counts
    n_docs_fitted: int
    idf: np.ndarray = field(default=None)  # (|vocab|,) float64

    def __post_init__(self):
        if self.idf is None:
            self.idf = np.log(
                (1.0 + self.n_docs_fitted) / (1.0 + self.document_frequency)
            ) + 1.0

    def __len__(self):
        return len(self.term_to_index)

    @property
    def terms(self):
        """Terms in column-index order."""
        out = [None] * len(self.term_to_index)
        for t, i in self.term_to_index.items():
            out[i] = t
        return out


def fit_vocabulary(corpus, max_features=DEFAULT_MAX_FEATURES):
    """Build a Vocabulary from the most document-frequent terms.

    Keeps the ``max_features`` terms with highest document frequency (ties
    broken lexicographically ascending); column indices follow
    lexicographic order of the retained terms.
    """
    if not corpus:
        raise ParameterError("fit corpus is empty")
    if max_features < 1:
        raise ParameterError(f"max_features must be >= 1, got {max_features}")
    df = Counter()
    for text in corpus:
        df.update(set(tokenize(text)))
    retained = sorted(df, key=lambda t: (-df[t], t))[:max_features]
    retained.sort()
    term_to_index = {t: i for i, t in enumerate(retained)}
    counts = np.array([df[t] for t in retained], dtype=np.int64)
    return Vocabulary(
        term_to_index=term_to_index,
        document_frequency=counts,
        n_docs_fitted=len(corpus),
    )


def transform_tfidf(docs, vocab):
    """TF-IDF matrix (CSR, rows L2-normalized) for ``docs`` under ``vocab``.

    Term weights come only from the fitted vocabulary; unseen terms are
    ignored, so a document of only unseen terms yields an all-zero row.
    """
    indptr = [0]
    indices = []
    data = []
    t2i = vocab.term_to_index
    idf = vocab.idf
    for text in docs:
        counts = Counter()
        for tok in tokenize(text):
            i = t2i.get(tok)
            if i is not None:
                counts[i] += 1
        cols = sorted(counts)
        vals = [counts[c] * idf[c] for c in cols]
        norm = math.sqrt(sum(v * v for v in vals))
        if norm > 0.0:
            vals = [v / norm for v in vals]
        indices.extend(cols)
        data.extend(vals)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(indptr) - 1, len(vocab)),
    )

"""Fitted pipelines (vectorizer + reducer) and their on-disk model format.

A .dlpm model file is little-endian throughout:

    magic "DLPM" | u32 version=1 | u32 kind | u64 d | u64 k

followed by float64 payloads per kind: 1 = PCA (means, components,
explained variance), 2 = LSA (components, singular values), 3 = TF-IDF+LSA
(vocabulary block: u64 n_docs_fitted, d length-prefixed UTF-8 terms in
column order, d u64 document frequencies, d f8 idf weights; then the LSA
payload). Component matrices are stored row-major with shape (d, k).
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParameterError
from .reduction import (
    DEFAULT_LSA_COMPONENTS,
    DEFAULT_PCA_COMPONENTS,
    LsaModel,
    PcaModel,
    fit_lsa,
    fit_pca,
    transform_lsa,
    transform_pca,
)
from .vectorize import DEFAULT_MAX_FEATURES, Vocabulary, fit_vocabulary, transform_tfidf

MAGIC = b"DLPM"
VERSION = 1
_KIND_CODES = {"pca": 1, "lsa": 2, "tfidf-lsa": 3}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}


@dataclass
class FittedPipeline:
    """Immutable fitted state mapping raw docs or raw vectors to detector input."""

    kind: str  # "tfidf-lsa" | "pca" | "lsa"
    vocabulary: Vocabulary = None
    pca: PcaModel = None
    lsa: LsaModel = None

    @property
    def input_width(self):
        if self.kind == "tfidf-lsa":
            return len(self.vocabulary)
        if self.kind == "pca":
            return self.pca.means.shape[0]
        return self.lsa.components.shape[0]

    @property
    def n_components(self):
        return self.pca.k if self.kind == "pca" else self.lsa.k

    def transform_docs(self, texts):
        if self.kind != "tfidf-lsa":
            raise ParameterError(f"pipeline kind {self.kind!r} does not accept raw text")
        tfidf = transform_tfidf(texts, self.vocabulary)
        return transform_lsa(tfidf, self.lsa)

    def transform_matrix(self, X):
        if self.kind == "tfidf-lsa":
            raise ParameterError("tfidf-lsa pipeline expects raw text, not a matrix")
        if self.kind == "pca":
            return transform_pca(X, self.pca)
        return transform_lsa(X, self.lsa)


def fit_tfidf_lsa(texts, n_components=DEFAULT_LSA_COMPONENTS, seed=0,
                  max_features=DEFAULT_MAX_FEATURES):
    vocab = fit_vocabulary(texts, max_features=max_features)
    tfidf = transform_tfidf(texts, vocab)
    lsa = fit_lsa(tfidf, min(n_components, min(tfidf.shape)), seed=seed)
    return FittedPipeline(kind="tfidf-lsa", vocabulary=vocab, lsa=lsa)


def fit_pca_pipeline(X, n_components=DEFAULT_PCA_COMPONENTS, seed=0):
    X = np.asarray(X, dtype=np.float64)
    k = min(n_components, X.shape[0] - 1, X.shape[1])
    return FittedPipeline(kind="pca", pca=fit_pca(X, k, seed=seed))


def _f8(a):
    return np.ascontiguousarray(a, dtype="<f8").tobytes()


def save_pipeline(pipeline, path):
    kind = _KIND_CODES.get(pipeline.kind)
    if kind is None:
        raise ParameterError(f"unknown pipeline kind {pipeline.kind!r}")
    d = pipeline.input_width
    k = pipeline.n_components
    parts = [struct.pack("<4sIIQQ", MAGIC, VERSION, kind, d, k)]
    if kind == 1:
        m = pipeline.pca
        parts += [_f8(m.means), _f8(m.components), _f8(m.explained_variance)]
    else:
        if kind == 3:
            v = pipeline.vocabulary
            parts.append(struct.pack("<Q", v.n_docs_fitted))
            for term in v.terms:
                raw = term.encode("utf-8")
                if len(raw) > 0xFFFF:
                    raise DataError(f"term too long to serialize: {term[:40]!r}...")
                parts.append(struct.pack("<H", len(raw)) + raw)
            parts.append(np.ascontiguousarray(v.document_frequency, dtype="<u8").tobytes())
            parts.append(_f8(v.idf))
        m = pipeline.lsa
        parts += [_f8(m.components), _f8(m.singular_values)]
    with open(path, "wb") as fh:
        fh.write(b"".join(parts))


class _Reader:
    def __init__(self, blob, path):
        self.blob = blob
        self.path = path
        self.pos = 0

    def take(self, nbytes, what):
        end = self.pos + nbytes
        if end > len(self.blob):
            raise DataError(
                f"{self.path}: truncated while reading {what}: "
                f"need {nbytes} bytes at offset {self.pos}, file has {len(self.blob)}"
            )
        out = self.blob[self.pos : end]
        self.pos = end
        return out

    def floats(self, count, what):
        return np.frombuffer(self.take(8 * count, what), dtype="<f8").copy()


def load_pipeline(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    r = _Reader(blob, str(path))
    magic, version, kind, d, k = struct.unpack("<4sIIQQ", r.take(28, "header"))
    if magic != MAGIC:
        raise DataError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise DataError(f"{path}: unsupported version {version}")
    if kind not in _KIND_NAMES:
        raise DataError(f"{path}: unknown model kind {kind}")
    if kind == 1:
        means = r.floats(d, "means")
        components = r.floats(d * k, "components").reshape(d, k)
        ev = r.floats(k, "explained_variance")
        n_deg = int((ev == 0.0).sum())
        model = PcaModel(means=means, components=components, explained_variance=ev,
                         k=k, n_degenerate=n_deg)
        return FittedPipeline(kind="pca", pca=model)

    vocab = None
    if kind == 3:
        (n_docs,) = struct.unpack("<Q", r.take(8, "n_docs_fitted"))
        terms = []
        for i in range(d):
            (tlen,) = struct.unpack("<H", r.take(2, f"term {i} length"))
            terms.append(r.take(tlen, f"term {i}").decode("utf-8"))
        df = np.frombuffer(r.take(8 * d, "document_frequency"), dtype="<u8").astype(np.int64)
        idf = r.floats(d, "idf")
        vocab = Vocabulary(
            term_to_index={t: i for i, t in enumerate(terms)},
            document_frequency=df,
            n_docs_fitted=n_docs,
            idf=idf,
        )
    components = r.floats(d * k, "components").reshape(d, k)
    svals = r.floats(k, "singular_values")
    lsa = LsaModel(components=components, singular_values=svals, k=k,
                   n_degenerate=int((svals == 0.0).sum()))
    if kind == 3:
        return FittedPipeline(kind="tfidf-lsa", vocabulary=vocab, lsa=lsa)
    return FittedPipeline(kind="lsa", lsa=lsa)

"""Distributed-memory paragraph vectors (PV-DM) with negative sampling.

A compact numpy implementation: the document vector and the mean of the
context word vectors jointly predict each center word against sampled
negatives. Training touches only the documents passed to ``fit`` (the
reference split); ``infer`` trains a fresh document vector against frozen
word matrices. All randomness is seeded and single-threaded, so equal
seeds give identical vectors.
"""

import re
from collections import Counter

import numpy as np

DOC2VEC_HYPERPARAMETERS = {
    "dims": 300,
    "window": 5,
    "min_count": 2,
    "epochs": 20,
    "negative": 5,
    "alpha": 0.025,
    "min_alpha": 1e-4,
}

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_NEG_TABLE_SIZE = 1 << 17


def _tokenize(text):
    return _TOKEN_RE.findall(text.lower())


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -30.0, 30.0)))


class Doc2VecModel:
    def __init__(self, dims=300, window=5, min_count=2, epochs=20, negative=5,
                 alpha=0.025, min_alpha=1e-4, seed=0):
        self.dims = dims
        self.window = window
        self.min_count = min_count
        self.epochs = epochs
        self.negative = negative
        self.alpha = alpha
        self.min_alpha = min_alpha
        self.seed = seed
        self.vocab = {}
        self.word_in = np.zeros((0, dims))
        self.word_out = np.zeros((0, dims))
        self.doc_vectors = None
        self._neg_table = np.zeros(1, dtype=np.int64)

    @property
    def hyperparameters(self):
        return {
            "dims": self.dims, "window": self.window, "min_count": self.min_count,
            "epochs": self.epochs, "negative": self.negative,
            "alpha": self.alpha, "min_alpha": self.min_alpha,
        }

    def _doc_ids(self, text):
        return [self.vocab[w] for w in _tokenize(text) if w in self.vocab]

    def _build_neg_table(self, counts):
        freq = np.array([counts[w] for w in sorted(self.vocab, key=self.vocab.get)],
                        dtype=np.float64) ** 0.75
        cum = np.cumsum(freq / freq.sum())
        self._neg_table = np.searchsorted(
            cum, (np.arange(_NEG_TABLE_SIZE) + 0.5) / _NEG_TABLE_SIZE
        ).astype(np.int64)

    def _step(self, doc_row, ids, pos, lr, rng, update_words):
        lo = max(0, pos - self.window)
        ctx = ids[lo:pos] + ids[pos + 1 : pos + 1 + self.window]
        target = ids[pos]
        h = doc_row.copy()
        if ctx:
            h += self.word_in[ctx].sum(axis=0)
            h /= 1 + len(ctx)
        negs = self._neg_table[rng.integers(0, _NEG_TABLE_SIZE, size=self.negative)]
        keep = negs != target  # a negative equal to the center word is skipped
        tidx = np.concatenate(([target], negs[keep]))
        labels = np.zeros(tidx.size)
        labels[0] = 1.0
        out_rows = self.word_out[tidx]
        gains = (labels - _sigmoid(out_rows @ h)) * lr
        h_err = gains @ out_rows
        doc_row += h_err
        if update_words:
            np.add.at(self.word_out, tidx, np.outer(gains, h))
            if ctx:
                np.add.at(self.word_in, ctx, h_err)

    def fit(self, texts):
        """Train document and word vectors on ``texts`` only."""
        rng = np.random.default_rng([self.seed, 0xD0C])
        tokenized = [_tokenize(t) for t in texts]
        counts = Counter(tok for doc in tokenized for tok in doc)
        kept = sorted(w for w, c in counts.items() if c >= self.min_count)
        self.vocab = {w: i for i, w in enumerate(kept)}
        n_words = len(self.vocab)
        self.doc_vectors = (rng.random((len(texts), self.dims)) - 0.5) / self.dims
        self.word_in = (rng.random((n_words, self.dims)) - 0.5) / self.dims
        self.word_out = np.zeros((n_words, self.dims))
        if n_words == 0:
            return self
        self._build_neg_table(counts)
        doc_ids = [[self.vocab[w] for w in doc if w in self.vocab] for doc in tokenized]
        total = self.epochs * sum(len(ids) for ids in doc_ids)
        step = 0
        for _ in range(self.epochs):
            for di, ids in enumerate(doc_ids):
                row = self.doc_vectors[di]
                for pos in range(len(ids)):
                    lr = max(self.min_alpha, self.alpha * (1.0 - step / total))
                    step += 1
                    self._step(row, ids, pos, lr, rng, update_words=True)
        return self

    def infer(self, text, key=0):
        """Vector for an unseen document; both word matrices stay frozen.

        ``key`` individualizes the seeded initialization (e.g. the row
        index), keeping batch export deterministic and order-independent.
        """
        rng = np.random.default_rng([self.seed, 0x1FE, key])
        vec = (rng.random(self.dims) - 0.5) / self.dims
        ids = self._doc_ids(text)
        if not ids or len(self.vocab) == 0:
            return vec
        total = self.epochs * len(ids)
        step = 0
        for _ in range(self.epochs):
            for pos in range(len(ids)):
                lr = max(self.min_alpha, self.alpha * (1.0 - step / total))
                step += 1
                self._step(vec, ids, pos, lr, rng, update_words=False)
        return vec

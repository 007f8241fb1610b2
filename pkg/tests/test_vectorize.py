import math

import numpy as np
import pytest

from docdrift.errors import ParameterError
from docdrift.vectorize import fit_vocabulary, tokenize, transform_tfidf


class TestTokenize:
    def test_punctuation_split(self):
        assert tokenize("Wall St. Bears") == ["wall", "st", "bears"]

    def test_empty(self):
        assert tokenize("") == []

    def test_apostrophes_hyphens_digits(self):
        assert tokenize("AG's 3rd-qtr") == ["ag", "s", "3rd", "qtr"]

    def test_underscore_is_a_separator(self):
        assert tokenize("a_b") == ["a", "b"]


class TestFitVocabulary:
    def test_idf_formula(self):
        vocab = fit_vocabulary(["a b", "b c"], max_features=10)
        i = vocab.term_to_index
        assert set(i) == {"a", "b", "c"}
        np.testing.assert_allclose(vocab.idf[i["b"]], 1.0)
        expected = math.log(3 / 2) + 1  # 1.405465...
        np.testing.assert_allclose(vocab.idf[i["a"]], expected)
        np.testing.assert_allclose(vocab.idf[i["c"]], expected)
        assert vocab.document_frequency[i["a"]] == 1
        assert vocab.document_frequency[i["b"]] == 2

    def test_single_doc(self):
        vocab = fit_vocabulary(["x"], max_features=10)
        assert set(vocab.term_to_index) == {"x"}
        np.testing.assert_allclose(vocab.idf[0], 1.0)

    def test_max_features_by_document_frequency(self):
        vocab = fit_vocabulary(["a b", "b c", "c d"], max_features=2)
        assert set(vocab.term_to_index) == {"b", "c"}

    def test_tie_break_lexicographic(self):
        # all terms have df=1; the lexicographically smallest two survive
        vocab = fit_vocabulary(["zeta alpha beta"], max_features=2)
        assert set(vocab.term_to_index) == {"alpha", "beta"}

    def test_indices_contiguous(self):
        vocab = fit_vocabulary(["d c b a", "a b"], max_features=10)
        assert sorted(vocab.term_to_index.values()) == list(range(len(vocab)))

    def test_empty_corpus_rejected(self):
        with pytest.raises(ParameterError):
            fit_vocabulary([], max_features=10)


class TestTransformTfidf:
    def test_hand_computed_row(self):
        vocab = fit_vocabulary(["a b", "b c"], max_features=10)
        X = transform_tfidf(["a b"], vocab).toarray()
        pre = np.array([math.log(3 / 2) + 1, 1.0, 0.0])
        np.testing.assert_allclose(X[0], pre / np.linalg.norm(pre))
        np.testing.assert_allclose(X[0][:2], [0.8148, 0.5797], atol=5e-5)

    def test_all_unseen_terms_zero_row(self):
        vocab = fit_vocabulary(["a b", "b c"], max_features=10)
        X = transform_tfidf(["z z z"], vocab)
        assert X[0].nnz == 0

    def test_single_term_direction(self):
        vocab = fit_vocabulary(["a b", "b c"], max_features=10)
        X = transform_tfidf(["b b"], vocab).toarray()
        np.testing.assert_allclose(X[0], [0.0, 1.0, 0.0])

    def test_nonzero_rows_unit_norm(self):
        rng = np.random.default_rng(0)
        words = [f"w{i}" for i in range(30)]
        corpus = [
            " ".join(rng.choice(words, size=rng.integers(3, 12)))
            for _ in range(40)
        ]
        vocab = fit_vocabulary(corpus, max_features=25)
        X = transform_tfidf(corpus, vocab)
        norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
        nonzero = norms > 0
        np.testing.assert_allclose(norms[nonzero], 1.0, atol=1e-9)

    def test_transform_independent_of_batch(self):
        # the same doc vectorizes identically regardless of what else is
        # in the batch: weights come only from the fitted vocabulary
        vocab = fit_vocabulary(["a b c", "c d", "a a d"], max_features=10)
        alone = transform_tfidf(["a c d"], vocab).toarray()
        batched = transform_tfidf(["b b", "a c d", "d"], vocab).toarray()
        np.testing.assert_array_equal(alone[0], batched[1])

    def test_fit_corpus_has_no_zero_rows(self):
        corpus = ["a b", "b c", "c a"]
        vocab = fit_vocabulary(corpus, max_features=10)
        X = transform_tfidf(corpus, vocab)
        assert (X.getnnz(axis=1) > 0).all()

import numpy as np
import pytest

from docdrift_export.bert import encode_bert
from docdrift_export.errors import ExportError


def test_shapes(tiny_bert_dir):
    texts = [f"the match coach {i}" for i in range(10)]
    vecs = encode_bert(texts, model_path=tiny_bert_dir, batch_size=4)
    assert vecs.shape == (10, 768)
    assert vecs.dtype == np.float32
    assert np.isfinite(vecs).all()


def test_duplicate_documents_identical_rows(tiny_bert_dir):
    vecs = encode_bert(
        ["market shares profit", "the new report", "market shares profit"],
        model_path=tiny_bert_dir,
    )
    np.testing.assert_array_equal(vecs[0], vecs[2])
    assert not np.array_equal(vecs[0], vecs[1])


def test_empty_document_pools_special_tokens(tiny_bert_dir):
    vecs = encode_bert(["", "chip software"], model_path=tiny_bert_dir)
    assert np.isfinite(vecs[0]).all()
    assert np.abs(vecs[0]).max() > 0


def test_long_document_truncated(tiny_bert_dir):
    long_doc = "match " * 2000
    vecs = encode_bert([long_doc], model_path=tiny_bert_dir)
    assert vecs.shape == (1, 768)
    assert np.isfinite(vecs).all()


def test_batching_does_not_change_vectors(tiny_bert_dir):
    texts = [f"summit border treaty {i % 3}" for i in range(7)]
    a = encode_bert(texts, model_path=tiny_bert_dir, batch_size=7)
    b = encode_bert(texts, model_path=tiny_bert_dir, batch_size=2)
    np.testing.assert_allclose(a, b, atol=1e-5)


def test_missing_model_path_errors():
    with pytest.raises(ExportError, match="cannot load model"):
        encode_bert(["text"], model_path="/nonexistent/checkpoint")

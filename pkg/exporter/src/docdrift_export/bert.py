"""BERT document vectors: mean pooling of the last hidden layer.

Loads a local (or cached) HuggingFace checkpoint; inputs are truncated at
256 tokens and pooled over non-padding positions, so the special tokens
participate and an empty document still yields a finite vector.
"""

import numpy as np

from .errors import ExportError

DEFAULT_MODEL_PATH = "bert-base-uncased"
MAX_TOKENS = 256


def encode_bert(texts, model_path=DEFAULT_MODEL_PATH, batch_size=32):
    try:
        import torch
        from transformers import AutoModel, AutoTokenizer
    except ImportError as exc:
        raise ExportError(f"BERT export needs torch+transformers installed: {exc}") from exc
    try:
        tokenizer = AutoTokenizer.from_pretrained(model_path)
        model = AutoModel.from_pretrained(model_path)
    except Exception as exc:
        raise ExportError(f"cannot load model from {model_path!r}: {exc}") from exc
    model.eval()
    chunks = []
    with torch.no_grad():
        for lo in range(0, len(texts), batch_size):
            batch = list(texts[lo : lo + batch_size])
            enc = tokenizer(
                batch,
                padding=True,
                truncation=True,
                max_length=MAX_TOKENS,
                return_tensors="pt",
            )
            hidden = model(**enc).last_hidden_state  # (B, T, H)
            mask = enc["attention_mask"].unsqueeze(-1).to(hidden.dtype)
            pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
            chunks.append(pooled.cpu().numpy().astype(np.float32))
    vectors = np.vstack(chunks)
    if not np.isfinite(vectors).all():
        raise ExportError("model produced non-finite embeddings")
    return vectors

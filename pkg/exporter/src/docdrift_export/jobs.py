"""Export orchestration: corpus in, two .dlem files + manifests out.

The reference file holds one row per train-split document (trained
vectors for Doc2Vec, encoded vectors for BERT); the current file holds
one row per corpus record, row-aligned with the input CSV, so drifted
test sets can be gathered by dataset index downstream.
"""

import json
import sys
from dataclasses import dataclass

import numpy as np

from .bert import DEFAULT_MODEL_PATH, encode_bert
from .corpus import load_corpus, load_train_indices
from .dlem import write_dlem
from .doc2vec import DOC2VEC_HYPERPARAMETERS, Doc2VecModel
from .errors import ExportError

MODEL_DIMS = {"doc2vec": 300, "bert": 768}


@dataclass
class ExportJob:
    input_csv: str
    model: str  # "doc2vec" | "bert"
    out_reference: str
    out_current: str
    seed: int = 0
    train_indices: str = None  # None: the reference split is the full file
    model_path: str = DEFAULT_MODEL_PATH  # bert only
    batch_size: int = 32  # bert only

    def __post_init__(self):
        if self.model not in MODEL_DIMS:
            raise ExportError(f"unknown model {self.model!r}, expected doc2vec or bert")


def _write_manifest(path, job, hyperparameters, rows, trained_on):
    manifest = {
        "model": job.model,
        "hyperparameters": hyperparameters,
        "dims": MODEL_DIMS[job.model],
        "rows": int(rows),
        "trained_on": int(trained_on),
        "source_csv": str(job.input_csv),
        "seed": int(job.seed),
    }
    with open(f"{path}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def run_export(job, log=None):
    """Run one export job; returns (reference_path, current_path)."""
    if log is None:
        log = lambda msg: print(msg, file=sys.stderr)
    texts, labels = load_corpus(job.input_csv)
    labels = np.asarray(labels, dtype=np.uint8)
    if job.train_indices:
        ref_idx = load_train_indices(job.train_indices, len(texts))
    else:
        ref_idx = list(range(len(texts)))
    ref_texts = [texts[i] for i in ref_idx]

    if job.model == "doc2vec":
        model = Doc2VecModel(seed=job.seed, **DOC2VEC_HYPERPARAMETERS)
        hyper = model.hyperparameters
        log(f"doc2vec: training corpus = {len(ref_texts)} documents "
            f"(reference split of {len(texts)})")
        model.fit(ref_texts)
        log(f"doc2vec: vocabulary = {len(model.vocab)} terms")
        reference = np.asarray(model.doc_vectors, dtype=np.float32)
        log(f"doc2vec: inferring {len(texts)} corpus vectors")
        current = np.vstack(
            [model.infer(t, key=i).astype(np.float32) for i, t in enumerate(texts)]
        )
    else:
        hyper = {"model_path": job.model_path, "pooling": "mean-last-layer",
                 "max_tokens": 256, "batch_size": job.batch_size}
        log(f"bert: encoding {len(texts)} corpus documents from {job.model_path}")
        current = encode_bert(texts, model_path=job.model_path, batch_size=job.batch_size)
        reference = current[ref_idx]

    if reference.shape[1] != MODEL_DIMS[job.model]:
        raise ExportError(
            f"{job.model} produced width {reference.shape[1]}, "
            f"expected {MODEL_DIMS[job.model]}"
        )
    write_dlem(job.out_reference, reference, labels[ref_idx])
    _write_manifest(job.out_reference, job, hyper, reference.shape[0], len(ref_texts))
    write_dlem(job.out_current, current, labels)
    _write_manifest(job.out_current, job, hyper, current.shape[0], len(ref_texts))
    log(f"wrote {job.out_reference} ({reference.shape[0]}x{reference.shape[1]}) "
        f"and {job.out_current} ({current.shape[0]}x{current.shape[1]})")
    return job.out_reference, job.out_current

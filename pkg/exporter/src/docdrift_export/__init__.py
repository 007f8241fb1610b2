"""Doc2Vec and BERT document-vector exporter.

Reads an AG-News style CSV and an optional train-indices file, computes
document vectors, and writes them as .dlem embedding files (plus a JSON
manifest per output) for consumption by docdrift's external-embeddings
pipeline.
"""

from .dlem import read_dlem, write_dlem
from .doc2vec import DOC2VEC_HYPERPARAMETERS, Doc2VecModel
from .errors import ExportError
from .jobs import ExportJob, run_export

__version__ = "0.1.0"

__all__ = [
    "DOC2VEC_HYPERPARAMETERS",
    "Doc2VecModel",
    "ExportError",
    "ExportJob",
    "read_dlem",
    "run_export",
    "write_dlem",
]

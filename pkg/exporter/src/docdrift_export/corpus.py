"""AG-News style CSV loading and train-indices files."""

import csv

from .errors import ExportError

_HEADER_CELLS = {"class index", "title", "description"}


def load_corpus(path):
    """Read a 3-column CSV (class index 1-4, title, description).

    Returns (texts, labels) where each text is "title description" and
    labels are 0-based category indices.
    """
    texts = []
    labels = []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot read corpus {path}: {exc}") from exc
    with fh:
        for rownum, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if rownum == 1 and {c.strip().lower() for c in row} == _HEADER_CELLS:
                continue
            if len(row) != 3:
                raise ExportError(f"{path}: row {rownum}: expected 3 columns, got {len(row)}")
            try:
                class_index = int(row[0].strip())
            except ValueError:
                raise ExportError(f"{path}: row {rownum}: bad class index {row[0]!r}") from None
            if not 1 <= class_index <= 4:
                raise ExportError(f"{path}: row {rownum}: class index {class_index} outside 1-4")
            texts.append(f"{row[1]} {row[2]}")
            labels.append(class_index - 1)
    if not texts:
        raise ExportError(f"{path}: no records")
    return texts, labels


def load_train_indices(path, corpus_size):
    """Read one 0-based row index per line; order is preserved."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise ExportError(f"cannot read train indices {path}: {exc}") from exc
    indices = []
    for lineno, ln in enumerate(lines, start=1):
        try:
            i = int(ln)
        except ValueError:
            raise ExportError(f"{path}: line {lineno}: not an integer: {ln!r}") from None
        if not 0 <= i < corpus_size:
            raise ExportError(
                f"{path}: line {lineno}: index {i} outside corpus of {corpus_size} rows"
            )
        indices.append(i)
    if not indices:
        raise ExportError(f"{path}: no indices")
    return indices

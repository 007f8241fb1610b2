"""Writer (and a self-check reader) for the .dlem embedding file layout.

Little-endian: magic "DLEM" | u32 version=1 | u64 rows | u64 cols |
u8 label_flag | [rows x u8 labels] | rows*cols float32 row-major.
Files are written atomically (temp file + rename).
"""

import os
import struct

import numpy as np

from .errors import ExportError

MAGIC = b"DLEM"
VERSION = 1
_HEADER = "<4sIQQB"


def write_dlem(path, matrix, labels=None):
    matrix = np.asarray(matrix, dtype=np.float32)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise ExportError(f"embedding matrix must be non-empty 2-d, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        raise ExportError("embedding matrix contains non-finite entries")
    rows, cols = matrix.shape
    if labels is not None:
        labels = np.asarray(labels, dtype=np.uint8)
        if labels.shape != (rows,):
            raise ExportError(f"labels must have shape ({rows},), got {labels.shape}")
    tmp = f"{path}.tmp"
    try:
        with open(tmp, "wb") as fh:
            fh.write(struct.pack(_HEADER, MAGIC, VERSION, rows, cols, int(labels is not None)))
            if labels is not None:
                fh.write(labels.tobytes())
            fh.write(np.ascontiguousarray(matrix, dtype="<f4").tobytes())
        os.replace(tmp, path)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def read_dlem(path):
    """Minimal reader used for self-checks; docdrift is the reference reader."""
    with open(path, "rb") as fh:
        blob = fh.read()
    size = struct.calcsize(_HEADER)
    magic, version, rows, cols, flag = struct.unpack(_HEADER, blob[:size])
    if magic != MAGIC or version != VERSION:
        raise ExportError(f"{path}: not a version-{VERSION} DLEM file")
    pos = size
    labels = None
    if flag:
        labels = np.frombuffer(blob[pos : pos + rows], dtype=np.uint8).copy()
        pos += rows
    matrix = np.frombuffer(blob[pos:], dtype="<f4").reshape(rows, cols).copy()
    return matrix, labels

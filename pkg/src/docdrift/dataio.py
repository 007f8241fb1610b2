"""Dataset loading, embedding-file exchange, and report serialization.

A .dlem embedding file is little-endian:

    magic "DLEM" | u32 version=1 | u64 rows | u64 cols | u8 label_flag
    [rows x u8 labels when label_flag = 1] | rows*cols float32 row-major

Matrices are float32 on disk and float64 in memory. Report CSVs carry
exactly the columns pipeline,detector,drift_level,mean_p,std_p,n_repeats,
significant with p-values at 4 decimals.
"""

import csv
import struct
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DataError, ParameterError

CATEGORIES = ("World", "Sports", "Business", "SciTech")

EMBED_MAGIC = b"DLEM"
EMBED_VERSION = 1

_CSV_HEADER = ["pipeline", "detector", "drift_level", "mean_p", "std_p", "n_repeats", "significant"]
_AGNEWS_HEADER = {"class index", "title", "description"}


class Record(NamedTuple):
    label: str  # one of CATEGORIES
    title: str
    description: str


@dataclass
class Dataset:
    records: list
    skipped_rows: list = field(default_factory=list)  # 1-based rows with empty text

    def __len__(self):
        return len(self.records)

    def labels(self):
        return np.array([CATEGORIES.index(r.label) for r in self.records], dtype=np.uint8)


def document_text(record):
    """Title and description joined by a single space."""
    return f"{record.title} {record.description}"


def load_agnews_csv(path):
    """Load a 3-column AG-News CSV (class index 1-4, title, description).

    RFC-4180 quoting is honored; a leading header row is skipped if
    present. Structurally malformed rows abort the load with their 1-based
    row number; rows whose title+description is empty after trimming are
    skipped and reported in ``Dataset.skipped_rows``.
    """
    records = []
    skipped = []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read dataset {path}: {exc}") from exc
    with fh:
        for rownum, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if rownum == 1 and {c.strip().lower() for c in row} == _AGNEWS_HEADER:
                continue
            if len(row) != 3:
                raise DataError(f"{path}: row {rownum}: expected 3 columns, got {len(row)}")
            raw_label, title, description = row
            try:
                class_index = int(raw_label.strip())
            except ValueError:
                raise DataError(
                    f"{path}: row {rownum}: unparseable class index {raw_label!r}"
                ) from None
            if not 1 <= class_index <= 4:
                raise DataError(
                    f"{path}: row {rownum}: class index {class_index} outside 1-4"
                )
            if not (title.strip() or description.strip()):
                skipped.append(rownum)
                continue
            records.append(Record(CATEGORIES[class_index - 1], title, description))
    return Dataset(records=records, skipped_rows=skipped)


def write_embeddings(matrix, labels, path):
    """Write a matrix (and optional per-row uint8 labels) as a .dlem file."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ParameterError("embedding matrix must be 2-d")
    rows, cols = matrix.shape
    if rows < 1 or cols < 1:
        raise ParameterError(f"embedding matrix must be non-empty, got {rows}x{cols}")
    if not np.isfinite(matrix).all():
        raise DataError("embedding matrix contains non-finite entries")
    has_labels = labels is not None
    if has_labels:
        labels = np.asarray(labels)
        if labels.shape != (rows,):
            raise ParameterError(f"labels must have shape ({rows},), got {labels.shape}")
        labels = labels.astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIQQB", EMBED_MAGIC, EMBED_VERSION, rows, cols, int(has_labels)))
        if has_labels:
            fh.write(labels.tobytes())
        fh.write(np.ascontiguousarray(matrix, dtype="<f4").tobytes())


def read_embeddings(path):
    """Read a .dlem file; returns (float64 matrix, uint8 labels or None)."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read embeddings {path}: {exc}") from exc
    header_size = struct.calcsize("<4sIQQB")
    if len(blob) < header_size:
        raise DataError(f"{path}: file too short for a header ({len(blob)} bytes)")
    magic, version, rows, cols, label_flag = struct.unpack("<4sIQQB", blob[:header_size])
    if magic != EMBED_MAGIC:
        raise DataError(f"{path}: bad magic {magic!r}, expected {EMBED_MAGIC!r}")
    if version != EMBED_VERSION:
        raise DataError(f"{path}: unsupported version {version}")
    if rows < 1 or cols < 1 or rows * cols > 2**48:
        raise DataError(f"{path}: implausible dimensions {rows}x{cols}")
    expected = header_size + (rows if label_flag else 0) + rows * cols * 4
    if len(blob) != expected:
        raise DataError(
            f"{path}: payload length mismatch: expected {expected} bytes "
            f"for {rows}x{cols} (labels={bool(label_flag)}), file has {len(blob)}"
        )
    pos = header_size
    labels = None
    if label_flag:
        labels = np.frombuffer(blob[pos : pos + rows], dtype=np.uint8).copy()
        pos += rows
    matrix = (
        np.frombuffer(blob[pos:], dtype="<f4").astype(np.float64).reshape(rows, cols)
    )
    return matrix, labels


@dataclass
class ReportRow:
    pipeline: str
    detector: str
    drift_level: float
    mean_p: float
    std_p: float
    n_repeats: int
    significant: bool
    # per-repeat detail kept for analysis; not serialized, not compared
    p_values: list = field(default=None, compare=False, repr=False)
    mean_statistic: float = field(default=None, compare=False, repr=False)


@dataclass
class DriftReport:
    rows: list
    alpha: float = 0.05
    errors: list = field(default_factory=list, compare=False, repr=False)


def _format_row(row):
    return [
        row.pipeline,
        row.detector,
        f"{row.drift_level:.2f}",
        f"{row.mean_p:.4f}",
        f"{row.std_p:.4f}",
        str(row.n_repeats),
        "true" if row.significant else "false",
    ]


def write_report(report, fmt, path):
    """Serialize a DriftReport as CSV or a per-level markdown table."""
    if fmt not in ("csv", "markdown"):
        raise ParameterError(f"unknown report format {fmt!r}")
    try:
        if fmt == "csv":
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(_CSV_HEADER)
                for row in report.rows:
                    writer.writerow(_format_row(row))
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_render_markdown(report))
    except OSError as exc:
        raise DataError(f"cannot write report {path}: {exc}") from exc


def _render_markdown(report):
    """One body row per drift level, KS and MMD mean/stddev side by side."""
    by_level = {}
    pipelines = []
    for row in report.rows:
        by_level.setdefault(row.drift_level, {})[row.detector] = row
        if row.pipeline not in pipelines:
            pipelines.append(row.pipeline)
    lines = [
        "| model | KS mean | KS stddev | MMD mean | MMD stddev | drift level |",
        "|---|---|---|---|---|---|",
    ]
    for level in sorted(by_level):
        cells = [" / ".join(pipelines) if pipelines else ""]
        for det in ("ks", "mmd"):
            row = by_level[level].get(det)
            if row is None:
                cells += ["", ""]
                continue
            mean = f"{row.mean_p:.4f}"
            if row.significant:
                mean = f"**{mean}**"
            cells += [mean, f"{row.std_p:.4f}"]
        cells.append(f"{level:.2f}")
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def read_report_csv(path):
    """Parse a report CSV written by write_report back into a DriftReport."""
    rows = []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read report {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _CSV_HEADER:
            raise DataError(f"{path}: unexpected report header {header}")
        for row in reader:
            if len(row) != len(_CSV_HEADER):
                raise DataError(f"{path}: malformed report row {row}")
            rows.append(
                ReportRow(
                    pipeline=row[0],
                    detector=row[1],
                    drift_level=float(row[2]),
                    mean_p=float(row[3]),
                    std_p=float(row[4]),
                    n_repeats=int(row[5]),
                    significant=row[6] == "true",
                )
            )
    return DriftReport(rows=rows)

"""Sparse labeled text datasets: ``label idx:val idx:val ...`` with 1-based indices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DatasetFormatError
from .sparse import EncodedFeatures, SparseVector


@dataclass
class LabeledDataset:
    labels: list[int] = field(default_factory=list)
    vectors: list[SparseVector] = field(default_factory=list)
    dim: int = 0
    linenos: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(zip(self.labels, self.vectors))


def _parse_label(token: str, lineno: int) -> int:
    try:
        value = float(token)
    except ValueError:
        raise DatasetFormatError(f"non-numeric label {token!r}", lineno) from None
    if not math.isfinite(value) or value != int(value):
        raise DatasetFormatError(f"label must be a finite integer, got {token!r}", lineno)
    return int(value)


def _parse_line(line: str, lineno: int):
    tokens = line.split()
    label = _parse_label(tokens[0], lineno)
    pairs = []
    prev = 0
    for tok in tokens[1:]:
        idx_text, sep, val_text = tok.partition(":")
        if not sep:
            raise DatasetFormatError(f"expected idx:val, got {tok!r}", lineno)
        try:
            idx = int(idx_text)
            val = float(val_text)
        except ValueError:
            raise DatasetFormatError(f"non-numeric field {tok!r}", lineno) from None
        if idx < 1:
            raise DatasetFormatError(f"indices are 1-based, got {idx}", lineno)
        if idx == prev:
            raise DatasetFormatError(f"duplicate index {idx}", lineno)
        if idx < prev:
            raise DatasetFormatError(f"non-ascending index {idx} after {prev}", lineno)
        if not math.isfinite(val):
            raise DatasetFormatError(f"non-finite value {tok!r}", lineno)
        prev = idx
        if val != 0:
            pairs.append((idx - 1, val))
    return label, pairs, prev


def parse_dataset(stream, dim: int | None = None) -> LabeledDataset:
    """Read a dataset from an iterable of lines (an open text file works).

    Blank lines are skipped. ``dim`` fixes the dimension; otherwise it is the
    largest index seen. Explicit zero values are dropped.

    Raises:
        DatasetFormatError: with the 1-based line number of the first bad line.
    """
    rows = []
    max_idx = 0
    for lineno, line in enumerate(stream, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        line = line.strip()
        if not line:
            continue
        label, pairs, last = _parse_line(line, lineno)
        if dim is not None and last > dim:
            raise DatasetFormatError(f"index {last} exceeds declared dimension {dim}", lineno)
        max_idx = max(max_idx, last)
        rows.append((lineno, label, pairs))
    d = max_idx if dim is None else dim
    ds = LabeledDataset(dim=d)
    for lineno, label, pairs in rows:
        idx = np.fromiter((i for i, _ in pairs), dtype=np.int64, count=len(pairs))
        val = np.fromiter((v for _, v in pairs), dtype=np.float64, count=len(pairs))
        ds.labels.append(label)
        ds.vectors.append(SparseVector(d, idx, val))
        ds.linenos.append(lineno)
    return ds


def read_dataset(path, dim: int | None = None) -> LabeledDataset:
    with open(path, encoding="utf-8", newline=None) as fh:
        return parse_dataset(fh, dim=dim)


def l1_normalize(v: SparseVector) -> SparseVector:
    if np.any(v.values < 0):
        raise ValueError("l1_normalize requires nonnegative entries")
    total = v.values.sum()
    if total <= 0:
        raise ValueError("cannot l1-normalize a zero vector")
    return SparseVector(v.dim, v.indices, v.values / total)


def write_features(features, stream) -> None:
    """Write ``(label, EncodedFeatures)`` pairs, one line each, value 1 per one."""
    length = None
    for label, enc in features:
        if length is None:
            length = enc.length
        elif enc.length != length:
            raise ValueError("all encoded feature vectors must share one length")
        stream.write(_format_row(label, enc.ones + 1, None))


def write_dataset(dataset: LabeledDataset, stream) -> None:
    """Write real-valued vectors; ``repr`` keeps every float exact on re-parse."""
    for label, v in dataset:
        stream.write(_format_row(label, v.indices + 1, v.values))


def _format_row(label, positions, values) -> str:
    if values is None:
        body = " ".join(f"{p}:1" for p in positions.tolist())
    else:
        body = " ".join(f"{p}:{x!r}" for p, x in zip(positions.tolist(), values.tolist()))
    return f"{label} {body}\n" if body else f"{label}\n"


def features_to_encoded(v: SparseVector, block_size: int) -> EncodedFeatures:
    """Rebuild EncodedFeatures from a re-parsed binary feature row."""
    if np.any(v.values != 1):
        raise ValueError("expected a binary feature row")
    return EncodedFeatures(v.dim, v.indices, block_size)

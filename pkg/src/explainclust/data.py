"""Datasets, distance metrics and CSV ingestion."""

from __future__ import annotations

import csv
import enum
import io
import os
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DatasetError,
    EmptyFileError,
    NonFiniteError,
    NonNumericError,
    RaggedRowError,
)

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?(?:inf|infinity|nan)", re.I)


class Metric(str, enum.Enum):
    L1 = "l1"
    L2 = "l2"
    L2_SQUARED = "l2sq"
    LINF = "linf"

    @classmethod
    def parse(cls, name: "str | Metric") -> "Metric":
        if isinstance(name, Metric):
            return name
        key = name.strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "l1": cls.L1, "manhattan": cls.L1, "cityblock": cls.L1,
            "l2": cls.L2, "euclidean": cls.L2,
            "l2sq": cls.L2_SQUARED, "l2squared": cls.L2_SQUARED, "sqeuclidean": cls.L2_SQUARED,
            "linf": cls.LINF, "linfinity": cls.LINF, "chebyshev": cls.LINF,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown metric {name!r}") from None


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable set of ``n`` points in ``d`` dimensions.

    ``points`` is stored as a read-only float64 array of shape ``(n, d)``;
    row indices are the stable point identifiers.
    """

    points: np.ndarray
    feature_names: Optional[tuple[str, ...]] = field(default=None)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            raise DatasetError("points must be a 2-D array of shape (n, d)")
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DatasetError(f"need n >= 1 and d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise NonFiniteError("coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.feature_names is not None:
            names = tuple(str(s) for s in self.feature_names)
            if len(names) != pts.shape[1]:
                raise DatasetError(
                    f"{len(names)} feature names for {pts.shape[1]} dimensions"
                )
            object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, idx):
        return self.points[idx]

    def n_distinct(self) -> int:
        return int(np.unique(self.points, axis=0).shape[0])


def _parse_field(text: str, row: int, col: int) -> float:
    s = text.strip()
    if not _NUMBER.fullmatch(s):
        raise NonNumericError(f"row {row}, field {col}: not a number: {text!r}")
    value = float(s)
    if not np.isfinite(value):
        raise NonFiniteError(f"row {row}, field {col}: non-finite value {text!r}")
    return value


def parse_dataset(text: str, has_header: bool = False) -> Dataset:
    rows = [r for r in csv.reader(io.StringIO(text, newline="")) if r]
    if not rows:
        raise EmptyFileError("no rows")
    names = None
    if has_header:
        names = tuple(s.strip() for s in rows[0])
        rows = rows[1:]
        if not rows:
            raise EmptyFileError("header present but no data rows")
    width = len(names) if names is not None else len(rows[0])
    values = []
    for i, row in enumerate(rows, start=2 if has_header else 1):
        if len(row) != width:
            raise RaggedRowError(f"row {i} has {len(row)} fields, expected {width}")
        values.append([_parse_field(f, i, j) for j, f in enumerate(row)])
    return Dataset(np.array(values, dtype=np.float64), names)


def load_dataset(path: "str | os.PathLike", has_header: bool = False) -> Dataset:
    """Read a comma-separated file of numeric rows.

    Header auto-detection is never attempted; pass ``has_header`` explicitly.
    I/O failures propagate as ``OSError``; malformed content raises a
    ``DatasetError`` subclass.
    """
    with open(path, newline="") as fh:
        return parse_dataset(fh.read(), has_header)


def format_coordinate(v: float) -> str:
    """Shortest text that parses back to exactly ``v``; integral values drop '.0'."""
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def dump_dataset(ds: Dataset) -> str:
    lines = []
    if ds.feature_names is not None:
        lines.append(",".join(ds.feature_names))
    lines.extend(",".join(format_coordinate(v) for v in row) for row in ds.points)
    return "\n".join(lines) + "\n"


def save_dataset(ds: Dataset, path: "str | os.PathLike") -> None:
    with open(path, "w", newline="") as fh:
        fh.write(dump_dataset(ds))


def dist(a: Sequence[float], b: Sequence[float], metric: "str | Metric" = Metric.L2) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(pairwise(a[None, :], b[None, :], metric)[0, 0])


def pairwise(a: np.ndarray, b: np.ndarray, metric: "str | Metric" = Metric.L2) -> np.ndarray:
    """Distance matrix between the rows of ``a`` and the rows of ``b``."""
    metric = Metric.parse(metric)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # accumulate one coordinate at a time: no (n, m, d) temporary
    acc = np.zeros((a.shape[0], b.shape[0]))
    for j in range(a.shape[1]):
        diff = np.abs(a[:, j, None] - b[None, :, j])
        if metric is Metric.L1:
            acc += diff
        elif metric is Metric.LINF:
            np.maximum(acc, diff, out=acc)
        else:
            acc += diff * diff
    return np.sqrt(acc) if metric is Metric.L2 else acc

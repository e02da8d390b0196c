"""Sets of multivariate time series: data model, CSV I/O and windowing.

The on-disk format is a long-format CSV with header ``id,t,d1,...,dD`` and
one row per (individual, time step). Time steps are 1-based, contiguous
integers. Rows may come in any order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (
    IoFailure,
    MissingFile,
    NonContiguousTime,
    NonNumericCell,
    RaggedSeries,
    ValidationError,
    WindowOutOfRange,
)

SIGNIFICANT_DIGITS = 9


def quantize(values):
    """Round to the precision used by the CSV writer.

    Arrays passed through this survive a write/load round trip bit-exactly.
    """
    arr = np.asarray(values, dtype=np.float64)
    out = np.array([float(f"{v:.{SIGNIFICANT_DIGITS}g}") for v in arr.ravel()])
    return out.reshape(arr.shape)


@dataclass(frozen=True, eq=False)
class TimeSeriesSet:
    """An ``(n_individuals, n_steps, n_dims)`` tensor with individual labels."""

    values: np.ndarray
    ids: tuple

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3 or min(values.shape) < 1:
            raise ValidationError(
                f"values must have shape (n, T, D) with positive sizes, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("values contain NaN or Inf")
        ids = tuple(str(i) for i in self.ids)
        if len(ids) != values.shape[0]:
            raise ValidationError(f"{len(ids)} ids for {values.shape[0]} individuals")
        if len(set(ids)) != len(ids):
            raise ValidationError("ids must be unique")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ids", ids)

    @classmethod
    def from_array(cls, values, ids: Optional[Sequence] = None) -> "TimeSeriesSet":
        values = np.asarray(values, dtype=np.float64)
        if ids is None:
            ids = [str(i + 1) for i in range(values.shape[0])]
        return cls(values, tuple(ids))

    @property
    def n_individuals(self) -> int:
        return self.values.shape[0]

    @property
    def n_steps(self) -> int:
        return self.values.shape[1]

    @property
    def n_dims(self) -> int:
        return self.values.shape[2]

    @property
    def shape(self):
        return self.values.shape

    def series(self, i: int) -> np.ndarray:
        """The ``(T, D)`` series of the individual at 0-based position ``i``."""
        return self.values[i]

    def index_of(self, ident) -> int:
        try:
            return self.ids.index(str(ident))
        except ValueError:
            raise ValidationError(f"unknown individual id {ident!r}") from None

    def __eq__(self, other):
        if not isinstance(other, TimeSeriesSet):
            return NotImplemented
        return self.ids == other.ids and np.array_equal(self.values, other.values)

    def __repr__(self):
        n, t, d = self.shape
        return f"TimeSeriesSet(n={n}, T={t}, D={d})"


@dataclass(frozen=True)
class WindowSpec:
    """Closed interval ``[start, start + length - 1]`` of 1-based time steps."""

    start: int
    length: int

    @classmethod
    def from_bounds(cls, first: int, last: int) -> "WindowSpec":
        return cls(first, last - first + 1)

    @property
    def end(self) -> int:
        return self.start + self.length - 1

    def validate(self, n_steps: int) -> None:
        if self.start < 1 or self.length < 1 or self.end > n_steps:
            raise WindowOutOfRange(
                f"window [{self.start}, {self.end}] outside [1, {n_steps}]"
            )


def slice_window(tss: TimeSeriesSet, w: WindowSpec) -> TimeSeriesSet:
    w.validate(tss.n_steps)
    return TimeSeriesSet(tss.values[:, w.start - 1 : w.end, :], tss.ids)


def load_timeseries(path, expected_dims: Optional[int] = None) -> TimeSeriesSet:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    n_dims = len(header) - 2
    expected_header = ["id", "t"] + [f"d{k + 1}" for k in range(n_dims)]
    if n_dims < 1 or header != expected_header:
        raise ValidationError(
            f"{path}: header must be id,t,d1,...,dD, got {','.join(header)}"
        )
    if expected_dims is not None and n_dims != expected_dims:
        raise ValidationError(f"{path}: expected {expected_dims} dims, found {n_dims}")

    by_id: dict = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != n_dims + 2:
            raise RaggedSeries(
                f"{path}:{lineno}: id {row[0]!r} has {len(row) - 2} dims, expected {n_dims}"
            )
        ident = row[0].strip()
        try:
            t = int(row[1])
        except ValueError:
            raise NonNumericCell(
                f"{path}:{lineno}: id {ident!r} has non-integer time {row[1]!r}"
            ) from None
        try:
            vec = [float(c) for c in row[2:]]
        except ValueError:
            raise NonNumericCell(
                f"{path}:{lineno}: id {ident!r} has a non-numeric value"
            ) from None
        if not all(math.isfinite(v) for v in vec):
            raise NonNumericCell(f"{path}:{lineno}: id {ident!r} has NaN/Inf value")
        series = by_id.setdefault(ident, {})
        if t in series:
            raise NonContiguousTime(f"{path}:{lineno}: id {ident!r} repeats t={t}")
        series[t] = vec

    if not by_id:
        raise ValidationError(f"{path}: no data rows")

    n_steps = None
    for ident, series in by_id.items():
        if n_steps is None:
            n_steps = len(series)
        elif len(series) != n_steps:
            raise RaggedSeries(
                f"{path}: id {ident!r} has {len(series)} steps, expected {n_steps}"
            )
    for ident, series in by_id.items():
        if sorted(series) != list(range(1, n_steps + 1)):
            raise NonContiguousTime(f"{path}: id {ident!r} times are not 1..{n_steps}")

    values = np.empty((len(by_id), n_steps, n_dims))
    for i, series in enumerate(by_id.values()):
        for t, vec in series.items():
            values[i, t - 1] = vec
    return TimeSeriesSet(values, tuple(by_id))


def format_value(v: float) -> str:
    return f"{v:.{SIGNIFICANT_DIGITS}g}"


def write_timeseries(tss: TimeSeriesSet, path) -> None:
    path = Path(path)
    header = ["id", "t"] + [f"d{k + 1}" for k in range(tss.n_dims)]
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for ident, series in zip(tss.ids, tss.values):
                for t, vec in enumerate(series, start=1):
                    writer.writerow([ident, t] + [format_value(v) for v in vec])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc

"""Time-series matrices, segment views and sample correlation.

A time-series matrix is a ``(T, p)`` float array with rows as time points and
columns as nodes. Time indices in the public interface are 1-based and
inclusive, so ``Segment(1, T)`` covers the whole series.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from os import PathLike
from pathlib import Path

import numpy as np

from .errors import BoundsError, DegenerateColumnError, DimensionError, ParseError


@dataclass(frozen=True, order=True)
class Segment:
    """Rows ``start..end`` (1-based, inclusive) of a time-series matrix."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 1 or self.end - self.start + 1 < 2:
            raise BoundsError(f"invalid segment [{self.start}, {self.end}]: need start >= 1 and length >= 2")

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def rows(self, Y: np.ndarray) -> np.ndarray:
        if self.end > Y.shape[0]:
            raise BoundsError(f"segment end {self.end} exceeds series length {Y.shape[0]}")
        return Y[self.start - 1 : self.end]

    def __str__(self) -> str:
        return f"[{self.start}, {self.end}]"


def as_timeseries(values) -> np.ndarray:
    """Validate and freeze a ``(T, p)`` matrix; ``T >= 2``, ``p >= 2``, all finite."""
    Y = np.array(values, dtype=float)
    if Y.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got {Y.ndim} dimension(s)")
    T, p = Y.shape
    if T < 2 or p < 2:
        raise DimensionError(f"need at least 2 time points and 2 nodes, got T={T}, p={p}")
    bad = ~np.isfinite(Y)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise ParseError("non-finite value", row=int(r) + 1, column=int(c) + 1)
    Y.setflags(write=False)
    return Y


def load_matrix(
    path: str | PathLike,
    delimiter: str | None = None,
    header: bool = False,
) -> np.ndarray:
    """Read a delimited text table of time points (rows) by nodes (columns).

    Parameters
    ----------
    path : path-like
        CSV/TSV file.
    delimiter : str, optional
        Field separator. Defaults to a tab for ``.tsv``/``.tab`` files and a
        comma otherwise.
    header : bool
        Skip the first line.

    Raises
    ------
    ParseError
        Ragged rows or non-numeric cells; the message names the 1-based file
        line and column.
    DimensionError
        Fewer than 2 rows or 2 columns.
    """
    path = Path(path)
    if delimiter is None:
        delimiter = "\t" if path.suffix.lower() in (".tsv", ".tab") else ","
    rows: list[list[float]] = []
    width = None
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        for lineno, fields in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            if header and lineno == 1:
                continue
            if not fields or all(not f.strip() for f in fields):
                continue
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ParseError(f"expected {width} fields, found {len(fields)}", row=lineno)
            row = []
            for col, cell in enumerate(fields, start=1):
                try:
                    row.append(float(cell))
                except ValueError:
                    raise ParseError(f"non-numeric cell {cell.strip()!r}", row=lineno, column=col) from None
            rows.append(row)
    if not rows:
        raise DimensionError(f"{path} contains no data rows")
    return as_timeseries(rows)


def split(n_rows: int, delta: int, segment: Segment | None = None) -> tuple[Segment, Segment]:
    """Split a segment after its ``delta``-th row (``delta`` local, 1-based).

    ``segment`` defaults to the full series ``[1, n_rows]``. Both sides must
    keep at least two rows.
    """
    seg = segment if segment is not None else Segment(1, n_rows)
    if not 2 <= delta <= seg.length - 2:
        raise BoundsError(f"split position {delta} outside [2, {seg.length - 2}]")
    cut = seg.start + delta - 1
    return Segment(seg.start, cut), Segment(cut + 1, seg.end)


def correlation(Y: np.ndarray, segment: Segment | None = None) -> np.ndarray:
    """Pearson correlation between the columns of ``Y`` (optionally a segment).

    The result is symmetric with an exact unit diagonal and entries clipped to
    ``[-1, 1]``.

    Raises
    ------
    DegenerateColumnError
        A column is constant over the rows used.
    """
    X = segment.rows(Y) if segment is not None else Y
    if X.shape[0] < 2:
        raise BoundsError("correlation needs at least 2 rows")
    flat = np.ptp(X, axis=0) == 0
    if flat.any():
        raise DegenerateColumnError(int(np.flatnonzero(flat)[0]) + 1)
    Xc = X - X.mean(axis=0)
    scale = np.sqrt(np.einsum("ij,ij->j", Xc, Xc))
    if not (scale > 0).all():
        raise DegenerateColumnError(int(np.flatnonzero(~(scale > 0))[0]) + 1)
    Xn = Xc / scale
    R = Xn.T @ Xn
    R = 0.5 * (R + R.T)
    np.clip(R, -1.0, 1.0, out=R)
    np.fill_diagonal(R, 1.0)
    return R

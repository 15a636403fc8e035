"""Loaders for ratings benchmarks and plain text corpora.

Ratings come either in the "::"-separated MovieLens layout or as generic
(row, col, rating) CSV; corpora are one UTF-8 text per line, or CSV with a
designated text column. Malformed input raises :class:`ParseError` with
the offending 1-based line number.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .featurize import TextDoc


class ParseError(ValueError):
    """Malformed input line, with its location."""

    def __init__(self, source: str, line_no: int, message: str) -> None:
        self.source = source
        self.line_no = line_no
        super().__init__(f"{source}, line {line_no}: {message}")


@dataclass(frozen=True)
class RatingsDataset:
    """Observed (row, col, rating) triples with dense 0-based indices."""

    name: str
    rows: np.ndarray      # int64, dense row index
    cols: np.ndarray      # int64, dense column index
    ratings: np.ndarray   # float64
    n_rows: int
    n_cols: int

    def __post_init__(self) -> None:
        key = self.rows.astype(np.int64) * self.n_cols + self.cols
        if np.unique(key).size != key.size:
            raise ValueError(f"{self.name}: duplicate (row, col) pairs")

    @property
    def nnz(self) -> int:
        return int(self.rows.size)


def _densify(name: str, raw_rows: list[int], raw_cols: list[int],
             ratings: list[float]) -> RatingsDataset:
    raw_rows = np.asarray(raw_rows, dtype=np.int64)
    raw_cols = np.asarray(raw_cols, dtype=np.int64)
    row_ids, rows = np.unique(raw_rows, return_inverse=True)
    col_ids, cols = np.unique(raw_cols, return_inverse=True)
    return RatingsDataset(
        name=name,
        rows=rows.astype(np.int64),
        cols=cols.astype(np.int64),
        ratings=np.asarray(ratings, dtype=np.float64),
        n_rows=int(row_ids.size),
        n_cols=int(col_ids.size),
    )


def load_movielens(path: str | Path) -> RatingsDataset:
    """Parse a MovieLens ratings file (``user::item::rating::timestamp``).

    ``path`` may be the ratings file itself or a dataset directory
    containing ``ratings.dat``.
    """
    path = Path(path)
    if path.is_dir():
        path = path / "ratings.dat"
    if not path.exists():
        raise FileNotFoundError(f"ratings file not found: {path}")
    raw_rows: list[int] = []
    raw_cols: list[int] = []
    ratings: list[float] = []
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("::")
            if len(parts) < 3:
                raise ParseError(str(path), line_no,
                                 f"expected user::item::rating, got {line!r}")
            try:
                raw_rows.append(int(parts[0]))
                raw_cols.append(int(parts[1]))
                ratings.append(float(parts[2]))
            except ValueError as exc:
                raise ParseError(str(path), line_no, str(exc)) from None
    if not ratings:
        raise ParseError(str(path), 1, "no rating rows")
    return _densify(path.stem, raw_rows, raw_cols, ratings)


def load_csv_ratings(path: str | Path) -> RatingsDataset:
    """Parse generic (row, col, rating) CSV; a non-numeric first line is a header."""
    path = Path(path)
    raw_rows: list[int] = []
    raw_cols: list[int] = []
    ratings: list[float] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for line_no, parts in enumerate(reader, start=1):
            if not parts:
                continue
            if len(parts) < 3:
                raise ParseError(str(path), line_no,
                                 f"expected row,col,rating, got {parts!r}")
            try:
                raw_rows.append(int(parts[0]))
                raw_cols.append(int(parts[1]))
                ratings.append(float(parts[2]))
            except ValueError as exc:
                if line_no == 1:
                    continue  # header row
                raise ParseError(str(path), line_no, str(exc)) from None
    if not ratings:
        raise ParseError(str(path), 1, "no rating rows")
    return _densify(path.stem, raw_rows, raw_cols, ratings)


def parse_text_corpus(text: str) -> list[TextDoc]:
    """One document per line; interior blank lines stay as empty documents."""
    return [TextDoc(row_id=i, raw=line) for i, line in enumerate(text.splitlines())]


def load_text_corpus(path: str | Path) -> list[TextDoc]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text_corpus(fh.read())


def parse_csv_corpus(text: str, text_column: str,
                     source: str = "<csv>") -> list[TextDoc]:
    """CSV corpus with a designated text column (RFC-4180 quoting)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(source, 1, "empty CSV") from None
    if text_column not in header:
        raise ParseError(source, 1,
                         f"text column {text_column!r} not in header {header!r}")
    col = header.index(text_column)
    docs: list[TextDoc] = []
    for line_no, parts in enumerate(reader, start=2):
        if not parts:
            continue
        if col >= len(parts):
            raise ParseError(source, line_no,
                             f"row has {len(parts)} fields, need {col + 1}")
        docs.append(TextDoc(row_id=len(docs), raw=parts[col]))
    return docs


def load_csv_corpus(path: str | Path, text_column: str) -> list[TextDoc]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_csv_corpus(fh.read(), text_column, source=str(path))

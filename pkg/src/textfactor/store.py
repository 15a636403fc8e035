"""Sparse storage for the block observation matrix.

Rows are texts. The first ``n1`` columns are binary n-gram presence cells
(implicitly value 1; absent cells are never stored) and the remaining
``n2`` columns hold explicit 0/1 label cells. Only observed cells exist in
memory, which is what makes corpora with >96% empty cells tractable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

# Rejection attempts before falling back to an exact scan of empty columns.
_REJECTION_TRIES = 32

_EMPTY_COLS = np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class CellRef:
    """One observed cell. ``col`` is a global column id: feature block
    first, so ``col >= n1`` means label index ``col - n1``."""

    row: int
    col: int
    value: int


@dataclass(frozen=True)
class StoreStats:
    m: int
    n: int
    n1: int
    n2: int
    observed_count: int
    zero_rate: float
    avg_row_entries: float
    avg_col_entries: float


class ObservationStore:
    """Observed cells of an ``m x (n1 + n2)`` block matrix.

    Feature rows are kept as sorted column-id arrays (presence only);
    label cells live in a per-row dict because they carry explicit 0/1
    values and are overwritten by user corrections.
    """

    def __init__(self, m: int, n1: int, n2: int) -> None:
        if m < 0 or n1 < 0 or n2 < 0:
            raise ValueError("dimensions must be non-negative")
        self.m = m
        self.n1 = n1
        self.n2 = n2
        self._f_rows: list[np.ndarray] = [_EMPTY_COLS] * m
        self._l_rows: list[dict[int, int]] = [dict() for _ in range(m)]
        self._n_f_cells = 0
        self._n_l_cells = 0
        self._version = 0
        self._cache: Optional[tuple] = None

    # -- dimensions ----------------------------------------------------

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def observed_count(self) -> int:
        return self._n_f_cells + self._n_l_cells

    @property
    def f_cell_count(self) -> int:
        return self._n_f_cells

    @property
    def l_cell_count(self) -> int:
        return self._n_l_cells

    def add_rows(self, count: int) -> None:
        if count < 0:
            raise ValueError("count must be non-negative")
        self.m += count
        self._f_rows.extend([_EMPTY_COLS] * count)
        self._l_rows.extend(dict() for _ in range(count))
        self._touch()

    def widen_features(self, new_n1: int) -> None:
        """Grow the feature block; existing column ids keep their meaning."""
        if new_n1 < self.n1:
            raise ValueError(f"cannot shrink feature block {self.n1} -> {new_n1}")
        self.n1 = new_n1
        self._touch()

    def add_label(self) -> int:
        """Append one label column and return its label index."""
        idx = self.n2
        self.n2 += 1
        self._touch()
        return idx

    def clear_label(self, label_index: int) -> int:
        """Drop every cell of one label column (the column itself stays).

        Returns the number of cells removed.
        """
        self._check_label(label_index)
        removed = 0
        for cells in self._l_rows:
            if label_index in cells:
                del cells[label_index]
                removed += 1
        self._n_l_cells -= removed
        self._touch()
        return removed

    # -- cell mutation -------------------------------------------------

    def set_features(self, row: int, col_ids: Iterable[int]) -> None:
        """Replace the row's feature cells by ``col_ids`` (all value 1)."""
        self._check_row(row)
        cols = np.asarray(sorted(set(int(c) for c in col_ids)), dtype=np.int64)
        if cols.size and (cols[0] < 0 or cols[-1] >= self.n1):
            raise IndexError(f"feature column out of range [0, {self.n1})")
        self._n_f_cells += cols.size - self._f_rows[row].size
        self._f_rows[row] = cols
        self._touch()

    def set_label(self, row: int, label_index: int, value: int) -> Optional[int]:
        """Store or overwrite one label cell; returns the prior value if any."""
        self._check_row(row)
        self._check_label(label_index)
        if value not in (0, 1):
            raise ValueError(f"label value must be 0 or 1, got {value!r}")
        cells = self._l_rows[row]
        prev = cells.get(label_index)
        if prev is None:
            self._n_l_cells += 1
        cells[label_index] = int(value)
        self._touch()
        return prev

    def bulk_set_labels(self, rows: np.ndarray, label_indices: np.ndarray,
                        values: np.ndarray) -> None:
        """Vectorized ``set_label`` for benchmark-scale loading."""
        rows = np.asarray(rows, dtype=np.int64)
        label_indices = np.asarray(label_indices, dtype=np.int64)
        values = np.asarray(values)
        if not (len(rows) == len(label_indices) == len(values)):
            raise ValueError("rows, label_indices and values must align")
        if len(rows) == 0:
            return
        if rows.min() < 0 or rows.max() >= self.m:
            raise IndexError(f"row out of range [0, {self.m})")
        if label_indices.min() < 0 or label_indices.max() >= self.n2:
            raise IndexError(f"label index out of range [0, {self.n2})")
        if not np.isin(values, (0, 1)).all():
            raise ValueError("label values must be 0 or 1")
        l_rows = self._l_rows
        added = 0
        for r, j, v in zip(rows.tolist(), label_indices.tolist(), values.tolist()):
            cells = l_rows[r]
            if j not in cells:
                added += 1
            cells[j] = int(v)
        self._n_l_cells += added
        self._touch()

    # -- cell access ---------------------------------------------------

    def f_row(self, row: int) -> np.ndarray:
        """Sorted feature column ids of one row (do not mutate)."""
        self._check_row(row)
        return self._f_rows[row]

    def get_label(self, row: int, label_index: int) -> Optional[int]:
        self._check_row(row)
        self._check_label(label_index)
        return self._l_rows[row].get(label_index)

    def label_cells(self) -> list[tuple[int, int, int]]:
        """All label cells as (row, label_index, value), sorted."""
        out = []
        for row, cells in enumerate(self._l_rows):
            for idx in sorted(cells):
                out.append((row, idx, cells[idx]))
        return out

    def row_labels(self, row: int) -> list[tuple[int, int]]:
        """One row's label cells as (label_index, value), sorted by index."""
        self._check_row(row)
        cells = self._l_rows[row]
        return [(idx, cells[idx]) for idx in sorted(cells)]

    def labeled_rows(self, label_index: int) -> np.ndarray:
        """Rows that carry an observed cell for the given label."""
        self._check_label(label_index)
        return np.asarray(
            [row for row, cells in enumerate(self._l_rows) if label_index in cells],
            dtype=np.int64,
        )

    # -- training views ------------------------------------------------

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Materialized observed cells plus a CSR view of the feature block.

        Returns ``(rows, cols, vals, f_indptr, f_indices)`` where cols are
        global column ids, the base order is feature cells row-major
        followed by label cells sorted by (row, label), and the CSR pair
        indexes the sorted feature columns of each row. Cached until the
        next mutation; treat the arrays as read-only.
        """
        if self._cache is not None and self._cache[0] == self._version:
            return self._cache[1]
        f_indptr = np.zeros(self.m + 1, dtype=np.int64)
        for row, cols in enumerate(self._f_rows):
            f_indptr[row + 1] = f_indptr[row] + cols.size
        f_indices = (np.concatenate(self._f_rows) if self.m and self._n_f_cells
                     else _EMPTY_COLS)
        l_triples = self.label_cells()
        n_l = len(l_triples)
        rows = np.empty(self._n_f_cells + n_l, dtype=np.int64)
        cols = np.empty_like(rows)
        vals = np.empty(rows.shape, dtype=np.float64)
        rows[:self._n_f_cells] = np.repeat(np.arange(self.m, dtype=np.int64),
                                           np.diff(f_indptr))
        cols[:self._n_f_cells] = f_indices
        vals[:self._n_f_cells] = 1.0
        if n_l:
            l_arr = np.asarray(l_triples, dtype=np.int64)
            rows[self._n_f_cells:] = l_arr[:, 0]
            cols[self._n_f_cells:] = l_arr[:, 1] + self.n1
            vals[self._n_f_cells:] = l_arr[:, 2]
        result = (rows, cols, vals, f_indptr, f_indices)
        self._cache = (self._version, result)
        return result

    def shuffled_observed(self, seed: int) -> list[CellRef]:
        """A seeded uniformly-random permutation of every observed cell."""
        rows, cols, vals, _, _ = self.arrays()
        perm = np.random.default_rng(seed).permutation(rows.size)
        return [CellRef(int(rows[i]), int(cols[i]), int(vals[i])) for i in perm]

    def sample_empty_f_cell(self, row: int, rng: np.random.Generator) -> Optional[int]:
        """A uniformly chosen feature column with no observed cell in ``row``.

        Returns None when the row's feature block is full. Expected O(1)
        via rejection on sparse rows; an exact scan guarantees termination
        on dense ones.
        """
        self._check_row(row)
        observed = self._f_rows[row]
        n_empty = self.n1 - observed.size
        if n_empty <= 0:
            return None
        for _ in range(_REJECTION_TRIES):
            j = int(rng.integers(0, self.n1))
            pos = np.searchsorted(observed, j)
            if pos >= observed.size or observed[pos] != j:
                return j
        empties = np.setdiff1d(np.arange(self.n1, dtype=np.int64), observed,
                               assume_unique=True)
        return int(empties[rng.integers(0, empties.size)])

    # -- reporting -----------------------------------------------------

    def stats(self) -> StoreStats:
        cells = self.observed_count
        total = self.m * self.n
        return StoreStats(
            m=self.m,
            n=self.n,
            n1=self.n1,
            n2=self.n2,
            observed_count=cells,
            zero_rate=1.0 - cells / total if total else 1.0,
            avg_row_entries=cells / self.m if self.m else 0.0,
            avg_col_entries=cells / self.n if self.n else 0.0,
        )

    # -- internals -----------------------------------------------------

    def _touch(self) -> None:
        self._version += 1
        self._cache = None

    def _check_row(self, row: int) -> None:
        if not 0 <= row < self.m:
            raise IndexError(f"row {row} out of range [0, {self.m})")

    def _check_label(self, label_index: int) -> None:
        if not 0 <= label_index < self.n2:
            raise IndexError(f"label index {label_index} out of range [0, {self.n2})")

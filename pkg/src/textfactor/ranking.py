"""Ranked views over the factor model's cell scores.

Scores are the raw dot products (no thresholding); result lists are
sorted by descending score with ties broken by ascending item id so every
ranking is deterministic and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .engine import FactorModel
from .store import ObservationStore


@dataclass(frozen=True)
class ScoredItem:
    """One ranked row id or label index with its raw score (1-based rank)."""

    item_id: int
    score: float
    rank: int


def _ranked(ids: np.ndarray, scores: np.ndarray, limit: int) -> list[ScoredItem]:
    order = np.lexsort((ids, -scores))[:limit]
    return [
        ScoredItem(item_id=int(ids[t]), score=float(scores[t]), rank=pos + 1)
        for pos, t in enumerate(order)
    ]


def _score_block(row_factors: np.ndarray, col_factors: np.ndarray) -> np.ndarray:
    # einsum without optimization reduces k sequentially per cell, so a
    # score is bit-identical no matter how many rows the call covers;
    # BLAS matmul would round differently between shapes.
    return np.einsum("ik,jk->ij", row_factors, col_factors, optimize=False)


def top_texts_for_label(model: FactorModel, store: ObservationStore,
                        label_index: int, limit: int = 1000,
                        include_annotated: bool = False) -> list[ScoredItem]:
    """Texts ranked by their predicted score for one label.

    Rows that already carry an observed cell for this label are excluded
    unless ``include_annotated`` is set; they are user-known.
    """
    if not 0 <= label_index < store.n2:
        raise IndexError(f"label index {label_index} out of range [0, {store.n2})")
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    col = store.n1 + label_index
    scores = _score_block(model.row_factors, model.col_factors[col:col + 1])[:, 0]
    ids = np.arange(store.m, dtype=np.int64)
    if not include_annotated:
        keep = np.ones(store.m, dtype=bool)
        keep[store.labeled_rows(label_index)] = False
        ids, scores = ids[keep], scores[keep]
    return _ranked(ids, scores, limit)


def top_labels_for_text(model: FactorModel, store: ObservationStore,
                        row: int, limit: Optional[int] = None) -> list[ScoredItem]:
    """Labels ranked by their predicted score for one text."""
    if not 0 <= row < store.m:
        raise IndexError(f"row {row} out of range [0, {store.m})")
    if limit is not None and limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    scores = full_label_block(model, store, [row])[0]
    ids = np.arange(store.n2, dtype=np.int64)
    return _ranked(ids, scores, store.n2 if limit is None else limit)


def full_label_block(model: FactorModel, store: ObservationStore,
                     rows: Optional[Sequence[int]] = None) -> np.ndarray:
    """Dense (len(rows) x n2) table of raw label scores, for export."""
    label_factors = model.col_factors[store.n1:]
    if rows is None:
        return _score_block(model.row_factors, label_factors)
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return np.empty((0, store.n2))
    if rows.min() < 0 or rows.max() >= store.m:
        raise IndexError(f"row out of range [0, {store.m})")
    return _score_block(model.row_factors[rows], label_factors)

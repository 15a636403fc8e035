"""Cross-validated benchmark protocol and the balanced-error-rate metric.

Ratings matrices are recoded to 0/1 against the global mean, split into
k folds over observed cells, and each fold is scored by a model trained on
the other folds. Text corpora run the same protocol over their presence
cells using the full feature/label block layout. Reports are reproducible
byte-for-byte under a fixed seed.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import engine
from .datasets import (RatingsDataset, load_csv_ratings, load_movielens,
                       load_text_corpus)
from .featurize import TextDoc, build_vocab, encode
from .store import ObservationStore


@dataclass(frozen=True)
class ConfusionCounts:
    """Per-row confusion tallies over that row's evaluated cells."""

    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass
class EvalReport:
    """Per-fold balanced error rates and their aggregate, plus matrix stats."""

    dataset: str
    m: int
    n: int
    nnz: int
    zero_rate: float
    folds: int
    ber_per_fold: list[float]
    rmse_per_fold: list[float]
    passes: list[int]
    ber_mean: float
    ber_std: float
    rmse_mean: float
    threshold: float
    seed: int
    hp: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.ber_mean <= 1.0:
            raise ValueError(f"ber_mean out of [0, 1]: {self.ber_mean}")

    def to_dict(self) -> dict:
        # elapsed_seconds is wall time: it stays out so identical seeds
        # serialize to identical bytes.
        out = asdict(self)
        out.pop("elapsed_seconds")
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary_table(self) -> str:
        rows = [
            ("dataset", self.dataset),
            ("rows m", f"{self.m:,}"),
            ("columns n", f"{self.n:,}"),
            ("observed cells", f"{self.nnz:,}"),
            ("zero rate", f"{self.zero_rate:.2%}"),
            ("folds", str(self.folds)),
            ("BER", f"{self.ber_mean:.2%} +/- {self.ber_std:.2%}"),
            ("RMSE", f"{self.rmse_mean:.4f}"),
            ("passes/fold", ",".join(str(p) for p in self.passes)),
            ("elapsed", f"{self.elapsed_seconds:.1f}s"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def binarize_ratings(ds: RatingsDataset) -> tuple[np.ndarray, float]:
    """Recode ratings to 1 if strictly above the global mean, else 0.

    Cell positions are untouched; returns the 0/1 values and the mean.
    """
    if ds.nnz == 0:
        raise ValueError("cannot binarize an empty dataset")
    mean = float(ds.ratings.mean())
    return (ds.ratings > mean).astype(np.int8), mean


def binarize_scores(scores: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Predictions are positive iff score >= threshold."""
    return (np.asarray(scores) >= threshold).astype(np.int8)


def kfold_split(n_cells: int, folds: int = 10, seed: int = 0) -> np.ndarray:
    """Seeded random fold id per cell; fold sizes differ by at most one."""
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if n_cells < folds:
        raise ValueError(f"need at least {folds} cells, got {n_cells}")
    perm = np.random.default_rng(seed).permutation(n_cells)
    fold_ids = np.empty(n_cells, dtype=np.int64)
    fold_ids[perm] = np.arange(n_cells, dtype=np.int64) % folds
    return fold_ids


def confusion_by_row(rows: np.ndarray, y_true: np.ndarray,
                     y_pred: np.ndarray) -> list[ConfusionCounts]:
    """Confusion tallies per evaluated row (rows ordered by id)."""
    rows = np.asarray(rows, dtype=np.int64)
    y_true = np.asarray(y_true).astype(np.int64)
    y_pred = np.asarray(y_pred).astype(np.int64)
    if not (rows.size == y_true.size == y_pred.size):
        raise ValueError("rows, y_true and y_pred must align")
    uniq, inverse = np.unique(rows, return_inverse=True)
    # category: 0=tn 1=fp 2=fn 3=tp
    cat = 2 * y_true + y_pred
    counts = np.zeros((uniq.size, 4), dtype=np.int64)
    np.add.at(counts, (inverse, cat), 1)
    return [
        ConfusionCounts(tp=int(c[3]), tn=int(c[0]), fp=int(c[1]), fn=int(c[2]))
        for c in counts
    ]


def ber(confusions: Sequence[ConfusionCounts]) -> float:
    """Mean over rows of the half-sum of false-positive and false-negative rates.

    A row term with an empty denominator (no true negatives+false
    positives, or no true positives+false negatives) contributes 0 to that
    term; the row still counts in the average.
    """
    if len(confusions) == 0:
        raise ValueError("ber over an empty row set is undefined")
    total = 0.0
    for c in confusions:
        fp_rate = c.fp / (c.fp + c.tn) if (c.fp + c.tn) > 0 else 0.0
        fn_rate = c.fn / (c.fn + c.tp) if (c.fn + c.tp) > 0 else 0.0
        total += 0.5 * (fp_rate + fn_rate)
    return total / len(confusions)


def _aggregate(name: str, m: int, n: int, nnz: int, folds: int,
               fold_bers: list[float], fold_rmses: list[float],
               fold_passes: list[int], threshold: float, seed: int,
               hp: engine.HyperParams, t0: float) -> EvalReport:
    total = m * n
    return EvalReport(
        dataset=name,
        m=m,
        n=n,
        nnz=nnz,
        zero_rate=1.0 - nnz / total if total else 1.0,
        folds=folds,
        ber_per_fold=fold_bers,
        rmse_per_fold=fold_rmses,
        passes=fold_passes,
        ber_mean=float(np.mean(fold_bers)),
        ber_std=float(np.std(fold_bers, ddof=1)) if folds > 1 else 0.0,
        rmse_mean=float(np.mean(fold_rmses)),
        threshold=threshold,
        seed=seed,
        hp=asdict(hp),
        elapsed_seconds=time.perf_counter() - t0,
    )


def _fold_seeds(seed: int, folds: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(child.generate_state(1)[0]) for child in ss.spawn(folds)]


def evaluate_ratings(ds: RatingsDataset, hp: Optional[engine.HyperParams] = None,
                     folds: int = 10, seed: int = 0, threshold: float = 0.5,
                     subsample: Optional[int] = None) -> EvalReport:
    """Cross-validate a binarized ratings matrix.

    Every cell is an explicit 0/1 target, so the store uses a pure label
    block (no presence features, hence no negative sampling). With
    ``subsample`` set, a seeded subset of that many cells replaces the
    full matrix.
    """
    t0 = time.perf_counter()
    hp = hp or engine.HyperParams()
    values, _ = binarize_ratings(ds)
    rows, cols = ds.rows, ds.cols
    if subsample is not None and subsample < rows.size:
        pick = np.random.default_rng([seed, 0x5AB5]).choice(
            rows.size, size=subsample, replace=False)
        pick.sort()
        rows, cols, values = rows[pick], cols[pick], values[pick]
    n_cells = rows.size
    fold_ids = kfold_split(n_cells, folds, seed)
    seeds = _fold_seeds(seed, folds)

    fold_bers: list[float] = []
    fold_rmses: list[float] = []
    fold_passes: list[int] = []
    for fold in range(folds):
        test = fold_ids == fold
        train_rows, train_cols = rows[~test], cols[~test]
        train_vals = values[~test]
        store = ObservationStore(m=ds.n_rows, n1=0, n2=ds.n_cols)
        store.bulk_set_labels(train_rows, train_cols, train_vals)
        model = engine.init_model(ds.n_rows, ds.n_cols, hp.k, seeds[fold],
                                  hp.init_scale)
        report = engine.train(model, store, hp.with_seed(seeds[fold]))
        scores = np.einsum("ij,ij->i", model.row_factors[rows[test]],
                           model.col_factors[cols[test]])
        y_true = values[test]
        y_pred = binarize_scores(scores, threshold)
        fold_bers.append(ber(confusion_by_row(rows[test], y_true, y_pred)))
        fold_rmses.append(float(np.sqrt(np.mean((y_true - scores) ** 2))))
        fold_passes.append(report.passes_run)
    return _aggregate(ds.name, ds.n_rows, ds.n_cols, n_cells, folds,
                      fold_bers, fold_rmses, fold_passes, threshold, seed, hp, t0)


def evaluate_corpus(docs: Sequence[TextDoc], hp: Optional[engine.HyperParams] = None,
                    folds: int = 10, seed: int = 0, threshold: float = 0.5,
                    min_count: int = 2, name: str = "corpus") -> EvalReport:
    """Cross-validate a text corpus over its n-gram presence cells.

    Presence cells are all-positive, so held-out evaluation measures the
    miss rate only (the false-positive term of each row is degenerate and
    contributes zero); training still draws sampled negatives.
    """
    t0 = time.perf_counter()
    hp = hp or engine.HyperParams()
    vocab = build_vocab(docs, min_count=min_count)
    cell_rows: list[int] = []
    cell_cols: list[int] = []
    for doc in docs:
        for col in sorted(encode(doc, vocab)):
            cell_rows.append(doc.row_id)
            cell_cols.append(col)
    rows = np.asarray(cell_rows, dtype=np.int64)
    cols = np.asarray(cell_cols, dtype=np.int64)
    n_cells = rows.size
    m, n1 = len(docs), vocab.n1
    fold_ids = kfold_split(n_cells, folds, seed)
    seeds = _fold_seeds(seed, folds)

    fold_bers: list[float] = []
    fold_rmses: list[float] = []
    fold_passes: list[int] = []
    for fold in range(folds):
        test = fold_ids == fold
        store = ObservationStore(m=m, n1=n1, n2=0)
        per_row: list[list[int]] = [[] for _ in range(m)]
        for r, c in zip(rows[~test].tolist(), cols[~test].tolist()):
            per_row[r].append(c)
        for r, row_cols in enumerate(per_row):
            if row_cols:
                store.set_features(r, row_cols)
        model = engine.init_model(m, n1, hp.k, seeds[fold], hp.init_scale)
        report = engine.train(model, store, hp.with_seed(seeds[fold]))
        scores = np.einsum("ij,ij->i", model.row_factors[rows[test]],
                           model.col_factors[cols[test]])
        y_true = np.ones(int(test.sum()), dtype=np.int8)
        y_pred = binarize_scores(scores, threshold)
        fold_bers.append(ber(confusion_by_row(rows[test], y_true, y_pred)))
        fold_rmses.append(float(np.sqrt(np.mean((y_true - scores) ** 2))))
        fold_passes.append(report.passes_run)
    return _aggregate(name, m, n1, n_cells, folds, fold_bers, fold_rmses,
                      fold_passes, threshold, seed, hp, t0)


def run_benchmark(path: str | Path, fmt: str = "csv",
                  hp: Optional[engine.HyperParams] = None, folds: int = 10,
                  seed: int = 0, threshold: float = 0.5,
                  subsample: Optional[int] = None,
                  min_count: int = 2) -> EvalReport:
    """Load a dataset by format and run the cross-validation protocol."""
    if fmt == "movielens":
        return evaluate_ratings(load_movielens(path), hp=hp, folds=folds,
                                seed=seed, threshold=threshold,
                                subsample=subsample)
    if fmt == "csv":
        return evaluate_ratings(load_csv_ratings(path), hp=hp, folds=folds,
                                seed=seed, threshold=threshold,
                                subsample=subsample)
    if fmt == "text":
        docs = load_text_corpus(path)
        return evaluate_corpus(docs, hp=hp, folds=folds, seed=seed,
                               threshold=threshold, min_count=min_count,
                               name=Path(path).stem)
    raise ValueError(f"unknown dataset format {fmt!r}")

"""Rank-k factor learning over the sparse observation matrix.

The model keeps one k-vector per row (text) and one per column (n-gram or
label); a cell prediction is their dot product. Training is seeded
stochastic gradient descent over the observed cells with weight decay,
entry clipping into [-1, +1], zero-target negative sampling on the
presence-only feature block, and validation-based early stopping with
best-snapshot restore.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .store import CellRef, ObservationStore

# Signals an ``on_pass`` callback may return to steer a running fit.
CONTINUE = "continue"
STOP = "stop"
RESET = "reset"


@dataclass(frozen=True)
class HyperParams:
    """Training configuration. Defaults are the benchmark settings."""

    alpha: float = 0.001
    gamma: float = 0.008
    k: int = 16
    init_scale: float = 0.1
    patience: int = 20
    val_fraction: float = 0.05
    max_passes: int = 500
    neg_ratio: int = 1
    correction_epochs: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0 < self.val_fraction < 0.5:
            raise ValueError(f"val_fraction must be in (0, 0.5), got {self.val_fraction}")
        if self.init_scale < 0:
            raise ValueError(f"init_scale must be >= 0, got {self.init_scale}")
        if self.patience < 0:
            raise ValueError(f"patience must be >= 0, got {self.patience}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes}")
        if self.neg_ratio < 0:
            raise ValueError(f"neg_ratio must be >= 0, got {self.neg_ratio}")
        if self.correction_epochs < 0:
            raise ValueError(f"correction_epochs must be >= 0, got {self.correction_epochs}")

    def with_seed(self, seed: int) -> "HyperParams":
        return replace(self, seed=seed)


@dataclass
class FactorModel:
    """Row and column factors of rank k; every entry stays in [-1, +1]."""

    row_factors: np.ndarray  # (m, k)
    col_factors: np.ndarray  # (n, k)

    @property
    def m(self) -> int:
        return self.row_factors.shape[0]

    @property
    def n(self) -> int:
        return self.col_factors.shape[0]

    @property
    def k(self) -> int:
        return self.row_factors.shape[1]

    def copy(self) -> "FactorModel":
        return FactorModel(self.row_factors.copy(), self.col_factors.copy())


@dataclass
class PassStats:
    steps: int
    seconds: float


@dataclass
class TrainReport:
    """Outcome of one fit: pass count, validation trace and stop reason."""

    passes_run: int
    val_rmse_history: list[float]
    stopped_early: bool
    final_train_rmse: float


@dataclass
class PassCost:
    """Measured cost of one sweep, for complexity reporting."""

    observed_cells: int
    steps_per_pass: int
    seconds_per_pass: float


def init_model(m: int, n: int, k: int, seed: int, init_scale: float = 0.1) -> FactorModel:
    """Fresh factors with entries i.i.d. uniform in [-init_scale, +init_scale]."""
    if m < 1 or n < 1 or k < 1:
        raise ValueError(f"dimensions must be >= 1, got m={m} n={n} k={k}")
    rng = np.random.default_rng(seed)
    return FactorModel(
        row_factors=rng.uniform(-init_scale, init_scale, size=(m, k)),
        col_factors=rng.uniform(-init_scale, init_scale, size=(n, k)),
    )


def predict_cell(model: FactorModel, i: int, j: int) -> float:
    """Dot product of row i's and column j's factors."""
    _check_index(i, model.m, "row")
    _check_index(j, model.n, "column")
    return float(_kernels.dot_cell(model.row_factors, model.col_factors, i, j))


def sgd_step(model: FactorModel, i: int, j: int, x: float,
             alpha: float, gamma: float) -> float:
    """One regularized gradient update on cell (i, j) with target ``x``.

    Both factor vectors move by ``alpha * (e * partner - gamma * self)``
    computed from pre-update values (simultaneous update), then every
    touched entry is clipped into [-1, +1]. Returns the pre-update error.
    """
    _check_index(i, model.m, "row")
    _check_index(j, model.n, "column")
    return float(_kernels.apply_step(model.row_factors, model.col_factors,
                                     i, j, float(x), float(alpha), float(gamma)))


def rmse(model: FactorModel, cells: Sequence[CellRef]) -> float:
    """Root mean squared error over the given observed cells."""
    if len(cells) == 0:
        raise ValueError("rmse over an empty cell set is undefined")
    rows = np.fromiter((c.row for c in cells), dtype=np.int64, count=len(cells))
    cols = np.fromiter((c.col for c in cells), dtype=np.int64, count=len(cells))
    vals = np.fromiter((c.value for c in cells), dtype=np.float64, count=len(cells))
    return _rmse_arrays(model, rows, cols, vals)


def _rmse_arrays(model: FactorModel, rows: np.ndarray, cols: np.ndarray,
                 vals: np.ndarray) -> float:
    if rows.size == 0:
        raise ValueError("rmse over an empty cell set is undefined")
    pred = np.einsum("ij,ij->i", model.row_factors[rows], model.col_factors[cols])
    return float(np.sqrt(np.mean((vals - pred) ** 2)))


def train_pass(model: FactorModel, store: ObservationStore, hp: HyperParams,
               rng: np.random.Generator,
               cell_indices: Optional[np.ndarray] = None) -> PassStats:
    """One seeded-shuffled sweep over observed cells (all by default).

    Every feature cell triggers a target-1 update plus ``hp.neg_ratio``
    target-0 updates on sampled empty feature columns of the same row;
    label cells train on their stored 0/1 value.
    """
    _check_dims(model, store)
    rows, cols, vals, f_indptr, f_indices = store.arrays()
    if cell_indices is None:
        cell_indices = np.arange(rows.size, dtype=np.int64)
    order = rng.permutation(cell_indices).astype(np.int64, copy=False)
    state = np.uint64(rng.integers(0, 2**63))
    t0 = time.perf_counter()
    steps, _ = _kernels.sweep(model.row_factors, model.col_factors,
                              rows, cols, vals, order, store.n1,
                              f_indptr, f_indices,
                              hp.alpha, hp.gamma, hp.neg_ratio, state)
    return PassStats(steps=int(steps), seconds=time.perf_counter() - t0)


def train(model: FactorModel, store: ObservationStore, hp: HyperParams,
          on_pass: Optional[Callable[[int, float], Optional[str]]] = None) -> TrainReport:
    """Fit until validation RMSE stalls, then restore the best snapshot.

    Observed cells are split (seeded) into train and validation parts.
    After each sweep the validation RMSE is recorded; once it has not
    improved for ``hp.patience`` consecutive passes, or ``hp.max_passes``
    is reached, the model is rolled back to the best-validation state.

    ``on_pass(pass_no, val_rmse)`` may return STOP to abort the fit or
    RESET to declare that the model was mutated externally (the best
    snapshot is re-based on the current state so the mutation survives
    the final rollback).
    """
    if store.observed_count == 0:
        raise ValueError("cannot train on a store with no observed cells")
    _check_dims(model, store)
    rng = np.random.default_rng(hp.seed)
    rows, cols, vals, _, _ = store.arrays()
    n_cells = rows.size
    perm = rng.permutation(n_cells)
    if n_cells == 1:
        train_idx = val_idx = perm
    else:
        n_val = min(n_cells - 1, max(1, round(hp.val_fraction * n_cells)))
        val_idx, train_idx = perm[:n_val], perm[n_val:]
    val_rows, val_cols, val_vals = rows[val_idx], cols[val_idx], vals[val_idx]

    best_rmse = math.inf
    best_state = model.copy()
    history: list[float] = []
    since_improved = 0
    stopped_early = False
    for pass_no in range(1, hp.max_passes + 1):
        train_pass(model, store, hp, rng, cell_indices=train_idx)
        val_rmse = _rmse_arrays(model, val_rows, val_cols, val_vals)
        history.append(val_rmse)
        if val_rmse < best_rmse:
            best_rmse = val_rmse
            best_state = model.copy()
            since_improved = 0
        else:
            since_improved += 1
        if on_pass is not None:
            signal = on_pass(pass_no, val_rmse)
            if signal == STOP:
                break
            if signal == RESET:
                best_rmse = math.inf
                best_state = model.copy()
                since_improved = 0
                continue
        if since_improved >= hp.patience:
            stopped_early = True
            break

    model.row_factors[:] = best_state.row_factors
    model.col_factors[:] = best_state.col_factors
    final_train_rmse = _rmse_arrays(model, rows[train_idx], cols[train_idx],
                                    vals[train_idx])
    return TrainReport(
        passes_run=len(history),
        val_rmse_history=history,
        stopped_early=stopped_early,
        final_train_rmse=final_train_rmse,
    )


def apply_correction(model: FactorModel, store: ObservationStore, row: int,
                     label_index: int, value: int, hp: HyperParams,
                     rng: Optional[np.random.Generator] = None) -> None:
    """Record a user correction and locally refresh the affected row.

    The label cell is written to the store, then ``hp.correction_epochs``
    shuffled mini-sweeps run over that row's observed cells only (feature
    cells with same-row negative samples, plus its label cells). Other
    rows' factors are untouched; only the column factors this row shares
    move.
    """
    _check_dims(model, store)
    store.set_label(row, label_index, value)
    if rng is None:
        rng = np.random.default_rng(hp.seed)

    f_cols = store.f_row(row)
    l_cells = store.row_labels(row)
    n_cells = f_cols.size + len(l_cells)
    if n_cells == 0 or hp.correction_epochs == 0:
        return
    cell_rows = np.full(n_cells, row, dtype=np.int64)
    cell_cols = np.empty(n_cells, dtype=np.int64)
    cell_vals = np.empty(n_cells, dtype=np.float64)
    cell_cols[:f_cols.size] = f_cols
    cell_vals[:f_cols.size] = 1.0
    for pos, (idx, val) in enumerate(l_cells):
        cell_cols[f_cols.size + pos] = store.n1 + idx
        cell_vals[f_cols.size + pos] = val
    # Membership structure covering just this row; enough for same-row sampling.
    f_indptr = np.zeros(store.m + 1, dtype=np.int64)
    f_indptr[row + 1:] = f_cols.size
    for _ in range(hp.correction_epochs):
        order = rng.permutation(n_cells).astype(np.int64, copy=False)
        state = np.uint64(rng.integers(0, 2**63))
        _kernels.sweep(model.row_factors, model.col_factors,
                       cell_rows, cell_cols, cell_vals, order, store.n1,
                       f_indptr, f_cols, hp.alpha, hp.gamma, hp.neg_ratio, state)


def complexity_probe(store: ObservationStore, hp: HyperParams) -> PassCost:
    """Measure the realized per-pass cost on a scratch model.

    The first sweep warms the compiled kernels; the timed second sweep
    reflects steady-state cost, which is proportional to the observed
    cell count rather than to the full m x n grid.
    """
    model = init_model(max(store.m, 1), max(store.n, 1), hp.k, hp.seed,
                       hp.init_scale)
    rng = np.random.default_rng(hp.seed)
    train_pass(model, store, hp, rng)
    stats = train_pass(model, store, hp, rng)
    return PassCost(
        observed_cells=store.observed_count,
        steps_per_pass=stats.steps,
        seconds_per_pass=stats.seconds,
    )


def _check_index(i: int, bound: int, what: str) -> None:
    if not 0 <= i < bound:
        raise IndexError(f"{what} {i} out of range [0, {bound})")


def _check_dims(model: FactorModel, store: ObservationStore) -> None:
    if model.m != store.m or model.n != store.n:
        raise ValueError(
            f"model dims ({model.m} x {model.n}) do not match "
            f"store dims ({store.m} x {store.n})"
        )

"""Compiled inner loops for factor training.

Everything here operates on plain arrays so the sweeps stay allocation-free.
The update rule lives in ``_step`` and is shared by the bulk sweep and the
single-cell entry points, so there is exactly one implementation of the
arithmetic. Negative sampling uses an inline splitmix64 generator: integer
state in, integer state out, fully deterministic for a given seed.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit(cache=True, inline="always")
def _mix64(state):
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    z = z ^ (z >> _S31)
    return state, z


@njit(cache=True, inline="always")
def _dot(P, Q, i, j):
    s = 0.0
    for w in range(P.shape[1]):
        s += P[i, w] * Q[j, w]
    return s


@njit(cache=True, inline="always")
def _step(P, Q, i, j, x, alpha, gamma):
    # Simultaneous update from pre-update partner values, then clip each
    # entry into [-1, +1]. The decay term is scaled by the learning rate
    # (weight decay inside the gradient step); an unscaled gamma would
    # contract the factors faster than an alpha-sized gradient can grow
    # them, trapping the model at zero for small alpha/gamma ratios.
    e = x - _dot(P, Q, i, j)
    ae = alpha * e
    ag = alpha * gamma
    for w in range(P.shape[1]):
        p = P[i, w]
        q = Q[j, w]
        pn = p + ae * q - ag * p
        qn = q + ae * p - ag * q
        if pn > 1.0:
            pn = 1.0
        elif pn < -1.0:
            pn = -1.0
        if qn > 1.0:
            qn = 1.0
        elif qn < -1.0:
            qn = -1.0
        P[i, w] = pn
        Q[j, w] = qn
    return e


@njit(cache=True, inline="always")
def _sample_empty(f_indices, start, end, n1, state):
    """Uniform unobserved feature column of one row, or -1 if the row is full."""
    n_empty = n1 - (end - start)
    if n_empty <= 0:
        return np.int64(-1), state
    for _ in range(32):
        state, z = _mix64(state)
        j = np.int64(z % np.uint64(n1))
        lo = start
        hi = end
        found = False
        while lo < hi:
            mid = (lo + hi) // 2
            v = f_indices[mid]
            if v == j:
                found = True
                break
            elif v < j:
                lo = mid + 1
            else:
                hi = mid
        if not found:
            return j, state
    # Dense row: walk to the t-th empty column instead of rejecting forever.
    state, z = _mix64(state)
    t = np.int64(z % np.uint64(n_empty))
    ptr = start
    for col in range(n1):
        if ptr < end and f_indices[ptr] == col:
            ptr += 1
            continue
        if t == 0:
            return np.int64(col), state
        t -= 1
    return np.int64(-1), state


@njit(cache=True, nogil=True)
def sweep(P, Q, rows, cols, vals, order, n1, f_indptr, f_indices,
          alpha, gamma, neg_ratio, state):
    """One sequential pass over the cells selected by ``order``.

    Every feature-block cell additionally back-propagates ``neg_ratio``
    zero-target updates on sampled empty columns of the same row. Returns
    the number of updates applied and the advanced RNG state.
    """
    steps = np.int64(0)
    for idx in range(order.shape[0]):
        c = order[idx]
        r = rows[c]
        col = cols[c]
        _step(P, Q, r, col, vals[c], alpha, gamma)
        steps += 1
        if col < n1:
            for _ in range(neg_ratio):
                j, state = _sample_empty(f_indices, f_indptr[r], f_indptr[r + 1],
                                         n1, state)
                if j >= 0:
                    _step(P, Q, r, j, 0.0, alpha, gamma)
                    steps += 1
    return steps, state


@njit(cache=True)
def dot_cell(P, Q, i, j):
    return _dot(P, Q, i, j)


@njit(cache=True)
def apply_step(P, Q, i, j, x, alpha, gamma):
    return _step(P, Q, i, j, x, alpha, gamma)

"""Observation store: cell semantics, shuffling, sampling, stats."""

from collections import Counter

import numpy as np
import pytest

from textfactor.store import CellRef, ObservationStore


def small_store():
    s = ObservationStore(m=3, n1=4, n2=2)
    s.set_features(0, {0, 2})
    s.set_features(1, {1})
    s.set_label(0, 0, 1)
    s.set_label(2, 1, 0)
    return s


# ------------------------------------------------------------- set_label

def test_set_label_first_write_returns_none():
    s = ObservationStore(m=2, n1=0, n2=5)
    assert s.set_label(0, 2, 1) is None
    assert s.get_label(0, 2) == 1


def test_set_label_overwrite_returns_prior():
    s = ObservationStore(m=2, n1=0, n2=5)
    s.set_label(0, 2, 1)
    assert s.set_label(0, 2, 0) == 1
    assert s.get_label(0, 2) == 0
    assert s.l_cell_count == 1


def test_set_label_bound_checks():
    s = ObservationStore(m=2, n1=0, n2=5)
    with pytest.raises(IndexError):
        s.set_label(0, 99, 1)
    with pytest.raises(IndexError):
        s.set_label(5, 0, 1)
    with pytest.raises(ValueError):
        s.set_label(0, 0, 2)


# ---------------------------------------------------------- set_features

def test_set_features_replaces_row():
    s = ObservationStore(m=3, n1=5, n2=0)
    s.set_features(1, {0, 3})
    assert list(s.f_row(1)) == [0, 3]
    s.set_features(1, {2})
    assert list(s.f_row(1)) == [2]
    assert s.f_cell_count == 1


def test_set_features_empty_clears_row():
    s = ObservationStore(m=3, n1=5, n2=0)
    s.set_features(1, {0, 3})
    s.set_features(1, set())
    assert s.f_row(1).size == 0
    assert s.observed_count == 0


def test_set_features_bound_check():
    s = ObservationStore(m=3, n1=5, n2=0)
    with pytest.raises(IndexError):
        s.set_features(1, {5})


# ----------------------------------------------------- shuffled_observed

def test_shuffled_observed_empty_store():
    s = ObservationStore(m=2, n1=3, n2=1)
    assert s.shuffled_observed(seed=0) == []


def test_shuffled_observed_deterministic():
    s = small_store()
    assert s.shuffled_observed(seed=7) == s.shuffled_observed(seed=7)


def test_shuffled_observed_multiset_matches_contents():
    s = small_store()
    cells = s.shuffled_observed(seed=3)
    expected = {
        CellRef(0, 0, 1), CellRef(0, 2, 1), CellRef(1, 1, 1),
        CellRef(0, 4, 1), CellRef(2, 5, 0),
    }
    assert len(cells) == s.observed_count
    assert set(cells) == expected


def test_shuffled_observed_uniform_over_permutations():
    # 3 cells -> 6 permutations; chi-square over 60k seeded shuffles
    s = ObservationStore(m=3, n1=0, n2=1)
    for row in range(3):
        s.set_label(row, 0, 1)
    counts = Counter()
    draws = 60000
    for seed in range(draws):
        counts[tuple(c.row for c in s.shuffled_observed(seed))] += 1
    assert len(counts) == 6
    expected = draws / 6
    stat = sum((obs - expected) ** 2 / expected for obs in counts.values())
    assert stat < 20.52  # chi-square critical value, df=5, p=0.001


# -------------------------------------------------- sample_empty_f_cell

def test_sample_empty_never_observed_and_roughly_uniform():
    s = ObservationStore(m=1, n1=3, n2=0)
    s.set_features(0, {0})
    rng = np.random.default_rng(0)
    counts = Counter(s.sample_empty_f_cell(0, rng) for _ in range(10000))
    assert set(counts) == {1, 2}
    assert abs(counts[1] - 5000) < 300


def test_sample_empty_full_row_returns_none():
    s = ObservationStore(m=1, n1=3, n2=0)
    s.set_features(0, {0, 1, 2})
    rng = np.random.default_rng(0)
    assert s.sample_empty_f_cell(0, rng) is None


def test_sample_empty_forced_choice():
    s = ObservationStore(m=1, n1=1, n2=0)
    rng = np.random.default_rng(0)
    assert all(s.sample_empty_f_cell(0, rng) == 0 for _ in range(20))


def test_sample_empty_dense_row_fallback():
    # 99 of 100 columns observed: rejection nearly always fails, the
    # fallback must still return the single empty column
    s = ObservationStore(m=1, n1=100, n2=0)
    s.set_features(0, set(range(100)) - {37})
    rng = np.random.default_rng(1)
    assert all(s.sample_empty_f_cell(0, rng) == 37 for _ in range(50))


def test_sample_empty_randomized_never_hits_observed():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n1 = int(rng.integers(1, 30))
        s = ObservationStore(m=1, n1=n1, n2=0)
        observed = set(int(c) for c in rng.integers(0, n1, size=rng.integers(0, n1)))
        s.set_features(0, observed)
        for _ in range(50):
            j = s.sample_empty_f_cell(0, rng)
            if j is None:
                assert len(observed) == n1
            else:
                assert j not in observed


# ----------------------------------------------------------------- stats

def test_stats_zero_rate_2x2():
    s = ObservationStore(m=2, n1=0, n2=2)
    s.set_label(0, 0, 1)
    assert s.stats().zero_rate == pytest.approx(0.75)


def test_stats_empty_store():
    s = ObservationStore(m=0, n1=0, n2=0)
    st = s.stats()
    assert st.zero_rate == 1.0
    assert st.observed_count == 0


def test_stats_counts_match_invariant():
    s = small_store()
    st = s.stats()
    assert st.observed_count == s.f_cell_count + s.l_cell_count
    assert st.avg_row_entries == pytest.approx(st.observed_count / s.m)
    assert st.avg_col_entries == pytest.approx(st.observed_count / s.n)


# ------------------------------------------------------------- reshaping

def test_add_rows_and_widen():
    s = small_store()
    s.add_rows(2)
    assert s.m == 5
    s.set_features(4, {0})
    s.widen_features(10)
    s.set_features(4, {9})
    with pytest.raises(ValueError):
        s.widen_features(3)


def test_add_label_and_clear():
    s = ObservationStore(m=2, n1=0, n2=0)
    idx = s.add_label()
    assert idx == 0 and s.n2 == 1
    s.set_label(0, 0, 1)
    s.set_label(1, 0, 0)
    removed = s.clear_label(0)
    assert removed == 2
    assert s.l_cell_count == 0
    assert s.get_label(0, 0) is None


def test_labeled_rows():
    s = small_store()
    assert list(s.labeled_rows(0)) == [0]
    assert list(s.labeled_rows(1)) == [2]


def test_bulk_set_labels_matches_loop():
    rng = np.random.default_rng(11)
    rows = rng.integers(0, 50, size=200)
    labels = rng.integers(0, 8, size=200)
    values = rng.integers(0, 2, size=200)
    bulk = ObservationStore(m=50, n1=0, n2=8)
    bulk.bulk_set_labels(rows, labels, values)
    loop = ObservationStore(m=50, n1=0, n2=8)
    for r, l, v in zip(rows, labels, values):
        loop.set_label(int(r), int(l), int(v))
    assert bulk.label_cells() == loop.label_cells()


def test_bulk_set_labels_validates():
    s = ObservationStore(m=2, n1=0, n2=2)
    with pytest.raises(IndexError):
        s.bulk_set_labels(np.array([5]), np.array([0]), np.array([1]))
    with pytest.raises(ValueError):
        s.bulk_set_labels(np.array([0]), np.array([0]), np.array([3]))


# ----------------------------------------------------------- array views

def test_arrays_base_order_and_cache():
    s = small_store()
    rows, cols, vals, f_indptr, f_indices = s.arrays()
    # feature cells row-major first, then label cells by (row, label)
    assert rows.tolist() == [0, 0, 1, 0, 2]
    assert cols.tolist() == [0, 2, 1, 4, 5]
    assert vals.tolist() == [1.0, 1.0, 1.0, 1.0, 0.0]
    assert f_indptr.tolist() == [0, 2, 3, 3]
    assert f_indices.tolist() == [0, 2, 1]
    again = s.arrays()
    assert again[0] is rows  # cached until mutation
    s.set_label(1, 0, 1)
    assert s.arrays()[0] is not rows


def test_row_labels():
    s = small_store()
    assert s.row_labels(0) == [(0, 1)]
    assert s.row_labels(2) == [(1, 0)]
    assert s.row_labels(1) == []

"""Session behavior: imports, labels, annotations, persistence, worker."""

import json

import numpy as np
import pytest

from textfactor.datasets import ParseError
from textfactor.engine import HyperParams
from textfactor.session import (ConflictError, MigrationError, NotFoundError,
                                PayloadTooLargeError, Session)

CORPUS = """great network coverage here
great network coverage now
bad billing portal today
bad billing portal again
slow delivery speed as usual
slow delivery speed again
"""


def fresh_session(**kw):
    kw.setdefault("hp", HyperParams(alpha=0.05, gamma=0.001, k=4, seed=1,
                                    max_passes=20, patience=2))
    kw.setdefault("start_worker", False)
    return Session(**kw)


# ---------------------------------------------------------------- importing

def test_import_summary_counts():
    s = fresh_session()
    summary = s.import_corpus("one line\nanother line\nthird line")
    assert summary["m"] == 3
    assert summary["added_texts"] == 3


def test_import_empty_payload_errors():
    s = fresh_session()
    with pytest.raises(ParseError):
        s.import_corpus("")


def test_import_no_repeating_ngram_warns():
    s = fresh_session()
    summary = s.import_corpus("completely unique words\nother distinct tokens")
    assert summary["n1"] == 0
    assert "warning" in summary


def test_import_csv_corpus():
    s = fresh_session()
    summary = s.import_corpus("id,body\n1,first text\n2,second text\n",
                              fmt="csv", text_column="body")
    assert summary["m"] == 2
    assert s.corpus[1].raw == "second text"


def test_reimport_appends_and_extends_vocabulary():
    s = fresh_session()
    s.import_corpus("alpha beta\ngamma delta")
    n1_before = s.vocab.n1  # nothing repeats yet
    assert n1_before == 0
    # second batch repeats "alpha beta" -> it now qualifies, old rows re-encode
    summary = s.import_corpus("alpha beta\nepsilon zeta")
    assert summary["m"] == 4
    assert s.vocab.n1 > 0
    assert "alpha beta" in s.vocab.terms
    col = s.vocab.terms["alpha beta"]
    assert col in set(s.store.f_row(0).tolist())  # old row gained the feature


def test_import_payload_limit():
    s = fresh_session(max_payload_bytes=10)
    with pytest.raises(PayloadTooLargeError):
        s.import_corpus("this payload is longer than ten bytes")


def test_import_keeps_surviving_factors():
    s = fresh_session()
    s.import_corpus(CORPUS)
    label = s.create_label("topic")
    s.run_training()
    model_before, _ = s.snapshot_model()
    row0_before = model_before.row_factors[0].copy()
    label_col_before = model_before.col_factors[s.store.n1 + label.label_id].copy()
    s.import_corpus("great network coverage later\nbad billing portal once more")
    model_after, _ = s.snapshot_model()
    assert model_after.m == 8
    np.testing.assert_array_equal(model_after.row_factors[0], row0_before)
    np.testing.assert_array_equal(
        model_after.col_factors[s.store.n1 + label.label_id], label_col_before)


# ------------------------------------------------------------------- labels

def test_create_list_delete_label():
    s = fresh_session()
    s.import_corpus(CORPUS)
    a = s.create_label("positive opinion")
    b = s.create_label("efficiency")
    assert [l.name for l in s.list_labels()] == ["positive opinion", "efficiency"]
    assert b.label_id == a.label_id + 1
    s.delete_label(a.label_id)
    assert [l.name for l in s.list_labels()] == ["efficiency"]
    with pytest.raises(NotFoundError):
        s.delete_label(a.label_id)


def test_create_duplicate_label_conflicts():
    s = fresh_session()
    s.create_label("dup")
    with pytest.raises(ConflictError):
        s.create_label("dup")


def test_deleted_label_cells_dropped_but_column_retired():
    s = fresh_session()
    s.import_corpus(CORPUS)
    label = s.create_label("tmp")
    s.annotate(0, label.label_id, 1)
    n2_before = s.store.n2
    s.delete_label(label.label_id)
    assert s.store.n2 == n2_before          # column retired, not compacted
    assert s.store.get_label(0, label.label_id) is None
    replacement = s.create_label("tmp")     # name reusable after retirement
    assert replacement.label_id != label.label_id


# -------------------------------------------------------------- annotations

def test_annotate_roundtrip_and_overwrite():
    s = fresh_session()
    s.import_corpus(CORPUS)
    label = s.create_label("networks")
    ack = s.annotate(0, label.label_id, 1)
    assert ack["refreshed"] is True
    assert s.store.get_label(0, label.label_id) == 1
    s.annotate(0, label.label_id, 0)
    assert s.store.get_label(0, label.label_id) == 0
    assert s.events[-1].supersedes == s.events[-2].seq


def test_annotate_validates():
    s = fresh_session()
    s.import_corpus(CORPUS)
    label = s.create_label("x")
    with pytest.raises(ValueError):
        s.annotate(0, label.label_id, 2)
    with pytest.raises(NotFoundError):
        s.annotate(99, label.label_id, 1)
    with pytest.raises(NotFoundError):
        s.annotate(0, 42, 1)


def test_annotation_log_folds_to_store_cells():
    s = fresh_session()
    s.import_corpus(CORPUS)
    a = s.create_label("a")
    b = s.create_label("b")
    s.annotate(0, a.label_id, 1)
    s.annotate(1, a.label_id, 0)
    s.annotate(0, a.label_id, 0)       # correction
    s.annotate(2, b.label_id, 1)
    s.delete_label(a.label_id)         # tombstone drops a's cells
    s.annotate(3, b.label_id, 0)
    folded = s.fold_annotation_log()
    stored = {(r, l): v for r, l, v in s.store.label_cells()}
    assert folded == stored == {(2, b.label_id): 1, (3, b.label_id): 0}


def test_annotate_moves_scores():
    s = fresh_session()
    s.import_corpus(CORPUS)
    label = s.create_label("networks")
    s.run_training()
    before = s.text_scores(0)["scores"][0]["score"]
    s.annotate(0, label.label_id, 1)
    after = s.text_scores(0)["scores"][0]["score"]
    assert abs(1.0 - after) < abs(1.0 - before)


# ------------------------------------------------------------------ queries

def test_top_texts_shape_and_exclusion():
    s = fresh_session()
    s.import_corpus(CORPUS)
    label = s.create_label("networks")
    s.annotate(0, label.label_id, 1)
    s.run_training()
    view = s.top_texts(label.label_id, limit=10)
    assert view["label_id"] == label.label_id
    ids = [item["row_id"] for item in view["items"]]
    assert 0 not in ids                    # annotated row excluded
    assert len(ids) == 5
    included = s.top_texts(label.label_id, limit=10, include_annotated=True)
    assert len(included["items"]) == 6
    assert all("raw" in item for item in view["items"])


def test_text_scores_view():
    s = fresh_session()
    s.import_corpus(CORPUS)
    a = s.create_label("a")
    s.create_label("b")
    s.annotate(2, a.label_id, 1)
    view = s.text_scores(2)
    assert view["row_id"] == 2
    assert [e["name"] for e in view["scores"]] == ["a", "b"]
    assert view["scores"][0]["annotated"] == 1
    assert view["scores"][1]["annotated"] is None
    with pytest.raises(NotFoundError):
        s.text_scores(50)


def test_status_lifecycle_sync():
    s = fresh_session()
    assert s.status().state == "idle"
    s.import_corpus(CORPUS)
    s.run_training()
    st = s.status()
    assert st.state == "converged"
    assert st.total_passes > 0
    assert st.m == 6


# ------------------------------------------------------------------- export

def test_export_columns_and_consistency():
    s = fresh_session()
    s.import_corpus(CORPUS)
    a = s.create_label("net")
    b = s.create_label("billing")
    s.annotate(0, a.label_id, 1)
    s.run_training()
    csv_text = s.export_csv()
    lines = csv_text.splitlines()
    assert lines[0] == "text_id,raw_text,score:net,score:billing,ann:net,ann:billing"
    assert len(lines) == 1 + 6
    # exported score equals the live per-text score at the same snapshot
    first = lines[1].split(",")
    view = s.text_scores(0)
    assert float(first[2]) == view["scores"][0]["score"]
    assert first[4] == "1"


def test_export_zero_labels():
    s = fresh_session()
    s.import_corpus("one text\nanother text")
    csv_text = s.export_csv([])
    assert csv_text.splitlines()[0] == "text_id,raw_text"


def test_export_reimport_roundtrip():
    s = fresh_session()
    s.import_corpus(CORPUS)
    a = s.create_label("net")
    b = s.create_label("billing")
    s.annotate(0, a.label_id, 1)
    s.annotate(3, b.label_id, 0)
    s.annotate(5, a.label_id, 0)
    exported = s.export_csv()

    t = fresh_session()
    t.import_corpus(CORPUS)
    applied = t.import_annotations(exported)
    assert applied == 3
    assert {(r, l.name, v) for r, li, v in t.store.label_cells()
            for l in t.list_labels() if l.label_id == li} == \
           {(0, "net", 1), (5, "net", 0), (3, "billing", 0)}


def test_import_annotations_triples():
    s = fresh_session()
    s.import_corpus(CORPUS)
    applied = s.import_annotations("row_id,label,value\n0,net,1\n2,net,0\n")
    assert applied == 2
    assert [l.name for l in s.list_labels()] == ["net"]


# -------------------------------------------------------------- persistence

def test_persist_restore_scores_bit_exact(tmp_path):
    s = fresh_session()
    s.import_corpus(CORPUS)
    label = s.create_label("net")
    s.annotate(0, label.label_id, 1)
    s.run_training()
    s.persist(tmp_path / "sess")
    restored = Session.restore(tmp_path / "sess", start_worker=False)
    for row in range(6):
        assert restored.text_scores(row) == s.text_scores(row)
    assert restored.export_csv() == s.export_csv()
    assert restored.status().state == "converged"
    assert restored.fold_annotation_log() == s.fold_annotation_log()


def test_restore_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        Session.restore(tmp_path / "missing")


def test_restore_version_mismatch(tmp_path):
    s = fresh_session()
    s.import_corpus("a b\na b")
    s.persist(tmp_path / "sess")
    manifest = json.loads((tmp_path / "sess" / "manifest.json").read_text())
    manifest["format_version"] = 99
    (tmp_path / "sess" / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(MigrationError):
        Session.restore(tmp_path / "sess")


def test_persist_without_data_dir_errors():
    s = fresh_session()
    with pytest.raises(ValueError):
        s.persist()


# ------------------------------------------------------------- worker mode

def test_worker_trains_after_import():
    with Session(hp=HyperParams(alpha=0.05, gamma=0.001, k=4, seed=1,
                                max_passes=30, patience=2)) as s:
        s.import_corpus(CORPUS)
        assert s.wait_converged(timeout=30)
        st = s.status()
        assert st.state == "converged"
        assert st.snapshot_pass > 0


def test_worker_annotation_ack_refreshed():
    with Session(hp=HyperParams(alpha=0.05, gamma=0.001, k=4, seed=1,
                                max_passes=30, patience=2)) as s:
        s.import_corpus(CORPUS)
        s.wait_converged(timeout=30)
        label = s.create_label("net")
        ack = s.annotate(0, label.label_id, 1)
        assert ack["refreshed"] is True
        assert ack["scores"][0]["annotated"] == 1
        assert s.wait_converged(timeout=30)


def test_worker_snapshot_pass_monotonic():
    with Session(hp=HyperParams(alpha=0.05, gamma=0.001, k=4, seed=1,
                                max_passes=30, patience=2)) as s:
        s.import_corpus(CORPUS)
        seen = []
        for _ in range(200):
            seen.append(s.status().snapshot_pass)
            if s.wait_converged(timeout=0.02):
                break
        seen.append(s.status().snapshot_pass)
        assert all(a <= b for a, b in zip(seen, seen[1:]))

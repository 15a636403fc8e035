"""CLI subcommands: exit codes, determinism, session round trips."""

import json

import numpy as np
import pytest

from textfactor.cli import main

CORPUS = """great network coverage here
great network coverage now
bad billing portal today
bad billing portal again
slow delivery speed as usual
slow delivery speed again
"""


def write_ratings_csv(path, m=30, n=20, seed=0):
    rng = np.random.default_rng(seed)
    P = rng.uniform(-0.5, 0.5, (m, 2))
    Q = rng.uniform(-0.5, 0.5, (n, 2))
    X = P @ Q.T
    lines = ["row,col,rating"]
    for i in range(m):
        for j in range(n):
            rating = 1.0 + 4.0 * (X[i, j] - X.min()) / (X.max() - X.min())
            lines.append(f"{i},{j},{rating:.3f}")
    path.write_text("\n".join(lines) + "\n")


FAST = ["--alpha", "0.05", "--gamma", "0.001", "--k", "4",
        "--max-passes", "20", "--patience", "2", "--seed", "3"]


def test_eval_writes_report(tmp_path, capsys):
    data = tmp_path / "ratings.csv"
    write_ratings_csv(data)
    out = tmp_path / "report.json"
    code = main(["eval", "--path", str(data), "--format", "csv",
                 "--folds", "2", "--json-out", str(out)] + FAST)
    assert code == 0
    report = json.loads(out.read_text())
    for key in ("dataset", "m", "n", "nnz", "zero_rate", "ber_mean",
                "ber_std", "rmse_mean", "passes"):
        assert key in report
    assert "BER" in capsys.readouterr().out


def test_eval_single_fold_is_user_error(tmp_path, capsys):
    data = tmp_path / "ratings.csv"
    write_ratings_csv(data)
    code = main(["eval", "--path", str(data), "--folds", "1"] + FAST)
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_eval_missing_file_is_user_error(tmp_path):
    assert main(["eval", "--path", str(tmp_path / "nope.csv")] + FAST) == 1


def test_eval_bad_hyperparams_is_user_error(tmp_path):
    data = tmp_path / "ratings.csv"
    write_ratings_csv(data)
    assert main(["eval", "--path", str(data), "--alpha", "-1"]) == 1


def test_eval_deterministic_reports(tmp_path):
    data = tmp_path / "ratings.csv"
    write_ratings_csv(data)
    out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out_a, out_b):
        assert main(["eval", "--path", str(data), "--folds", "2",
                     "--json-out", str(out)] + FAST) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_train_predict_export_roundtrip(tmp_path, capsys):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text(CORPUS)
    annotations = tmp_path / "ann.csv"
    annotations.write_text("row_id,label,value\n0,net,1\n2,net,0\n")
    session_dir = tmp_path / "session"

    code = main(["train", "--path", str(corpus), "--annotations",
                 str(annotations), "--session-dir", str(session_dir)] + FAST)
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["m"] == 6
    assert summary["annotations"] == 2
    assert summary["passes"] >= 1

    code = main(["predict", "--session-dir", str(session_dir),
                 "--label", "net", "--top", "3", "--json"])
    assert code == 0
    view = json.loads(capsys.readouterr().out)
    assert len(view["items"]) == 3

    code = main(["predict", "--session-dir", str(session_dir), "--row", "0"])
    assert code == 0
    assert "net" in capsys.readouterr().out

    out_csv = tmp_path / "export.csv"
    code = main(["export", "--session-dir", str(session_dir),
                 "--labels", "net", "--out", str(out_csv)])
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "text_id,raw_text,score:net,ann:net"
    assert len(lines) == 7


def test_train_empty_corpus_is_user_error(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("")
    assert main(["train", "--path", str(corpus),
                 "--session-dir", str(tmp_path / "s")] + FAST) == 1


def test_predict_requires_exactly_one_target(tmp_path):
    assert main(["predict", "--session-dir", str(tmp_path)]) == 1


def test_predict_unknown_session_is_user_error(tmp_path):
    assert main(["predict", "--session-dir", str(tmp_path / "nope"),
                 "--label", "x"]) == 1


def test_predict_unknown_label_is_user_error(tmp_path, capsys):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text(CORPUS)
    session_dir = tmp_path / "session"
    main(["train", "--path", str(corpus), "--session-dir",
          str(session_dir)] + FAST)
    capsys.readouterr()
    assert main(["predict", "--session-dir", str(session_dir),
                 "--label", "missing"]) == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "eval" in capsys.readouterr().out


def test_unknown_command_is_user_error(capsys):
    assert main(["frobnicate"]) == 1

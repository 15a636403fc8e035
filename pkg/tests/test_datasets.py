"""Dataset loaders: formats, id densification, parse errors with locations."""

import numpy as np
import pytest

from textfactor.datasets import (ParseError, RatingsDataset, load_csv_corpus,
                                 load_csv_ratings, load_movielens,
                                 load_text_corpus, parse_csv_corpus,
                                 parse_text_corpus)


def test_movielens_line_format(tmp_path):
    path = tmp_path / "ratings.dat"
    path.write_text("1::1193::5::978300760\n1::661::3::978302109\n"
                    "2::1193::4::978298413\n")
    ds = load_movielens(path)
    assert ds.nnz == 3
    assert ds.n_rows == 2   # users 1, 2
    assert ds.n_cols == 2   # items 661, 1193
    # dense ids follow sorted raw ids
    assert ds.rows.tolist() == [0, 0, 1]
    assert ds.cols.tolist() == [1, 0, 1]
    assert ds.ratings.tolist() == [5.0, 3.0, 4.0]


def test_movielens_accepts_directory(tmp_path):
    (tmp_path / "ratings.dat").write_text("7::9::1::0\n8::9::2::0\n")
    ds = load_movielens(tmp_path)
    assert ds.nnz == 2


def test_movielens_malformed_line_reports_location(tmp_path):
    path = tmp_path / "ratings.dat"
    path.write_text("1::2::3::4\nbroken-line\n")
    with pytest.raises(ParseError) as err:
        load_movielens(path)
    assert "line 2" in str(err.value)


def test_movielens_empty_file_errors(tmp_path):
    path = tmp_path / "ratings.dat"
    path.write_text("")
    with pytest.raises(ParseError):
        load_movielens(path)


def test_movielens_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_movielens(tmp_path / "nope.dat")


def test_csv_ratings_with_header(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("row,col,rating\n0,0,4\n0,1,2\n1,0,5\n")
    ds = load_csv_ratings(path)
    assert ds.nnz == 3
    assert ds.ratings.tolist() == [4.0, 2.0, 5.0]


def test_csv_ratings_without_header(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("0,0,4\n1,1,1\n")
    assert load_csv_ratings(path).nnz == 2


def test_csv_ratings_malformed_reports_line(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("0,0,4\n1,oops,2\n")
    with pytest.raises(ParseError) as err:
        load_csv_ratings(path)
    assert "line 2" in str(err.value)


def test_duplicate_cells_rejected():
    with pytest.raises(ValueError):
        RatingsDataset(name="dup",
                       rows=np.array([0, 0]), cols=np.array([1, 1]),
                       ratings=np.array([1.0, 2.0]), n_rows=1, n_cols=2)


def test_text_corpus_one_doc_per_line(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("first text\nsecond text\n\nfourth after a blank\n")
    docs = load_text_corpus(path)
    assert [d.row_id for d in docs] == [0, 1, 2, 3]
    assert docs[2].raw == ""
    assert docs[3].tokens[0] == "fourth"


def test_text_corpus_empty_file_is_empty_corpus(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("")
    assert load_text_corpus(path) == []


def test_parse_text_corpus_row_ids():
    docs = parse_text_corpus("a\nb")
    assert [(d.row_id, d.raw) for d in docs] == [(0, "a"), (1, "b")]


def test_csv_corpus_text_column(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text('id,body,author\n1,"hello, world",ann\n2,more text,bob\n')
    docs = load_csv_corpus(path, text_column="body")
    assert [d.raw for d in docs] == ["hello, world", "more text"]


def test_csv_corpus_missing_column():
    with pytest.raises(ParseError) as err:
        parse_csv_corpus("a,b\n1,2\n", text_column="body")
    assert "line 1" in str(err.value)


def test_csv_corpus_short_row_reports_line():
    with pytest.raises(ParseError) as err:
        parse_csv_corpus("a,body\n1,x\n2\n", text_column="body")
    assert "line 3" in str(err.value)

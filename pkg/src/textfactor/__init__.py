"""Interactive multi-label classification of short texts.

A corpus is encoded as presence cells over a frequency-filtered 1-3-gram
vocabulary, user annotations become explicit 0/1 label cells in the same
sparse block matrix, and seeded stochastic gradient descent factorizes the
observed cells to score every (text, label) pair. Corrections feed back
into the live model, and a cross-validation harness benchmarks the
balanced error rate on ratings matrices.
"""

from .engine import (FactorModel, HyperParams, PassCost, PassStats,
                     TrainReport, apply_correction, complexity_probe,
                     init_model, predict_cell, rmse, sgd_step, train,
                     train_pass)
from .evaluation import (ConfusionCounts, EvalReport, ber, binarize_ratings,
                         binarize_scores, confusion_by_row, evaluate_corpus,
                         evaluate_ratings, kfold_split, run_benchmark)
from .datasets import (ParseError, RatingsDataset, load_csv_corpus,
                       load_csv_ratings, load_movielens, load_text_corpus,
                       parse_csv_corpus, parse_text_corpus)
from .featurize import (NGramVocab, TextDoc, build_vocab, encode,
                        extract_ngrams, tokenize)
from .ranking import (ScoredItem, full_label_block, top_labels_for_text,
                      top_texts_for_label)
from .store import CellRef, ObservationStore, StoreStats

__version__ = "0.1.0"

__all__ = [
    "CellRef",
    "ConfusionCounts",
    "EvalReport",
    "FactorModel",
    "HyperParams",
    "NGramVocab",
    "ObservationStore",
    "ParseError",
    "PassCost",
    "PassStats",
    "RatingsDataset",
    "ScoredItem",
    "StoreStats",
    "TextDoc",
    "TrainReport",
    "apply_correction",
    "ber",
    "binarize_ratings",
    "binarize_scores",
    "build_vocab",
    "complexity_probe",
    "confusion_by_row",
    "encode",
    "evaluate_corpus",
    "evaluate_ratings",
    "extract_ngrams",
    "full_label_block",
    "init_model",
    "kfold_split",
    "load_csv_corpus",
    "load_csv_ratings",
    "load_movielens",
    "load_text_corpus",
    "parse_csv_corpus",
    "parse_text_corpus",
    "predict_cell",
    "rmse",
    "run_benchmark",
    "sgd_step",
    "tokenize",
    "top_labels_for_text",
    "top_texts_for_label",
    "train",
    "train_pass",
]

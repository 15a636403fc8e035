"""N-gram featurization of short texts.

Texts are lowercased and split on runs of non-alphanumeric characters, so
tokens like "4g" survive intact while punctuation disappears. Every
contiguous 1- to 3-gram of the token stream becomes a candidate feature;
n-grams seen fewer than ``min_count`` times across the whole corpus are
dropped and the survivors are numbered as the feature columns of the
observation matrix.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

# Unicode-aware: any alphanumeric run is a token, underscore is a separator.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_MIN_COUNT = 2
DEFAULT_ORDERS = (1, 3)


def tokenize(raw: str) -> list[str]:
    """Lowercase ``raw`` and split it on maximal non-alphanumeric runs."""
    return _TOKEN_RE.findall(raw.lower())


def extract_ngrams(tokens: Sequence[str], orders: tuple[int, int] = DEFAULT_ORDERS) -> list[str]:
    """All contiguous n-grams of the given order range, space-joined.

    Duplicates are kept: a token list of length t yields
    t + max(t-1, 0) + max(t-2, 0) entries for the default 1..3 range.
    """
    lo, hi = orders
    t = len(tokens)
    out: list[str] = []
    for n in range(lo, hi + 1):
        for i in range(t - n + 1):
            out.append(" ".join(tokens[i:i + n]))
    return out


@dataclass
class TextDoc:
    """One short text with a stable row id; ``tokens`` is derived from ``raw``."""

    row_id: int
    raw: str
    tokens: list[str] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.row_id < 0:
            raise ValueError(f"row_id must be non-negative, got {self.row_id}")
        self.tokens = tokenize(self.raw)


class NGramVocab:
    """Bidirectional n-gram <-> column-id map over the retained n-grams.

    Column ids are dense in [0, n1) and assigned in lexicographic order of
    the n-gram string. Occurrence counts are kept so that later corpus
    batches can extend the vocabulary without renumbering: n-grams that
    newly reach ``min_count`` get fresh ids appended after the existing
    block (lexicographic among themselves).
    """

    def __init__(self, min_count: int = DEFAULT_MIN_COUNT,
                 orders: tuple[int, int] = DEFAULT_ORDERS) -> None:
        if min_count < 1:
            raise ValueError(f"min_count must be >= 1, got {min_count}")
        self.min_count = min_count
        self.orders = orders
        self.terms: dict[str, int] = {}
        self.counts: Counter[str] = Counter()
        self._id_to_term: list[str] = []

    @property
    def n1(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def column_of(self, term: str) -> int:
        return self.terms[term]

    def term_of(self, col: int) -> str:
        return self._id_to_term[col]

    def extend(self, docs: Iterable[TextDoc]) -> int:
        """Count ``docs`` and append every newly-qualifying n-gram.

        Occurrences are totals over the corpus: repeats inside one text
        each count. Returns the number of columns added; existing column
        ids never change.
        """
        for doc in docs:
            self.counts.update(extract_ngrams(doc.tokens, self.orders))
        fresh = sorted(
            term for term, cnt in self.counts.items()
            if cnt >= self.min_count and term not in self.terms
        )
        for term in fresh:
            self.terms[term] = len(self._id_to_term)
            self._id_to_term.append(term)
        return len(fresh)


def build_vocab(corpus: Iterable[TextDoc], min_count: int = DEFAULT_MIN_COUNT,
                orders: tuple[int, int] = DEFAULT_ORDERS) -> NGramVocab:
    """Build the retained-n-gram vocabulary for ``corpus``.

    An empty corpus yields an empty (valid) vocabulary.
    """
    vocab = NGramVocab(min_count=min_count, orders=orders)
    vocab.extend(corpus)
    return vocab


def encode(doc: TextDoc, vocab: NGramVocab) -> set[int]:
    """Column ids of the in-vocabulary n-grams present in ``doc``.

    Presence only: multiplicity is discarded and out-of-vocabulary
    n-grams are silently skipped.
    """
    terms = vocab.terms
    return {terms[g] for g in extract_ngrams(doc.tokens, vocab.orders) if g in terms}

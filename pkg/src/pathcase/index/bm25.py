"""Okapi BM25 over an inverted index.

score(q, d) = sum over query tokens of
    idf(t) * tf / (tf + k1 * (1 - b + b * len(d) / avg_len))
with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)). Note the numerator is
plain tf, not tf * (k1 + 1); rankings are unchanged but absolute scores
differ from implementations that include the constant factor.

Tokenization is deliberately blunt: lowercase, split on whitespace, strip
punctuation off token edges. Interior punctuation survives, so "ttf-1" and
"her2/neu" stay intact.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import DuplicateId
from .dense import ScoredId

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75

_EDGE_PUNCT = ".,;:!?()[]{}'\"`<>"


def tokenize(text: str) -> list[str]:
    tokens = []
    for raw in text.lower().split():
        token = raw.strip(_EDGE_PUNCT)
        if token:
            tokens.append(token)
    return tokens


@dataclass
class Bm25Index:
    doc_ids: list[str]
    doc_lengths: list[int]
    avg_doc_length: float
    postings: dict[str, list[tuple[int, int]]]  # term -> [(row, tf)], rows ascending
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    _df: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._df:
            self._df = {t: len(p) for t, p in self.postings.items()}

    def __len__(self) -> int:
        return len(self.doc_ids)

    def idf(self, term: str) -> float:
        df = self._df.get(term, 0)
        n = len(self.doc_ids)
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def build_bm25_index(
    doc_ids: Sequence[str],
    texts: Sequence[str],
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> Bm25Index:
    if len(doc_ids) != len(texts):
        raise ValueError(f"{len(doc_ids)} ids but {len(texts)} texts")
    if len(set(doc_ids)) != len(doc_ids):
        dupes = [d for d, c in Counter(doc_ids).items() if c > 1]
        raise DuplicateId(f"duplicate document ids: {dupes[:5]}")

    postings: dict[str, list[tuple[int, int]]] = {}
    lengths: list[int] = []
    for row, text in enumerate(texts):
        tokens = tokenize(text)
        lengths.append(len(tokens))
        for term, tf in sorted(Counter(tokens).items()):
            postings.setdefault(term, []).append((row, tf))

    avg = (sum(lengths) / len(lengths)) if lengths else 0.0
    return Bm25Index(
        doc_ids=list(doc_ids),
        doc_lengths=lengths,
        avg_doc_length=avg,
        postings=postings,
        k1=k1,
        b=b,
    )


def bm25_scores(index: Bm25Index, query_tokens: Sequence[str]) -> dict[str, float]:
    """Raw scores for every document matching at least one query token."""
    if not query_tokens or not index.doc_ids:
        return {}
    acc: dict[int, float] = {}
    avg = index.avg_doc_length
    for term in query_tokens:
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = index.idf(term)
        for row, tf in plist:
            denom = tf + index.k1 * (1.0 - index.b + index.b * index.doc_lengths[row] / avg)
            acc[row] = acc.get(row, 0.0) + idf * tf / denom
    return {index.doc_ids[row]: score for row, score in acc.items()}


def bm25_topk(index: Bm25Index, query_tokens: Sequence[str], k: int) -> list[ScoredId]:
    if k <= 0:
        return []
    scored = bm25_scores(index, query_tokens)
    ranked = sorted(scored.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return [ScoredId(id=d, score=s, owner_report_id=d) for d, s in ranked]

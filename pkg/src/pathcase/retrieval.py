"""Hybrid retrieval: dense report signal, dense chunk signal, BM25.

Each report's fused score is a convex combination

    fused = a_doc * s_doc + a_chunk * s_chunk + a_bm25 * s_bm25

where s_doc and s_chunk are the best inner products among the report's
document and chunk vectors in the backend top-k lists, and s_bm25 is the
raw BM25 score divided by the per-query maximum. A report missing from a
backend list contributes 0 for that component. The candidate pool is the
union of the three lists; ties break toward the smaller report id.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .errors import EmptyInput, InvalidConfig
from .index.bm25 import Bm25Index, bm25_scores, tokenize
from .index.dense import DenseIndex, ScoredId, dense_topk
from .ingest.corpus import CorpusStore

DEFAULT_K_BACKEND = 200
DEFAULT_K_FINAL = 10
SNIPPET_CHARS = 200


@dataclass(frozen=True)
class FusionWeights:
    alpha_doc: float = 0.5
    alpha_chunk: float = 0.3
    alpha_bm25: float = 0.2

    def __post_init__(self) -> None:
        for name, value in (
            ("alpha_doc", self.alpha_doc),
            ("alpha_chunk", self.alpha_chunk),
            ("alpha_bm25", self.alpha_bm25),
        ):
            if not 0.0 <= value <= 1.0:
                raise InvalidConfig(f"{name} must be in [0, 1], got {value}")
        total = self.alpha_doc + self.alpha_chunk + self.alpha_bm25
        if abs(total - 1.0) > 1e-9:
            raise InvalidConfig(f"fusion weights must sum to 1, got {total!r}")


@dataclass(frozen=True)
class RankedHit:
    report_id: str
    fused: float
    s_doc: float
    s_chunk: float
    s_bm25: float
    best_chunk_id: str | None = None
    best_chunk_section: str | None = None
    snippet: str = ""


@dataclass(frozen=True)
class SearchRequest:
    query_text: str
    k_final: int = DEFAULT_K_FINAL
    k_backend: int = DEFAULT_K_BACKEND
    weights: FusionWeights = field(default_factory=FusionWeights)


@dataclass
class RetrievalBackends:
    doc_index: DenseIndex
    chunk_index: DenseIndex
    bm25_index: Bm25Index


def compute_s_doc(hits: Sequence[ScoredId]) -> dict[str, float]:
    """Best document-vector score per report (max over the report's rows)."""
    best: dict[str, float] = {}
    for hit in hits:
        prev = best.get(hit.owner_report_id)
        if prev is None or hit.score > prev:
            best[hit.owner_report_id] = hit.score
    return best


def compute_s_chunk(hits: Sequence[ScoredId]) -> dict[str, tuple[float, str]]:
    """Best chunk score per report with the winning chunk id.

    On equal scores the lexicographically smaller chunk id wins, matching
    the index's own tie rule.
    """
    best: dict[str, tuple[float, str]] = {}
    for hit in hits:
        prev = best.get(hit.owner_report_id)
        if prev is None or hit.score > prev[0] or (hit.score == prev[0] and hit.id < prev[1]):
            best[hit.owner_report_id] = (hit.score, hit.id)
    return best


def normalize_bm25(raw: Mapping[str, float]) -> dict[str, float]:
    """Scale raw BM25 scores into [0, 1] by the per-query maximum."""
    if not raw:
        return {}
    top = max(raw.values())
    if top <= 0.0:
        return {doc_id: 0.0 for doc_id in raw}
    return {doc_id: score / top for doc_id, score in raw.items()}


def fuse(
    s_doc: Mapping[str, float],
    s_chunk: Mapping[str, tuple[float, str]],
    s_bm25: Mapping[str, float],
    weights: FusionWeights,
) -> list[RankedHit]:
    """Combine per-backend scores over the union of candidates, descending."""
    candidates = set(s_doc) | set(s_chunk) | set(s_bm25)
    hits: list[RankedHit] = []
    for report_id in candidates:
        d = s_doc.get(report_id, 0.0)
        c, chunk_id = s_chunk.get(report_id, (0.0, None))
        sparse = s_bm25.get(report_id, 0.0)
        fused = weights.alpha_doc * d + weights.alpha_chunk * c + weights.alpha_bm25 * sparse
        hits.append(
            RankedHit(
                report_id=report_id,
                fused=fused,
                s_doc=d,
                s_chunk=c,
                s_bm25=sparse,
                best_chunk_id=chunk_id,
            )
        )
    hits.sort(key=lambda h: (-h.fused, h.report_id))
    return hits


def _snippet(text: str) -> str:
    return text[:SNIPPET_CHARS]


def search(
    request: SearchRequest,
    backends: RetrievalBackends,
    query_vector: np.ndarray,
    corpus: CorpusStore | None = None,
) -> list[RankedHit]:
    """Run one hybrid query. ``query_vector`` is the encoded query text."""
    if not request.query_text or not request.query_text.strip():
        raise EmptyInput("query text is empty")
    if request.k_final <= 0 or request.k_backend <= 0:
        raise InvalidConfig("k_final and k_backend must be positive")

    doc_hits = dense_topk(backends.doc_index, query_vector, request.k_backend)
    chunk_hits = dense_topk(backends.chunk_index, query_vector, request.k_backend)
    raw_bm25 = bm25_scores(backends.bm25_index, tokenize(request.query_text))
    bm25_top = dict(
        sorted(raw_bm25.items(), key=lambda kv: (-kv[1], kv[0]))[: request.k_backend]
    )

    ranked = fuse(
        compute_s_doc(doc_hits),
        compute_s_chunk(chunk_hits),
        normalize_bm25(bm25_top),
        request.weights,
    )[: request.k_final]

    if corpus is None:
        return ranked

    filled: list[RankedHit] = []
    for hit in ranked:
        section = None
        snippet = ""
        if hit.best_chunk_id is not None and hit.best_chunk_id in corpus.chunks:
            chunk = corpus.chunks[hit.best_chunk_id]
            section = chunk.section_label
            snippet = _snippet(chunk.text)
        elif hit.report_id in corpus.docs:
            snippet = _snippet(corpus.docs[hit.report_id].clean_text)
        filled.append(replace(hit, best_chunk_section=section, snippet=snippet))
    return filled

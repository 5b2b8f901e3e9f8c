"""Engine wiring: corpus, indexes, encoder, and LLM behind one object.

The engine owns no mutable state after loading; every public method is
safe to call from concurrent request handlers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..config import EngineConfig
from ..embed import Encoder, EncoderConfig, HttpEncoder, MockEncoder, embed_texts
from ..errors import EmptyInput, InvalidInput, ProviderUnavailable
from ..index import (
    Bm25Index,
    DenseIndex,
    build_bm25_index,
    build_dense_index,
    load_bm25_index,
    load_dense_index,
    persist_bm25_index,
    persist_dense_index,
)
from ..ingest.corpus import CorpusStore
from ..ingest.ihc import mask_ihc
from ..ingest.types import ReportDoc
from ..rag.cohort import CohortDecision, CohortSpec, CohortStats, run_cohort
from ..rag.context import assemble_context, build_prompt
from ..rag.ihc_rec import IhcRecommendation, recommend_ihc
from ..rag.llm import HttpLlm, LlmClient, StubLlm, generate
from ..rag.transform import transform_report
from ..retrieval import (
    FusionWeights,
    RankedHit,
    RetrievalBackends,
    SearchRequest,
    search,
)

DOC_INDEX_FILE = "doc.dvec"
CHUNK_INDEX_FILE = "chunk.dvec"
BM25_INDEX_FILE = "reports.bm25"


def make_encoder(config: EngineConfig) -> Encoder:
    if config.encoder_backend == "mock":
        return MockEncoder(dim=config.mock_dim, seed=config.mock_seed)
    return HttpEncoder(config=config.encoder)


def make_llm(config: EngineConfig) -> LlmClient:
    if config.llm_backend == "stub":
        return StubLlm()
    return HttpLlm(config=config.llm)


def build_indexes(corpus: CorpusStore, encoder: Encoder, index_dir: str | Path) -> dict[str, str]:
    """Embed the corpus, build all three indexes, persist them with digests."""
    report_ids = sorted(corpus.docs)
    docs = [corpus.docs[r] for r in report_ids]
    chunk_ids = sorted(corpus.chunks)
    chunks = [corpus.chunks[c] for c in chunk_ids]

    doc_vectors = embed_texts(
        [d.clean_text for d in docs], encoder, kind="doc", ids=report_ids
    )
    chunk_vectors = embed_texts(
        [c.text for c in chunks], encoder, kind="chunk", ids=chunk_ids
    )
    doc_index = build_dense_index(doc_vectors, kind="doc")
    chunk_index = build_dense_index(
        chunk_vectors, kind="chunk", owners=[c.report_id for c in chunks]
    )
    bm25_index = build_bm25_index(report_ids, [d.clean_text for d in docs])

    out = Path(index_dir)
    return {
        DOC_INDEX_FILE: persist_dense_index(doc_index, out / DOC_INDEX_FILE),
        CHUNK_INDEX_FILE: persist_dense_index(chunk_index, out / CHUNK_INDEX_FILE),
        BM25_INDEX_FILE: persist_bm25_index(bm25_index, out / BM25_INDEX_FILE),
    }


def load_backends(index_dir: str | Path) -> RetrievalBackends:
    root = Path(index_dir)
    return RetrievalBackends(
        doc_index=load_dense_index(root / DOC_INDEX_FILE),
        chunk_index=load_dense_index(root / CHUNK_INDEX_FILE),
        bm25_index=load_bm25_index(root / BM25_INDEX_FILE),
    )


@dataclass
class Engine:
    config: EngineConfig
    corpus: CorpusStore
    backends: RetrievalBackends
    encoder: Encoder
    llm: LlmClient

    @classmethod
    def load(cls, config: EngineConfig) -> "Engine":
        corpus = CorpusStore.from_dir(config.corpus_dir)
        backends = load_backends(config.index_dir)
        return cls(
            config=config,
            corpus=corpus,
            backends=backends,
            encoder=make_encoder(config),
            llm=make_llm(config),
        )

    @classmethod
    def from_parts(
        cls,
        config: EngineConfig,
        corpus: CorpusStore,
        encoder: Encoder | None = None,
        llm: LlmClient | None = None,
    ) -> "Engine":
        """Build indexes in memory from a loaded corpus; used by tests and demos."""
        encoder = encoder if encoder is not None else make_encoder(config)
        llm = llm if llm is not None else make_llm(config)
        report_ids = sorted(corpus.docs)
        docs = [corpus.docs[r] for r in report_ids]
        chunk_ids = sorted(corpus.chunks)
        chunks = [corpus.chunks[c] for c in chunk_ids]
        doc_index = build_dense_index(
            embed_texts([d.clean_text for d in docs], encoder, kind="doc", ids=report_ids),
            kind="doc",
        )
        chunk_index = build_dense_index(
            embed_texts([c.text for c in chunks], encoder, kind="chunk", ids=chunk_ids),
            kind="chunk",
            owners=[c.report_id for c in chunks],
        )
        bm25_index = build_bm25_index(report_ids, [d.clean_text for d in docs])
        backends = RetrievalBackends(doc_index, chunk_index, bm25_index)
        return cls(config=config, corpus=corpus, backends=backends, encoder=encoder, llm=llm)

    def encode_query(self, query: str) -> np.ndarray:
        prefix = self.config.encoder.instruction_prefix
        return self.encoder.encode([prefix + query])[0]

    def search(
        self,
        query: str,
        k: int | None = None,
        weights: FusionWeights | None = None,
    ) -> list[RankedHit]:
        request = SearchRequest(
            query_text=query,
            k_final=k if k is not None else self.config.k_final,
            k_backend=self.config.k_backend,
            weights=weights if weights is not None else self.config.weights,
        )
        return search(request, self.backends, self.encode_query(query), self.corpus)

    def answer(self, query: str, k: int | None = None) -> tuple[str, list[RankedHit]]:
        """RAG answer over the top hits; raises ProviderUnavailable as-is."""
        hits = self.search(query, k)
        skeleton = build_prompt("case_retrieval", [], query)
        report_budget = self.config.context_budget - skeleton.token_estimate - 8 * max(1, len(hits))
        context = assemble_context(
            hits,
            {h.report_id: self.corpus.docs[h.report_id].clean_text for h in hits},
            max(1, report_budget),
        )
        bundle = build_prompt("case_retrieval", context, query)
        while bundle.token_estimate > self.config.context_budget and len(context) > 1:
            context = context[:-1]
            bundle = build_prompt("case_retrieval", context, query)
        return generate(bundle, self.llm, self.config.context_budget), hits

    def run_cohort(
        self,
        spec: CohortSpec,
        on_progress=None,
    ) -> tuple[list[CohortDecision], CohortStats]:
        return run_cohort(
            spec,
            self.corpus,
            self.llm,
            search_fn=lambda q: self.search(q, k=len(self.corpus)),
            budget=self.config.context_budget,
            on_progress=on_progress,
        )

    def get_report(self, report_id: str) -> ReportDoc:
        doc = self.corpus.docs.get(report_id)
        if doc is None:
            raise KeyError(report_id)
        return doc

    def transform(self, report_id: str, kind: str) -> str:
        return transform_report(
            self.get_report(report_id), kind, self.llm, self.config.context_budget
        )

    def recommend_ihc(self, report_id: str, k: int) -> IhcRecommendation:
        """Mask the report before recommendation, unconditionally."""
        masked = mask_ihc(self.get_report(report_id))

        def neighbors(query: str):
            # The case itself would put its own ordered panel into the
            # candidate pool; similar cases means other cases.
            hits = self.search(query, k=self.config.ihc_neighbors + 1)
            return [h for h in hits if h.report_id != report_id]

        return recommend_ihc(
            masked.clean_text,
            search_fn=neighbors,
            corpus=self.corpus,
            llm=self.llm,
            k=k,
            m_neighbors=self.config.ihc_neighbors,
            canonical_panel=self.config.ihc_panel,
            budget=self.config.context_budget,
        )

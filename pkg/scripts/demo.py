"""Offline end-to-end walkthrough on a synthetic corpus.

Builds a 40-report archive with the mock encoder and the rule-based stub
LLM, then exercises every workflow: hybrid search, a generated answer, a
cohort run, a stain recommendation, and a report transformation. No
network access or model endpoints required.

Usage:
    python3 scripts/demo.py [--n 40] [--seed 7]
"""

from __future__ import annotations

import click

from pathcase.config import EngineConfig
from pathcase.embed import MockEncoder
from pathcase.ingest.corpus import CorpusStore
from pathcase.rag.cohort import CohortSpec
from pathcase.rag.llm import StubLlm, auto_behavior
from pathcase.service.engine import Engine
from pathcase.synth import make_corpus


def rule(title: str) -> None:
    click.echo(f"\n=== {title} " + "=" * max(0, 60 - len(title)))


@click.command()
@click.option("--n", default=40, show_default=True, help="Corpus size")
@click.option("--seed", default=7, show_default=True)
def main(n: int, seed: int) -> None:
    raws, _ = make_corpus(n, seed=seed)
    store = CorpusStore.build(raws)
    config = EngineConfig(mock_dim=64, ihc_neighbors=5, ihc_panel=("TTF-1", "GATA3"))
    engine = Engine.from_parts(
        config, store, encoder=MockEncoder(dim=64), llm=StubLlm(behavior=auto_behavior)
    )
    click.echo(f"built engine over {len(store)} reports, {len(store.chunks)} chunks")

    rule("hybrid search")
    query = "invasive adenocarcinoma with lymph node metastasis"
    for hit in engine.search(query, k=5):
        click.echo(
            f"{hit.report_id}  fused={hit.fused:.4f}  "
            f"(doc={hit.s_doc:.3f} chunk={hit.s_chunk:.3f} bm25={hit.s_bm25:.3f})  "
            f"[{hit.best_chunk_section}] {hit.snippet[:70]}…"
        )

    rule("retrieval-augmented answer")
    answer, hits = engine.answer(query, k=3)
    click.echo(f"grounded on: {', '.join(h.report_id for h in hits)}")
    click.echo(answer)

    rule("cohort construction")
    spec = CohortSpec(
        inclusion_criteria="adenocarcinoma",
        exclusion_criteria="mucinous features",
        concurrency=4,
    )
    decisions, stats = engine.run_cohort(spec)
    included = [d.case_number for d in decisions if d.decision == 1]
    click.echo(
        f"{len(included)}/{len(decisions)} included "
        f"({stats.llm_calls} llm calls in {stats.seconds:.2f}s)"
    )
    click.echo(f"first included: {', '.join(included[:8])}")

    rule("stain recommendation (masked input)")
    report_id = sorted(store.docs)[0]
    rec = engine.recommend_ihc(report_id, k=3)
    for marker, rationale in rec.markers:
        click.echo(f"{marker:12s} {rationale}")
    click.echo(f"vocabulary: {', '.join(sorted(rec.candidate_vocabulary))}")

    rule("report transformation")
    click.echo(engine.transform(report_id, "synoptic"))


if __name__ == "__main__":
    main()

"""Command-line surface mirroring the HTTP endpoints for headless use."""

from __future__ import annotations

import json
import sys
from dataclasses import asdict
from pathlib import Path

import click

from .config import EngineConfig, load_config
from .embed import MockEncoder
from .errors import EngineError
from .evals.io import (
    load_paired_scores,
    load_panel_cases,
    load_rank_log,
    load_text_pairs,
    write_metrics,
)
from .evals.panels import panel_metrics
from .evals.ranks import rank_metrics, recall_at_k
from .evals.stats import paired_bootstrap, wilson
from .evals.textgen import bleu4, rouge
from .ingest.chunks import DEFAULT_MAX_TOKENS, DEFAULT_MIN_TOKENS, build_chunks
from .ingest.corpus import CorpusStore, emit_corpus, ingest_report, read_raw_reports
from .rag.cohort import CohortSpec, PrefilterSpec
from .retrieval import FusionWeights
from .service.engine import Engine, build_indexes, make_encoder


@click.group()
def main() -> None:
    """Pathology archive retrieval engine."""


@main.command()
@click.option("--in", "in_path", required=True, help="Raw reports: JSONL file or directory of .txt")
@click.option("--out", "out_dir", required=True, help="Corpus output directory")
@click.option("--min-tokens", default=DEFAULT_MIN_TOKENS, show_default=True)
@click.option("--max-tokens", default=DEFAULT_MAX_TOKENS, show_default=True)
def ingest(in_path: str, out_dir: str, min_tokens: int, max_tokens: int) -> None:
    """Normalize, section, and chunk raw reports into a corpus directory."""
    raws = read_raw_reports(in_path)
    docs = [ingest_report(r) for r in raws]
    chunks = [c for d in docs for c in build_chunks(d, min_tokens, max_tokens)]
    manifest = emit_corpus(docs, chunks, out_dir)
    click.echo(f"wrote {manifest.doc_count} docs, {manifest.chunk_count} chunks to {out_dir}")


@main.group()
def index() -> None:
    """Index operations."""


@index.command("build")
@click.option("--corpus", "corpus_dir", required=True)
@click.option("--out", "index_dir", required=True)
@click.option("--config", "config_path", default=None, help="Engine TOML (encoder settings)")
@click.option("--dim", default=64, show_default=True, help="Mock encoder dimension")
@click.option("--seed", default=0, show_default=True, help="Mock encoder seed")
def index_build(corpus_dir: str, index_dir: str, config_path: str | None, dim: int, seed: int) -> None:
    corpus = CorpusStore.from_dir(corpus_dir)
    if config_path:
        encoder = make_encoder(load_config(config_path, env=None))
    else:
        encoder = MockEncoder(dim=dim, seed=seed)
    digests = build_indexes(corpus, encoder, index_dir)
    for name, digest in digests.items():
        click.echo(f"{name}  sha256={digest[:16]}…")


def _load_engine(corpus_dir: str, index_dir: str, config_path: str | None) -> Engine:
    import os

    config = load_config(config_path, env=os.environ)
    config = EngineConfig(
        **{
            **{f: getattr(config, f) for f in (
                "weights", "k_backend", "k_final", "context_budget",
                "encoder_backend", "encoder", "mock_dim", "mock_seed",
                "llm_backend", "llm", "cohort_concurrency", "cohort_max_retries",
                "ihc_neighbors", "ihc_panel", "auth_token",
            )},
            "corpus_dir": corpus_dir,
            "index_dir": index_dir,
        }
    )
    return Engine.load(config)


@main.command()
@click.argument("query")
@click.option("--corpus", "corpus_dir", required=True)
@click.option("--index", "index_dir", required=True)
@click.option("--config", "config_path", default=None)
@click.option("--k", default=10, show_default=True)
@click.option("--weights", default=None, help="alpha_doc,alpha_chunk,alpha_bm25")
def search(query: str, corpus_dir: str, index_dir: str, config_path: str | None, k: int, weights: str | None) -> None:
    """Hybrid search; prints one JSON hit per line."""
    engine = _load_engine(corpus_dir, index_dir, config_path)
    w = None
    if weights:
        a, b, c = (float(x) for x in weights.split(","))
        w = FusionWeights(a, b, c)
    for hit in engine.search(query, k=k, weights=w):
        click.echo(json.dumps(asdict(hit)))


@main.group()
def cohort() -> None:
    """Cohort construction."""


@cohort.command("run")
@click.option("--criteria", "criteria_path", required=True, help="JSON file with inclusion/exclusion criteria")
@click.option("--corpus", "corpus_dir", required=True)
@click.option("--index", "index_dir", default=None, help="Required when --prefilter-query is set")
@click.option("--config", "config_path", default=None)
@click.option("--prefilter-query", default=None)
@click.option("--threshold", default=0.5, show_default=True)
@click.option("--concurrency", default=4, show_default=True)
@click.option("--out", "out_dir", default=None, help="Write decisions.jsonl and stats.json here")
def cohort_run(
    criteria_path: str,
    corpus_dir: str,
    index_dir: str | None,
    config_path: str | None,
    prefilter_query: str | None,
    threshold: float,
    concurrency: int,
    out_dir: str | None,
) -> None:
    criteria = json.loads(Path(criteria_path).read_text("utf-8"))
    prefilter = (
        PrefilterSpec(query=prefilter_query, threshold=threshold) if prefilter_query else None
    )
    spec = CohortSpec(
        inclusion_criteria=criteria.get("inclusion_criteria", ""),
        exclusion_criteria=criteria.get("exclusion_criteria", ""),
        prefilter=prefilter,
        concurrency=concurrency,
    )

    if prefilter is not None:
        if not index_dir:
            raise click.UsageError("--prefilter-query requires --index")
        engine = _load_engine(corpus_dir, index_dir, config_path)
        decisions, stats = engine.run_cohort(spec)
    else:
        from .rag.cohort import run_cohort
        from .service.engine import make_llm
        import os

        config = load_config(config_path, env=os.environ)
        corpus = CorpusStore.from_dir(corpus_dir)
        decisions, stats = run_cohort(
            spec, corpus, make_llm(config), budget=config.context_budget
        )

    included = sum(1 for d in decisions if d.decision == 1)
    click.echo(
        f"{included}/{len(decisions)} included; {stats.llm_calls} llm calls "
        f"in {stats.seconds:.2f}s; {stats.failures} failures"
    )
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with (out / "decisions.jsonl").open("w", encoding="utf-8") as fh:
            for d in decisions:
                fh.write(json.dumps(asdict(d)) + "\n")
        (out / "stats.json").write_text(json.dumps(asdict(stats), indent=2) + "\n", "utf-8")
        click.echo(f"wrote {out / 'decisions.jsonl'}")


@main.group("eval")
def eval_group() -> None:
    """Evaluation metrics over JSONL logs."""


@eval_group.command("ranks")
@click.option("--in", "in_path", required=True)
@click.option("--k", "ks", default="1,3,5,10", show_default=True)
@click.option("--cutoff", default=200, show_default=True)
@click.option("--out", "out_path", default=None)
def eval_ranks(in_path: str, ks: str, cutoff: int, out_path: str | None) -> None:
    log = load_rank_log(in_path)
    metrics: dict[str, float] = {}
    for k in (int(x) for x in ks.split(",")):
        metrics[f"recall@{k}"] = recall_at_k(log, k)
    metrics.update(rank_metrics(log, cutoff))
    _emit(metrics, out_path)


@eval_group.command("panels")
@click.option("--in", "in_path", required=True)
@click.option("--out", "out_path", default=None)
def eval_panels(in_path: str, out_path: str | None) -> None:
    _emit(panel_metrics(load_panel_cases(in_path)), out_path)


@eval_group.command("text")
@click.option("--in", "in_path", required=True)
@click.option("--out", "out_path", default=None)
def eval_text(in_path: str, out_path: str | None) -> None:
    pairs = load_text_pairs(in_path)
    n = len(pairs)
    metrics = {
        "rouge1_f1": sum(rouge(c, r, "1") for c, r in pairs) / n,
        "rouge2_f1": sum(rouge(c, r, "2") for c, r in pairs) / n,
        "rougeL_f1": sum(rouge(c, r, "L") for c, r in pairs) / n,
        "bleu4": sum(bleu4(c, r) for c, r in pairs) / n,
    }
    _emit(metrics, out_path)


@eval_group.command("stats")
@click.option("--in", "in_path", default=None, help="JSONL of paired scores {a, b}")
@click.option("--resamples", default=2000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--wilson", "wilson_counts", default=None, help="successes,n")
@click.option("--out", "out_path", default=None)
def eval_stats(in_path: str | None, resamples: int, seed: int, wilson_counts: str | None, out_path: str | None) -> None:
    metrics: dict = {}
    if in_path:
        a, b = load_paired_scores(in_path)
        report = paired_bootstrap(a, b, resamples=resamples, seed=seed)
        metrics["mean_diff"] = asdict(report)
    if wilson_counts:
        successes, n = (int(x) for x in wilson_counts.split(","))
        low, high = wilson(successes, n)
        metrics["wilson"] = {"successes": successes, "n": n, "low": low, "high": high}
    if not metrics:
        raise click.UsageError("need --in and/or --wilson")
    _emit(metrics, out_path)


def _emit(metrics: dict, out_path: str | None) -> None:
    text = json.dumps(metrics, indent=2)
    if out_path:
        write_metrics(out_path, metrics)
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text)


@main.command()
@click.option("--config", "config_path", required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(config_path: str, host: str, port: int) -> None:
    """Run the HTTP service."""
    import os

    import uvicorn

    from .service.app import create_app

    config = load_config(config_path, env=os.environ)
    engine = Engine.load(config)
    uvicorn.run(create_app(engine), host=host, port=port)


@main.group("config")
def config_group() -> None:
    """Configuration helpers."""


@config_group.command("show")
@click.option("--config", "config_path", default=None)
def config_show(config_path: str | None) -> None:
    """Print the effective configuration (defaults merged with file and env)."""
    import os

    config = load_config(config_path, env=os.environ)
    payload = asdict(config)
    for section in ("encoder", "llm"):
        if payload[section].get("api_key"):
            payload[section]["api_key"] = "***"
    click.echo(json.dumps(payload, indent=2, default=str))


def run() -> int:
    try:
        main(standalone_mode=True)
    except EngineError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(run())

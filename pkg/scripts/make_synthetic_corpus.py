"""Generate a synthetic raw-report JSONL file for demos and benchmarks.

Usage:
    python3 scripts/make_synthetic_corpus.py --n 200 --seed 7 --out raw.jsonl
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from pathcase.synth import make_corpus


@click.command()
@click.option("--n", default=100, show_default=True, help="Number of reports")
@click.option("--seed", default=0, show_default=True)
@click.option("--ihc-probability", default=0.7, show_default=True)
@click.option("--out", "out_path", required=True, help="Output JSONL path")
def main(n: int, seed: int, ihc_probability: float, out_path: str) -> None:
    raws, cases = make_corpus(n, seed=seed, ihc_probability=ihc_probability)
    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for raw in raws:
            fh.write(
                json.dumps(
                    {
                        "report_id": raw.report_id,
                        "text": raw.raw_text,
                        "wsi_id": raw.wsi_id,
                    }
                )
                + "\n"
            )
    with_ihc = sum(1 for case in cases if case.has_ihc)
    click.echo(f"wrote {n} reports to {path} ({with_ihc} with immunostain panels)")


if __name__ == "__main__":
    main()

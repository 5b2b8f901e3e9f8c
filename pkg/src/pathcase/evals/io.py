"""JSONL readers and writers for the eval CLI."""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

from ..errors import IoError
from .panels import PanelCase
from .ranks import RankEntry
from .stats import MetricReport


def _rows(path: str | Path) -> list[dict]:
    try:
        lines = Path(path).read_text("utf-8").splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return [json.loads(ln) for ln in lines if ln.strip()]


def load_rank_log(path: str | Path) -> list[RankEntry]:
    return [
        RankEntry(
            query_id=r["query_id"],
            target_report_id=r["target_report_id"],
            rank=r.get("rank"),
        )
        for r in _rows(path)
    ]


def load_panel_cases(path: str | Path) -> list[PanelCase]:
    return [
        PanelCase(
            case_id=r["case_id"],
            recommended=tuple(r["recommended"]),
            truth=frozenset(r["truth"]),
        )
        for r in _rows(path)
    ]


def load_text_pairs(path: str | Path) -> list[tuple[str, str]]:
    return [(r["candidate"], r["reference"]) for r in _rows(path)]


def load_paired_scores(path: str | Path) -> tuple[list[float], list[float]]:
    rows = _rows(path)
    return [float(r["a"]) for r in rows], [float(r["b"]) for r in rows]


def write_metrics(path: str | Path, reports: list[MetricReport] | dict) -> None:
    if isinstance(reports, dict):
        payload = reports
    else:
        payload = {"metrics": [asdict(r) for r in reports]}
    try:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", "utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc

"""Marker-panel agreement metrics, macro-averaged over cases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyInput, InvalidCase


@dataclass(frozen=True)
class PanelCase:
    case_id: str
    recommended: tuple[str, ...]  # ranked, duplicate-free
    truth: frozenset[str]

    def __post_init__(self) -> None:
        if len(set(self.recommended)) != len(self.recommended):
            raise InvalidCase(f"case {self.case_id}: recommended list has duplicates")


def _case_scores(case: PanelCase) -> dict[str, float]:
    if not case.truth:
        raise InvalidCase(f"case {case.case_id}: truth set is empty")
    rec = set(case.recommended)
    inter = rec & case.truth
    union = rec | case.truth

    precision = len(inter) / len(rec) if rec else 0.0
    recall = len(inter) / len(case.truth)
    f1 = (
        2 * precision * recall / (precision + recall)
        if (precision + recall) > 0
        else 0.0
    )
    scores = {
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "jaccard": len(inter) / len(union) if union else 0.0,
        "br@5": len(set(case.recommended[:5]) & case.truth) / len(case.truth),
    }
    for k in (1, 3, 5):
        scores[f"hit@{k}"] = 1.0 if set(case.recommended[:k]) & case.truth else 0.0
    return scores


def panel_metrics(cases: Sequence[PanelCase]) -> dict[str, float]:
    """Mean of each per-case score across cases."""
    if not cases:
        raise EmptyInput("no panel cases")
    keys = ("hit@1", "hit@3", "hit@5", "br@5", "precision", "recall", "f1", "jaccard")
    totals = {k: 0.0 for k in keys}
    for case in cases:
        scores = _case_scores(case)
        for k in keys:
            totals[k] += scores[k]
    return {k: totals[k] / len(cases) for k in keys}

"""Rank-based retrieval metrics for single-target queries.

Every query has exactly one relevant report, so reciprocal rank and nDCG
collapse to closed forms: RR = 1/rank and nDCG = 1/log2(rank + 1), both 0
when the target falls outside the cutoff or was never retrieved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyInput, InvalidInput


@dataclass(frozen=True)
class RankEntry:
    query_id: str
    target_report_id: str
    rank: int | None  # 1-based; None when the target was not retrieved

    def __post_init__(self) -> None:
        if self.rank is not None and self.rank < 1:
            raise InvalidInput(f"rank must be >= 1, got {self.rank}")


def rank_of(target_report_id: str, ranking: Sequence[str]) -> int | None:
    """Position of the target in a ranked id list, or None."""
    for i, report_id in enumerate(ranking, start=1):
        if report_id == target_report_id:
            return i
    return None


def recall_at_k(log: Sequence[RankEntry], k: int) -> float:
    if not log:
        raise EmptyInput("rank log is empty")
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    hits = sum(1 for e in log if e.rank is not None and e.rank <= k)
    return hits / len(log)


def rank_metrics(log: Sequence[RankEntry], cutoff: int) -> dict[str, float]:
    """Mean reciprocal rank and nDCG at the given cutoff."""
    if not log:
        raise EmptyInput("rank log is empty")
    if cutoff < 1:
        raise InvalidInput(f"cutoff must be >= 1, got {cutoff}")
    rr_total = 0.0
    ndcg_total = 0.0
    for entry in log:
        if entry.rank is not None and entry.rank <= cutoff:
            rr_total += 1.0 / entry.rank
            ndcg_total += 1.0 / math.log2(entry.rank + 1)
    return {"mrr": rr_total / len(log), "ndcg": ndcg_total / len(log)}

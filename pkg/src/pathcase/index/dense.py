"""Exact flat inner-product index.

Vectors are stored as float32 rows; scoring upcasts to float64 so results
are reproducible across platforms at tight tolerance. Top-k is a full scan:
at archive scale (tens of thousands of rows) this is fast, exact, and has
no tuning knobs. Ties break toward the lexicographically smaller id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch, DuplicateId, InvalidConfig
from ..embed import EmbeddingVector


@dataclass(frozen=True)
class ScoredId:
    id: str
    score: float
    owner_report_id: str


@dataclass
class DenseIndex:
    kind: str  # "doc" | "chunk"
    dim: int
    vectors: np.ndarray  # (n, dim) float32, rows unit-normalized
    ids: list[str]
    owners: list[str]  # row -> report_id

    def __len__(self) -> int:
        return len(self.ids)


def _owner_of(vec_id: str, kind: str) -> str:
    if kind == "chunk":
        return vec_id.rsplit("#", 1)[0]
    return vec_id


def build_dense_index(
    vectors: Sequence[EmbeddingVector],
    kind: str,
    owners: Sequence[str] | None = None,
) -> DenseIndex:
    if kind not in ("doc", "chunk"):
        raise InvalidConfig(f"index kind must be 'doc' or 'chunk', got {kind!r}")
    if not vectors:
        return DenseIndex(
            kind=kind, dim=0, vectors=np.empty((0, 0), dtype=np.float32), ids=[], owners=[]
        )

    dim = int(np.asarray(vectors[0].values).shape[0])
    ids: list[str] = []
    seen: set[str] = set()
    rows = np.empty((len(vectors), dim), dtype=np.float32)
    for i, vec in enumerate(vectors):
        arr = np.asarray(vec.values, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != dim:
            raise DimensionMismatch(
                f"vector {vec.id} has dim {arr.shape}, index dim is {dim}"
            )
        if vec.id in seen:
            raise DuplicateId(f"duplicate vector id {vec.id}")
        seen.add(vec.id)
        ids.append(vec.id)
        rows[i] = arr.astype(np.float32)

    owner_list = list(owners) if owners is not None else [_owner_of(i, kind) for i in ids]
    if len(owner_list) != len(ids):
        raise InvalidConfig(f"{len(owner_list)} owners for {len(ids)} vectors")
    return DenseIndex(kind=kind, dim=dim, vectors=rows, ids=ids, owners=owner_list)


def dense_topk(index: DenseIndex, query: np.ndarray, k: int) -> list[ScoredId]:
    if k <= 0 or not index.ids:
        return []
    q = np.asarray(query, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] != index.dim:
        raise DimensionMismatch(f"query dim {q.shape} does not match index dim {index.dim}")

    scores = index.vectors.astype(np.float64) @ q
    ids_arr = np.asarray(index.ids)
    # Primary key: score descending; secondary: id ascending.
    order = np.lexsort((ids_arr, -scores))[: min(k, len(index.ids))]
    return [
        ScoredId(id=index.ids[i], score=float(scores[i]), owner_report_id=index.owners[i])
        for i in order
    ]

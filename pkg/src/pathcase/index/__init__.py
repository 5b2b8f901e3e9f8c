from .dense import DenseIndex, ScoredId, build_dense_index, dense_topk
from .bm25 import Bm25Index, bm25_scores, bm25_topk, build_bm25_index, tokenize
from .store import load_bm25_index, load_dense_index, persist_bm25_index, persist_dense_index

__all__ = [
    "Bm25Index",
    "DenseIndex",
    "ScoredId",
    "bm25_scores",
    "bm25_topk",
    "build_bm25_index",
    "build_dense_index",
    "dense_topk",
    "load_bm25_index",
    "load_dense_index",
    "persist_bm25_index",
    "persist_dense_index",
    "tokenize",
]

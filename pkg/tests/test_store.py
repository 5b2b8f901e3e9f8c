"""Index persistence: byte-exact round trips, digest verification, and
rejection of every corruption mode we can manufacture."""

import numpy as np
import pytest

from pathcase.embed import EmbeddingVector, l2_normalize
from pathcase.errors import CorruptIndex, IoError
from pathcase.index.bm25 import bm25_scores, build_bm25_index
from pathcase.index.dense import build_dense_index, dense_topk
from pathcase.index.store import (
    load_bm25_index,
    load_dense_index,
    persist_bm25_index,
    persist_dense_index,
)

TEXTS = [
    "invasive adenocarcinoma of the lung",
    "benign breast tissue without atypia",
    "metastatic melanoma in a lymph node",
    "squamous carcinoma with keratinization",
    "chronic gastritis, no intestinal metaplasia",
    "papillary thyroid carcinoma, classic type",
]
IDS = [f"R{i}" for i in range(len(TEXTS))]


@pytest.fixture()
def dense_index():
    rng = np.random.default_rng(3)
    vecs = [
        EmbeddingVector(
            id=f"R{i}#0" if i % 2 else f"R{i}",
            kind="chunk",
            values=l2_normalize(rng.normal(size=12)),
            model_id="mock",
        )
        for i in range(6)
    ]
    return build_dense_index(vecs, kind="chunk")


@pytest.fixture()
def bm25_index():
    return build_bm25_index(IDS, TEXTS)


def probe_queries(dim, count, seed=9):
    rng = np.random.default_rng(seed)
    return [l2_normalize(rng.normal(size=dim)) for _ in range(count)]


class TestDenseRoundTrip:
    def test_fields_identical(self, dense_index, tmp_path):
        path = tmp_path / "chunk.dvec"
        persist_dense_index(dense_index, path)
        loaded = load_dense_index(path)
        assert loaded.kind == dense_index.kind
        assert loaded.dim == dense_index.dim
        assert loaded.ids == dense_index.ids
        assert loaded.owners == dense_index.owners
        assert loaded.vectors.dtype == np.float32
        assert np.array_equal(loaded.vectors, dense_index.vectors)

    def test_topk_identical_for_probes(self, dense_index, tmp_path):
        path = tmp_path / "chunk.dvec"
        persist_dense_index(dense_index, path)
        loaded = load_dense_index(path)
        for q in probe_queries(dense_index.dim, 10):
            assert dense_topk(loaded, q, 4) == dense_topk(dense_index, q, 4)

    def test_digest_sidecar_written(self, dense_index, tmp_path):
        path = tmp_path / "chunk.dvec"
        digest = persist_dense_index(dense_index, path)
        assert (tmp_path / "chunk.digest").read_text().strip() == digest
        assert len(digest) == 64


class TestBm25RoundTrip:
    def test_fields_identical(self, bm25_index, tmp_path):
        path = tmp_path / "reports.bm25"
        persist_bm25_index(bm25_index, path)
        loaded = load_bm25_index(path)
        assert loaded.doc_ids == bm25_index.doc_ids
        assert loaded.doc_lengths == bm25_index.doc_lengths
        assert loaded.avg_doc_length == bm25_index.avg_doc_length
        assert loaded.postings == bm25_index.postings
        assert (loaded.k1, loaded.b) == (bm25_index.k1, bm25_index.b)

    def test_scores_identical_for_probes(self, bm25_index, tmp_path):
        path = tmp_path / "reports.bm25"
        persist_bm25_index(bm25_index, path)
        loaded = load_bm25_index(path)
        probes = [
            ["adenocarcinoma"],
            ["lung"],
            ["benign", "breast"],
            ["melanoma", "node"],
            ["carcinoma"],
            ["gastritis"],
            ["papillary", "thyroid"],
            ["no", "atypia"],
            ["metastatic"],
            ["keratinization"],
        ]
        for probe in probes:
            assert bm25_scores(loaded, probe) == bm25_scores(bm25_index, probe)


class TestCorruption:
    def test_truncated_payload(self, dense_index, tmp_path):
        path = tmp_path / "chunk.dvec"
        persist_dense_index(dense_index, path)
        path.write_bytes(path.read_bytes()[:-7])
        with pytest.raises(CorruptIndex):
            load_dense_index(path)

    def test_flipped_byte(self, bm25_index, tmp_path):
        path = tmp_path / "reports.bm25"
        persist_bm25_index(bm25_index, path)
        data = bytearray(path.read_bytes())
        data[len(data) // 2] ^= 0xFF
        path.write_bytes(bytes(data))
        with pytest.raises(CorruptIndex):
            load_bm25_index(path)

    def test_missing_digest_sidecar(self, dense_index, tmp_path):
        path = tmp_path / "chunk.dvec"
        persist_dense_index(dense_index, path)
        (tmp_path / "chunk.digest").unlink()
        with pytest.raises(CorruptIndex):
            load_dense_index(path)

    def test_wrong_magic(self, dense_index, bm25_index, tmp_path):
        dense_path = tmp_path / "a.dvec"
        bm25_path = tmp_path / "b.bm25"
        persist_dense_index(dense_index, dense_path)
        persist_bm25_index(bm25_index, bm25_path)
        # Digests are valid, so only the magic check can reject the swap.
        with pytest.raises(CorruptIndex):
            load_dense_index(bm25_path)
        with pytest.raises(CorruptIndex):
            load_bm25_index(dense_path)

    def test_trailing_bytes(self, dense_index, tmp_path):
        path = tmp_path / "chunk.dvec"
        persist_dense_index(dense_index, path)
        payload = path.read_bytes() + b"extra"
        path.write_bytes(payload)
        import hashlib

        (tmp_path / "chunk.digest").write_text(hashlib.sha256(payload).hexdigest() + "\n")
        with pytest.raises(CorruptIndex):
            load_dense_index(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            load_dense_index(tmp_path / "absent.dvec")

    def test_unwritable_path(self, dense_index, tmp_path):
        # A regular file where a directory is needed fails for any user,
        # including root, unlike permission bits.
        blocked = tmp_path / "blocked"
        blocked.write_text("occupied")
        with pytest.raises(IoError):
            persist_dense_index(dense_index, blocked / "x.dvec")

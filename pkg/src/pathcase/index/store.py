"""Binary persistence for dense and BM25 indexes.

Each artifact is a self-describing little-endian file plus a sidecar
``<name>.digest`` holding the SHA-256 of the payload. Loading verifies the
digest before parsing, so truncation and bit rot surface as CorruptIndex
instead of garbage scores.
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path

import numpy as np

from ..errors import CorruptIndex, IoError
from .bm25 import Bm25Index
from .dense import DenseIndex

_DENSE_MAGIC = b"PCDV"
_BM25_MAGIC = b"PCBM"
_VERSION = 1
_KIND_CODES = {"doc": 0, "chunk": 1}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}


def _digest_path(path: Path) -> Path:
    return path.with_suffix(".digest")


def _write_artifact(path: Path, payload: bytes) -> str:
    digest = hashlib.sha256(payload).hexdigest()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
        _digest_path(path).write_text(digest + "\n", "utf-8")
    except OSError as exc:
        raise IoError(f"cannot write index to {path}: {exc}") from exc
    return digest


def _read_artifact(path: Path, magic: bytes) -> bytes:
    try:
        payload = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read index from {path}: {exc}") from exc
    try:
        recorded = _digest_path(path).read_text("utf-8").strip()
    except OSError as exc:
        raise CorruptIndex(f"missing digest for {path}: {exc}") from exc
    actual = hashlib.sha256(payload).hexdigest()
    if actual != recorded:
        raise CorruptIndex(f"digest mismatch for {path}: expected {recorded}, got {actual}")
    if len(payload) < len(magic) or payload[: len(magic)] != magic:
        raise CorruptIndex(f"{path} does not start with magic {magic!r}")
    return payload


class _Reader:
    def __init__(self, data: bytes, path: Path):
        self.data = data
        self.pos = 0
        self.path = path

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptIndex(f"{self.path} is truncated at byte {self.pos}")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def string(self) -> str:
        return self.take(self.u16()).decode("utf-8")


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<H", len(raw)) + raw


def persist_dense_index(index: DenseIndex, path: str | Path) -> str:
    """Write the index and its digest sidecar; returns the hex digest."""
    p = Path(path)
    parts = [
        _DENSE_MAGIC,
        struct.pack("<I", _VERSION),
        struct.pack("<B", _KIND_CODES[index.kind]),
        struct.pack("<I", index.dim),
        struct.pack("<I", len(index.ids)),
    ]
    for vec_id, owner in zip(index.ids, index.owners):
        parts.append(_pack_str(vec_id))
        parts.append(_pack_str(owner))
    parts.append(np.ascontiguousarray(index.vectors, dtype="<f4").tobytes())
    return _write_artifact(p, b"".join(parts))


def load_dense_index(path: str | Path) -> DenseIndex:
    p = Path(path)
    r = _Reader(_read_artifact(p, _DENSE_MAGIC), p)
    r.take(4)  # magic, already checked
    version = r.u32()
    if version != _VERSION:
        raise CorruptIndex(f"{p}: unsupported version {version}")
    kind_code = r.u8()
    if kind_code not in _KIND_NAMES:
        raise CorruptIndex(f"{p}: unknown kind code {kind_code}")
    dim = r.u32()
    n = r.u32()
    ids: list[str] = []
    owners: list[str] = []
    for _ in range(n):
        ids.append(r.string())
        owners.append(r.string())
    raw = r.take(n * dim * 4)
    if r.pos != len(r.data):
        raise CorruptIndex(f"{p} has {len(r.data) - r.pos} trailing bytes")
    vectors = np.frombuffer(raw, dtype="<f4").reshape(n, dim).copy()
    return DenseIndex(kind=_KIND_NAMES[kind_code], dim=dim, vectors=vectors, ids=ids, owners=owners)


def persist_bm25_index(index: Bm25Index, path: str | Path) -> str:
    p = Path(path)
    parts = [
        _BM25_MAGIC,
        struct.pack("<I", _VERSION),
        struct.pack("<d", index.k1),
        struct.pack("<d", index.b),
        struct.pack("<I", len(index.doc_ids)),
    ]
    for doc_id in index.doc_ids:
        parts.append(_pack_str(doc_id))
    parts.append(struct.pack(f"<{len(index.doc_lengths)}I", *index.doc_lengths))
    terms = sorted(index.postings)
    parts.append(struct.pack("<I", len(terms)))
    for term in terms:
        plist = index.postings[term]
        parts.append(_pack_str(term))
        parts.append(struct.pack("<I", len(plist)))
        for row, tf in plist:
            parts.append(struct.pack("<II", row, tf))
    return _write_artifact(p, b"".join(parts))


def load_bm25_index(path: str | Path) -> Bm25Index:
    p = Path(path)
    r = _Reader(_read_artifact(p, _BM25_MAGIC), p)
    r.take(4)
    version = r.u32()
    if version != _VERSION:
        raise CorruptIndex(f"{p}: unsupported version {version}")
    k1 = r.f64()
    b = r.f64()
    n = r.u32()
    doc_ids = [r.string() for _ in range(n)]
    lengths = list(struct.unpack(f"<{n}I", r.take(4 * n))) if n else []
    postings: dict[str, list[tuple[int, int]]] = {}
    for _ in range(r.u32()):
        term = r.string()
        count = r.u32()
        plist = [struct.unpack("<II", r.take(8)) for _ in range(count)]
        postings[term] = [(int(row), int(tf)) for row, tf in plist]
    if r.pos != len(r.data):
        raise CorruptIndex(f"{p} has {len(r.data) - r.pos} trailing bytes")
    avg = (sum(lengths) / n) if n else 0.0
    return Bm25Index(
        doc_ids=doc_ids,
        doc_lengths=lengths,
        avg_doc_length=avg,
        postings=postings,
        k1=k1,
        b=b,
    )

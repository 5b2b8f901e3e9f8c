"""Embedding access: a deterministic offline encoder and an HTTP client.

The mock encoder hashes character 3-grams into signed buckets, giving
stable unit vectors with no network and no model weights; it stands in for
the real embedding endpoint in tests and demos. The HTTP client talks to
an OpenAI-style ``/embeddings`` endpoint with bounded retries.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import httpx
import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    InvalidConfig,
    ProviderUnavailable,
    ZeroVector,
)
from .ingest.chunks import estimate_tokens


@dataclass(frozen=True)
class EncoderConfig:
    endpoint_url: str = ""
    model_id: str = "mock"
    api_key: str = ""
    max_input_tokens: int = 512
    batch_size: int = 32
    timeout: float = 30.0
    instruction_prefix: str = ""
    max_attempts: int = 3
    backoff_base: float = 0.5


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    id: str
    kind: str  # "doc" | "chunk" | "query"
    values: np.ndarray
    model_id: str


def l2_normalize(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroVector("cannot normalize a zero or non-finite vector")
    return v / norm


def _bucket_hash(gram: str, seed: int) -> int:
    h = hashlib.blake2b(gram.encode("utf-8"), digest_size=8, salt=str(seed).encode()[:16])
    return int.from_bytes(h.digest(), "little")


def mock_embed(text: str, dim: int, seed: int = 0) -> np.ndarray:
    """Signed feature hashing of character 3-grams, L2-normalized."""
    if dim < 8:
        raise InvalidConfig(f"mock encoder dimension must be >= 8, got {dim}")
    lowered = text.lower()
    grams = [lowered[i : i + 3] for i in range(len(lowered) - 2)] or [lowered]
    vec = np.zeros(dim, dtype=np.float64)
    for gram in grams:
        h = _bucket_hash(gram, seed)
        sign = 1.0 if (h >> 60) & 1 else -1.0
        vec[h % dim] += sign
    if not vec.any():
        # Signs of distinct grams can cancel on tiny inputs; fall back to a
        # deterministic one-hot so the result is still a unit vector.
        vec[_bucket_hash(lowered, seed) % dim] = 1.0
    return l2_normalize(vec)


class Encoder(Protocol):
    dim: int

    def encode(self, texts: Sequence[str]) -> list[np.ndarray]: ...


@dataclass
class MockEncoder:
    dim: int = 64
    seed: int = 0
    instruction_prefix: str = ""

    def encode(self, texts: Sequence[str]) -> list[np.ndarray]:
        if not texts:
            return []
        return [mock_embed(self.instruction_prefix + t, self.dim, self.seed) for t in texts]


def _truncate(text: str, max_input_tokens: int) -> str:
    if estimate_tokens(text) <= max_input_tokens:
        return text
    return text[: max_input_tokens * 4]


@dataclass
class HttpEncoder:
    """Client for an OpenAI-style embeddings endpoint.

    Transient failures (transport errors, 5xx, 429) are retried with
    exponential backoff up to ``max_attempts``; anything else raises
    immediately.
    """

    config: EncoderConfig
    dim: int = 0  # 0 = accept the first dimension the provider returns
    transport: httpx.BaseTransport | None = None
    _sleep: callable = field(default=time.sleep, repr=False)

    def encode(self, texts: Sequence[str]) -> list[np.ndarray]:
        if not texts:
            return []
        out: list[np.ndarray] = []
        for start in range(0, len(texts), self.config.batch_size):
            out.extend(self._encode_batch(list(texts[start : start + self.config.batch_size])))
        return out

    def _encode_batch(self, texts: list[str]) -> list[np.ndarray]:
        prepared = []
        for t in texts:
            if not t or not t.strip():
                raise EmptyInput("cannot embed empty text")
            prepared.append(_truncate(t, self.config.max_input_tokens))

        payload = {"model": self.config.model_id, "input": prepared}
        headers = {}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"

        last_error: Exception | None = None
        for attempt in range(self.config.max_attempts):
            if attempt:
                self._sleep(self.config.backoff_base * (2 ** (attempt - 1)))
            try:
                with httpx.Client(transport=self.transport, timeout=self.config.timeout) as client:
                    resp = client.post(self.config.endpoint_url, json=payload, headers=headers)
                if resp.status_code in (429,) or resp.status_code >= 500:
                    last_error = ProviderUnavailable(f"embedding endpoint returned {resp.status_code}")
                    continue
                resp.raise_for_status()
                return self._parse(resp.json(), len(texts))
            except httpx.TransportError as exc:
                last_error = exc
        raise ProviderUnavailable(
            f"embedding endpoint failed after {self.config.max_attempts} attempts: {last_error}"
        )

    def _parse(self, body: dict, expected: int) -> list[np.ndarray]:
        rows = sorted(body["data"], key=lambda r: r["index"])
        if len(rows) != expected:
            raise ProviderUnavailable(f"expected {expected} embeddings, got {len(rows)}")
        vectors = []
        for row in rows:
            vec = np.asarray(row["embedding"], dtype=np.float64)
            if self.dim and vec.shape[0] != self.dim:
                raise DimensionMismatch(f"expected dim {self.dim}, provider sent {vec.shape[0]}")
            if not self.dim:
                self.dim = int(vec.shape[0])
            vectors.append(l2_normalize(vec))
        return vectors


def embed_texts(
    texts: Sequence[str],
    encoder: Encoder,
    *,
    kind: str,
    ids: Sequence[str],
    model_id: str = "",
) -> list[EmbeddingVector]:
    if len(texts) != len(ids):
        raise InvalidConfig(f"{len(texts)} texts but {len(ids)} ids")
    values = encoder.encode(texts)
    return [
        EmbeddingVector(id=i, kind=kind, values=v, model_id=model_id)
        for i, v in zip(ids, values)
    ]

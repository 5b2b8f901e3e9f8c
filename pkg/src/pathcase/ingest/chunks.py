"""Greedy section-bounded chunking.

Sentences from one section are packed left to right into chunks whose
estimated token count stays within [min_tokens, max_tokens]. Chunks never
cross a section boundary. A sub-minimum tail is merged into the previous
chunk of the same section; a section too short to ever reach the minimum
yields a single small chunk. Chunks that exceed the ceiling (a single long
sentence, or a forced tail merge) are flagged ``oversized`` rather than
split mid-sentence.
"""

from __future__ import annotations

import math
from typing import Callable

from ..errors import InvalidConfig
from .sentences import split_sentences
from .types import Chunk, ReportDoc

DEFAULT_MIN_TOKENS = 40
DEFAULT_MAX_TOKENS = 380

TokenEstimator = Callable[[str], int]


def estimate_tokens(text: str) -> int:
    """Default estimator: ceil(chars / 4), never below 1."""
    return max(1, math.ceil(len(text) / 4))


def _pack_section(
    sentences: list[str],
    min_tokens: int,
    max_tokens: int,
    estimator: TokenEstimator,
) -> list[list[str]]:
    """Group sentences into runs whose joined estimate respects the bounds."""
    groups: list[list[str]] = []
    current: list[str] = []

    def est(sents: list[str]) -> int:
        return estimator(" ".join(sents))

    for sent in sentences:
        if not current:
            current = [sent]
            if est(current) > max_tokens:
                groups.append(current)  # lone oversized sentence
                current = []
            continue
        if est(current + [sent]) <= max_tokens:
            current.append(sent)
        elif est(current) >= min_tokens:
            groups.append(current)
            current = [sent]
            if est(current) > max_tokens:
                groups.append(current)
                current = []
        else:
            # Below minimum but the next sentence overflows: force the merge
            # and close; the chunk gets flagged downstream.
            current.append(sent)
            groups.append(current)
            current = []

    if current:
        if est(current) >= min_tokens or not groups:
            groups.append(current)
        else:
            groups[-1].extend(current)  # sub-minimum tail joins its neighbor
    return groups


def build_chunks(
    doc: ReportDoc,
    min_tokens: int = DEFAULT_MIN_TOKENS,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    estimator: TokenEstimator = estimate_tokens,
) -> list[Chunk]:
    if not (1 <= min_tokens < max_tokens):
        raise InvalidConfig(
            f"need 1 <= min_tokens < max_tokens, got {min_tokens}, {max_tokens}"
        )

    chunks: list[Chunk] = []
    ordinal = 0
    for section in doc.sections:
        if not section.text.strip():
            continue
        sentences = split_sentences(section.text)
        for group in _pack_section(sentences, min_tokens, max_tokens, estimator):
            text = " ".join(group)
            n_tokens = estimator(text)
            chunks.append(
                Chunk(
                    chunk_id=f"{doc.report_id}#{ordinal}",
                    report_id=doc.report_id,
                    section_label=section.label,
                    text=text,
                    summary=" ".join(group[:3]),
                    token_estimate=n_tokens,
                    oversized=n_tokens > max_tokens,
                )
            )
            ordinal += 1
    return chunks

"""Core record types for the ingestion pipeline.

A raw report moves through three shapes: ``RawReport`` (text as extracted
from the source system), ``ReportDoc`` (normalized text plus section
structure), and a list of ``Chunk`` rows (retrieval units bounded by
section). ``emit_corpus`` serializes docs and chunks to JSONL and returns a
``CorpusManifest`` describing what was written.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SECTION_LABELS = (
    "final_diagnosis",
    "diagnosis",
    "microscopic_description",
    "gross_description",
    "comment",
    "immunohistochemistry",
    "body",
)


@dataclass(frozen=True)
class RawReport:
    report_id: str
    raw_text: str
    source_path: str = ""
    wsi_id: str | None = None


@dataclass(frozen=True)
class Section:
    """One labeled region of a normalized report.

    ``char_span`` is a half-open ``(start, end)`` slice into the owning
    document's clean text such that ``clean_text[start:end] == text``. The
    heading line itself is not part of the span.
    """

    label: str
    text: str
    char_span: tuple[int, int]

    def __post_init__(self) -> None:
        if self.label not in SECTION_LABELS:
            raise ValueError(f"unknown section label: {self.label!r}")


@dataclass(frozen=True)
class ReportDoc:
    report_id: str
    clean_text: str
    sections: tuple[Section, ...]
    source_path: str = ""
    wsi_id: str | None = None

    def section(self, label: str) -> Section | None:
        for sec in self.sections:
            if sec.label == label:
                return sec
        return None


@dataclass(frozen=True)
class Chunk:
    """A retrieval unit: one or more whole sentences from a single section.

    ``chunk_id`` is ``"<report_id>#<ordinal>"`` with ordinals dense from 0
    within the report. ``oversized`` marks chunks that could not be kept
    under the configured token ceiling without splitting a sentence.
    """

    chunk_id: str
    report_id: str
    section_label: str
    text: str
    summary: str
    token_estimate: int
    oversized: bool = False


@dataclass(frozen=True)
class CorpusManifest:
    doc_count: int
    chunk_count: int
    files: dict[str, str] = field(default_factory=dict)  # filename -> sha256 hex

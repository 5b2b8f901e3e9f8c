from .types import Chunk, CorpusManifest, RawReport, ReportDoc, Section
from .normalize import normalize_text
from .sections import parse_sections
from .sentences import split_sentences
from .chunks import build_chunks, estimate_tokens
from .corpus import CorpusStore, emit_corpus, ingest_report, load_corpus, read_raw_reports
from .ihc import REDACTION_MARKER, extract_markers, load_marker_lexicon, mask_ihc

__all__ = [
    "Chunk",
    "CorpusManifest",
    "CorpusStore",
    "RawReport",
    "ReportDoc",
    "Section",
    "REDACTION_MARKER",
    "build_chunks",
    "emit_corpus",
    "estimate_tokens",
    "extract_markers",
    "ingest_report",
    "load_corpus",
    "load_marker_lexicon",
    "mask_ihc",
    "normalize_text",
    "parse_sections",
    "read_raw_reports",
    "split_sentences",
]

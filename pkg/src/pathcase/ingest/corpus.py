"""Corpus assembly and JSONL persistence.

``docs.jsonl`` holds one normalized report per line with section spans;
``chunks.jsonl`` holds the retrieval units; ``manifest.json`` records counts
and SHA-256 digests of both files. Round-tripping through emit/load is
field-for-field lossless.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import IntegrityError, IoError
from .chunks import build_chunks
from .normalize import DEFAULT_PAGE_MARKER, normalize_text
from .sections import parse_sections
from .types import Chunk, CorpusManifest, RawReport, ReportDoc, Section

DOCS_FILE = "docs.jsonl"
CHUNKS_FILE = "chunks.jsonl"
MANIFEST_FILE = "manifest.json"


def ingest_report(raw: RawReport, page_marker: str = DEFAULT_PAGE_MARKER) -> ReportDoc:
    clean = normalize_text(raw.raw_text, page_marker)
    return ReportDoc(
        report_id=raw.report_id,
        clean_text=clean,
        sections=tuple(parse_sections(clean)),
        source_path=raw.source_path,
        wsi_id=raw.wsi_id,
    )


def _doc_to_row(doc: ReportDoc) -> dict:
    return {
        "report_id": doc.report_id,
        "text": doc.clean_text,
        "source_path": doc.source_path,
        "wsi_id": doc.wsi_id,
        "sections": [
            {"label": s.label, "start": s.char_span[0], "end": s.char_span[1]}
            for s in doc.sections
        ],
    }


def _doc_from_row(row: dict) -> ReportDoc:
    text = row["text"]
    sections = tuple(
        Section(s["label"], text[s["start"] : s["end"]], (s["start"], s["end"]))
        for s in row["sections"]
    )
    return ReportDoc(
        report_id=row["report_id"],
        clean_text=text,
        sections=sections,
        source_path=row.get("source_path", ""),
        wsi_id=row.get("wsi_id"),
    )


def _chunk_to_row(chunk: Chunk) -> dict:
    return {
        "chunk_id": chunk.chunk_id,
        "report_id": chunk.report_id,
        "section_label": chunk.section_label,
        "text": chunk.text,
        "summary": chunk.summary,
        "token_estimate": chunk.token_estimate,
        "oversized": chunk.oversized,
    }


def _chunk_from_row(row: dict) -> Chunk:
    return Chunk(
        chunk_id=row["chunk_id"],
        report_id=row["report_id"],
        section_label=row["section_label"],
        text=row["text"],
        summary=row["summary"],
        token_estimate=row["token_estimate"],
        oversized=row["oversized"],
    )


def _write_jsonl(path: Path, rows: list[dict]) -> str:
    payload = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows)
    data = payload.encode("utf-8")
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return hashlib.sha256(data).hexdigest()


def emit_corpus(docs: list[ReportDoc], chunks: list[Chunk], out_dir: str | Path) -> CorpusManifest:
    known = {d.report_id for d in docs}
    for chunk in chunks:
        if chunk.report_id not in known:
            raise IntegrityError(
                f"chunk {chunk.chunk_id} references unknown report {chunk.report_id}"
            )

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out}: {exc}") from exc

    files = {
        DOCS_FILE: _write_jsonl(out / DOCS_FILE, [_doc_to_row(d) for d in docs]),
        CHUNKS_FILE: _write_jsonl(out / CHUNKS_FILE, [_chunk_to_row(c) for c in chunks]),
    }
    manifest = CorpusManifest(doc_count=len(docs), chunk_count=len(chunks), files=files)
    try:
        (out / MANIFEST_FILE).write_text(
            json.dumps(
                {"doc_count": manifest.doc_count, "chunk_count": manifest.chunk_count, "files": files},
                indent=2,
            )
            + "\n",
            "utf-8",
        )
    except OSError as exc:
        raise IoError(f"cannot write manifest: {exc}") from exc
    return manifest


def load_corpus(corpus_dir: str | Path) -> tuple[list[ReportDoc], list[Chunk]]:
    root = Path(corpus_dir)
    try:
        doc_rows = [json.loads(ln) for ln in (root / DOCS_FILE).read_text("utf-8").splitlines() if ln]
        chunk_rows = [json.loads(ln) for ln in (root / CHUNKS_FILE).read_text("utf-8").splitlines() if ln]
    except OSError as exc:
        raise IoError(f"cannot read corpus from {root}: {exc}") from exc
    return [_doc_from_row(r) for r in doc_rows], [_chunk_from_row(r) for r in chunk_rows]


def read_raw_reports(path: str | Path) -> list[RawReport]:
    """Read raw reports from a JSONL file or a directory of .txt files."""
    p = Path(path)
    reports: list[RawReport] = []
    try:
        if p.is_dir():
            for f in sorted(p.glob("*.txt")):
                reports.append(RawReport(report_id=f.stem, raw_text=f.read_text("utf-8"), source_path=str(f)))
        else:
            for ln in p.read_text("utf-8").splitlines():
                if not ln.strip():
                    continue
                row = json.loads(ln)
                reports.append(
                    RawReport(
                        report_id=row["report_id"],
                        raw_text=row["text"],
                        source_path=row.get("source_path", str(p)),
                        wsi_id=row.get("wsi_id"),
                    )
                )
    except OSError as exc:
        raise IoError(f"cannot read raw reports from {p}: {exc}") from exc
    return reports


@dataclass
class CorpusStore:
    """In-memory corpus lookup used by retrieval and the RAG layer."""

    docs: dict[str, ReportDoc] = field(default_factory=dict)
    chunks: dict[str, Chunk] = field(default_factory=dict)
    chunks_by_report: dict[str, list[Chunk]] = field(default_factory=dict)

    @classmethod
    def from_lists(cls, docs: list[ReportDoc], chunks: list[Chunk]) -> "CorpusStore":
        store = cls()
        for doc in docs:
            if doc.report_id in store.docs:
                raise IntegrityError(f"duplicate report_id {doc.report_id}")
            store.docs[doc.report_id] = doc
        for chunk in chunks:
            if chunk.chunk_id in store.chunks:
                raise IntegrityError(f"duplicate chunk_id {chunk.chunk_id}")
            if chunk.report_id not in store.docs:
                raise IntegrityError(
                    f"chunk {chunk.chunk_id} references unknown report {chunk.report_id}"
                )
            store.chunks[chunk.chunk_id] = chunk
            store.chunks_by_report.setdefault(chunk.report_id, []).append(chunk)
        return store

    @classmethod
    def from_dir(cls, corpus_dir: str | Path) -> "CorpusStore":
        docs, chunks = load_corpus(corpus_dir)
        return cls.from_lists(docs, chunks)

    @classmethod
    def build(cls, raws: list[RawReport], **chunk_kwargs) -> "CorpusStore":
        docs = [ingest_report(r) for r in raws]
        chunks = [c for d in docs for c in build_chunks(d, **chunk_kwargs)]
        return cls.from_lists(docs, chunks)

    def __len__(self) -> int:
        return len(self.docs)

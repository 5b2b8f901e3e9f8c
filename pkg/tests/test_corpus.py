import json

import pytest

from pathcase.errors import IntegrityError, IoError
from pathcase.ingest.chunks import build_chunks
from pathcase.ingest.corpus import (
    CorpusStore,
    emit_corpus,
    ingest_report,
    load_corpus,
    read_raw_reports,
)
from pathcase.ingest.types import RawReport
from pathcase.synth import make_corpus


@pytest.fixture()
def built(tmp_path):
    raws, _ = make_corpus(12, seed=4)
    docs = [ingest_report(r) for r in raws]
    chunks = [c for d in docs for c in build_chunks(d)]
    manifest = emit_corpus(docs, chunks, tmp_path)
    return raws, docs, chunks, manifest, tmp_path


class TestRoundTrip:
    def test_docs_field_for_field(self, built):
        _, docs, chunks, _, out = built
        loaded_docs, loaded_chunks = load_corpus(out)
        assert loaded_docs == docs
        assert loaded_chunks == chunks

    def test_manifest_counts_and_digests(self, built):
        _, docs, chunks, manifest, out = built
        assert manifest.doc_count == len(docs)
        assert manifest.chunk_count == len(chunks)
        on_disk = json.loads((out / "manifest.json").read_text())
        assert on_disk["files"] == manifest.files
        import hashlib

        for name, digest in manifest.files.items():
            assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest

    def test_sections_reconstructed_from_spans(self, built):
        _, docs, _, _, out = built
        loaded_docs, _ = load_corpus(out)
        for doc in loaded_docs:
            for section in doc.sections:
                start, end = section.char_span
                assert doc.clean_text[start:end] == section.text


class TestIntegrity:
    def test_dangling_chunk_rejected(self, built):
        from dataclasses import replace

        _, docs, chunks, _, out = built
        bad = replace(chunks[0], report_id="ghost", chunk_id="ghost#0")
        with pytest.raises(IntegrityError, match="ghost"):
            emit_corpus(docs, chunks + [bad], out)

    def test_store_rejects_duplicate_report(self, built):
        _, docs, chunks, _, _ = built
        with pytest.raises(IntegrityError, match="duplicate"):
            CorpusStore.from_lists(docs + [docs[0]], chunks)

    def test_unwritable_dir_raises_io_error(self, built, tmp_path):
        _, docs, chunks, _, _ = built
        target = tmp_path / "blocked"
        target.write_text("a file, not a directory")
        with pytest.raises(IoError):
            emit_corpus(docs, chunks, target)


class TestRawReaders:
    def test_jsonl_reader(self, tmp_path):
        path = tmp_path / "raw.jsonl"
        rows = [
            {"report_id": "A1", "text": "FINAL DIAGNOSIS: benign.", "wsi_id": "w1"},
            {"report_id": "A2", "text": "COMMENT:\nfollow up."},
        ]
        path.write_text("\n".join(json.dumps(r) for r in rows))
        out = read_raw_reports(path)
        assert [r.report_id for r in out] == ["A1", "A2"]
        assert out[0].wsi_id == "w1"
        assert out[1].wsi_id is None

    def test_txt_directory_reader(self, tmp_path):
        (tmp_path / "b.txt").write_text("second report")
        (tmp_path / "a.txt").write_text("first report")
        out = read_raw_reports(tmp_path)
        assert [r.report_id for r in out] == ["a", "b"]
        assert out[0].raw_text == "first report"

    def test_missing_path(self, tmp_path):
        with pytest.raises(IoError):
            read_raw_reports(tmp_path / "nope.jsonl")

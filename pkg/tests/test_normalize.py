import pytest
from hypothesis import given, strategies as st

from pathcase.errors import EmptyDocument
from pathcase.ingest.normalize import normalize_text


class TestPageMarkers:
    def test_marker_lines_removed(self):
        raw = "=== PAGE 1 ===\nFindings below.\n=== PAGE 2 ===\nMore findings."
        out = normalize_text(raw)
        assert "PAGE" not in out
        assert "Findings below." in out

    def test_custom_marker_pattern(self):
        raw = "-- sheet 3 --\ntext body"
        out = normalize_text(raw, page_marker=r"^-- sheet \d+ --$")
        assert out == "text body"

    def test_marker_mid_line_is_kept(self):
        raw = "the note says === PAGE 1 === inline"
        assert "=== PAGE 1 ===" in normalize_text(raw)


class TestDehyphenation:
    def test_word_split_across_lines(self):
        assert normalize_text("adenocarcin-\noma of the lung") == "adenocarcinoma of the lung"

    def test_trailing_spaces_around_break(self):
        assert normalize_text("carcino- \n ma") == "carcinoma"

    def test_real_hyphen_compound_untouched(self):
        out = normalize_text("TTF-1 positive\nin tumor cells")
        assert "TTF-1" in out


class TestWrapping:
    def test_single_breaks_collapse(self):
        out = normalize_text("The tumor measures\n3 cm in greatest\ndimension.")
        assert out == "The tumor measures 3 cm in greatest dimension."

    def test_paragraph_breaks_survive(self):
        out = normalize_text("first paragraph\nstill first\n\nsecond paragraph")
        assert out == "first paragraph still first\n\nsecond paragraph"

    def test_multiple_blank_lines_collapse_to_one(self):
        out = normalize_text("a\n\n\n\nb")
        assert out == "a\n\nb"

    def test_heading_keeps_its_own_line(self):
        out = normalize_text("GROSS DESCRIPTION:\nA tan fragment.\nIt is soft.")
        assert out == "GROSS DESCRIPTION:\nA tan fragment. It is soft."

    def test_space_runs_collapse(self):
        assert normalize_text("a   b\t\tc") == "a b c"

    def test_crlf_normalized(self):
        assert normalize_text("a\r\nb\rc") == "a b c"


class TestEdges:
    def test_empty_raises(self):
        with pytest.raises(EmptyDocument):
            normalize_text("")

    def test_whitespace_only_raises(self):
        with pytest.raises(EmptyDocument):
            normalize_text(" \n\t \n")

    def test_idempotent(self):
        raw = "=== PAGE 1 ===\nFINAL DIAGNOSIS: carcinoma.\n\nGROSS DESCRIPTION:\nwrap-\nped text\nhere."
        once = normalize_text(raw)
        assert normalize_text(once) == once


@given(
    st.text(
        alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd", "Zs"), whitelist_characters="\n.-"),
        min_size=1,
    ).filter(lambda s: s.strip())
)
def test_normalize_idempotent_property(raw):
    once = normalize_text(raw)
    assert normalize_text(once) == once

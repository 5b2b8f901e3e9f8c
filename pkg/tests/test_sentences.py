import re

import pytest
from hypothesis import given, strategies as st

from pathcase.ingest.sentences import default_abbreviations, split_sentences


def oracle_count(text: str, guards) -> int:
    """Character-scan boundary counter, written independently of the
    implementation: a boundary is .?! followed by space(s) then [A-Z0-9],
    unless the word ending there is a guard."""
    if not text.strip():
        return 0
    boundaries = 0
    i = 0
    while i < len(text):
        if text[i] in ".?!":
            j = i
            while j + 1 < len(text) and text[j + 1] in ".?!":
                j += 1
            k = j + 1
            saw_space = False
            while k < len(text) and text[k].isspace():
                saw_space = True
                k += 1
            if saw_space and k < len(text) and (text[k].isupper() or text[k].isdigit()):
                word_start = i
                while word_start > 0 and not text[word_start - 1].isspace():
                    word_start -= 1
                if text[word_start : j + 1] not in guards:
                    boundaries += 1
            i = j + 1
        else:
            i += 1
    return boundaries + 1


class TestSplitting:
    def test_measurement_period_splits(self):
        # "cm." is intentionally not an abbreviation guard.
        out = split_sentences("Tumor is 3 cm. Margins negative.")
        assert out == ["Tumor is 3 cm.", "Margins negative."]

    def test_lowercase_continuation_does_not_split(self):
        out = split_sentences("the value is 3.5 percent of the total")
        assert len(out) == 1

    def test_abbreviation_guard(self):
        out = split_sentences("Reviewed by Dr. Smith today. Signed out.")
        assert out == ["Reviewed by Dr. Smith today.", "Signed out."]

    def test_et_al_guard(self):
        out = split_sentences("Described by Jones et al. This matches.")
        assert out == ["Described by Jones et al. This matches."]

    def test_multi_terminator_run(self):
        out = split_sentences("Really?! Yes.")
        assert out == ["Really?!", "Yes."]

    def test_digit_starts_sentence(self):
        out = split_sentences("Twelve nodes sampled. 3 are positive.")
        assert len(out) == 2

    def test_no_terminator(self):
        assert split_sentences("fragment without terminator") == [
            "fragment without terminator"
        ]

    def test_empty(self):
        assert split_sentences("   ") == []


class TestOracle:
    def test_twenty_sentence_paragraph(self):
        guards = default_abbreviations()
        parts = [f"Sentence number {i} ends here." for i in range(1, 21)]
        text = " ".join(parts)
        out = split_sentences(text)
        assert len(out) == 20
        assert len(out) == oracle_count(text, guards)
        assert out == parts

    def test_mixed_content_matches_oracle(self):
        guards = default_abbreviations()
        samples = [
            "One. Two! Three? Four.",
            "Measured 2.5 cm. Then fixed. Dr. Lee reviewed.",
            "No terminator here",
            "E.g. apples. Likewise pears.",
            "Count is 5. 6 follows. seven stays attached.",
        ]
        for text in samples:
            assert len(split_sentences(text)) == oracle_count(text, guards), text


@given(
    st.lists(
        st.sampled_from(
            ["Tumor present.", "Margins clear!", "Stage two?", "No necrosis seen.", "seen by Dr. Kim."]
        ),
        min_size=1,
        max_size=15,
    )
)
def test_character_conservation(parts):
    text = " ".join(parts)
    joined = "".join(split_sentences(text))
    assert re.sub(r"\s+", "", joined) == re.sub(r"\s+", "", text)

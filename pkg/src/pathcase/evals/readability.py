"""Flesch-Kincaid grade and Flesch Reading Ease.

Word, sentence, and syllable counting use deliberately simple heuristics:
words are whitespace tokens containing a letter or digit, sentences end at
. ? ! runs (minimum one sentence), and syllables are vowel groups with a
silent trailing 'e' dropped (minimum one per word).
"""

from __future__ import annotations

import re

from ..errors import EmptyInput

_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_WORD_CHAR_RE = re.compile(r"[A-Za-z0-9]")
_SENTENCE_END_RE = re.compile(r"[.?!]+")


def count_syllables(word: str) -> int:
    """Vowel-group heuristic with the silent-e rule; at least 1."""
    w = re.sub(r"[^a-z]", "", word.lower())
    if not w:
        return 1
    groups = _VOWEL_GROUP_RE.findall(w)
    count = len(groups)
    # Silent trailing e: "stage" has two vowel groups but one spoken
    # syllable. Keep the e when it is the only vowel ("the").
    if w.endswith("e") and not w.endswith(("le", "ee")) and count > 1:
        count -= 1
    return max(1, count)


def _words(text: str) -> list[str]:
    return [t for t in text.split() if _WORD_CHAR_RE.search(t)]


def _sentence_count(text: str) -> int:
    return max(1, len(_SENTENCE_END_RE.findall(text)))


def readability(text: str) -> dict[str, float]:
    words = _words(text)
    if not words:
        raise EmptyInput("no words in text")
    n_words = len(words)
    n_sentences = _sentence_count(text)
    n_syllables = sum(count_syllables(w) for w in words)
    return readability_from_counts(n_words, n_sentences, n_syllables)


def readability_from_counts(words: int, sentences: int, syllables: int) -> dict[str, float]:
    if words < 1 or sentences < 1:
        raise EmptyInput("need at least one word and one sentence")
    wps = words / sentences
    spw = syllables / words
    return {
        "fk_grade": 0.39 * wps + 11.8 * spw - 15.59,
        "reading_ease": 206.835 - 1.015 * wps - 84.6 * spw,
    }

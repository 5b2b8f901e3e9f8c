"""Terminator-based sentence splitting with an abbreviation guard.

A boundary is a run of ``. ? !`` followed by whitespace and then an
uppercase letter or digit, unless the token ending at the terminator is a
known abbreviation (see data/abbreviations.txt). Splitting never drops or
reorders non-whitespace characters.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_BOUNDARY_RE = re.compile(r"[.?!]+(?=\s+[A-Z0-9])")


@lru_cache(maxsize=1)
def default_abbreviations() -> frozenset[str]:
    text = resources.files("pathcase.data").joinpath("abbreviations.txt").read_text("utf-8")
    terms = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.add(line)
    return frozenset(terms)


def split_sentences(text: str, abbreviations: frozenset[str] | None = None) -> list[str]:
    if abbreviations is None:
        abbreviations = default_abbreviations()

    boundaries: list[int] = []
    for m in _BOUNDARY_RE.finditer(text):
        end = m.end()
        last_token = text[: end].rsplit(None, 1)[-1] if text[:end].strip() else ""
        if last_token in abbreviations:
            continue
        boundaries.append(end)

    sentences: list[str] = []
    start = 0
    for end in boundaries:
        piece = text[start:end].strip()
        if piece:
            sentences.append(piece)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences

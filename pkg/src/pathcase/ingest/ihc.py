"""Immunostain masking and marker extraction.

Masking supports the stain-recommendation workflow: the model must not see
the stains the original pathologist ordered. The whole immunohistochemistry
section is replaced by a redaction marker, and any line elsewhere that
mentions a lexicon marker is redacted too. Masking is idempotent.
"""

from __future__ import annotations

import re
from dataclasses import replace
from functools import lru_cache
from importlib import resources

from .sections import parse_sections
from .types import ReportDoc

REDACTION_MARKER = "[REDACTED]"


@lru_cache(maxsize=1)
def load_marker_lexicon() -> tuple[str, ...]:
    text = resources.files("pathcase.data").joinpath("ihc_markers.txt").read_text("utf-8")
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.append(line)
    return tuple(terms)


def _lexicon_re(lexicon: tuple[str, ...]) -> re.Pattern[str]:
    # Longest-first so "CK5/6" wins over any shorter overlapping term.
    parts = sorted((re.escape(t) for t in lexicon), key=len, reverse=True)
    return re.compile(r"(?<![\w/-])(" + "|".join(parts) + r")(?![\w/-])", re.IGNORECASE)


@lru_cache(maxsize=4)
def _cached_lexicon_re(lexicon: tuple[str, ...]) -> re.Pattern[str]:
    return _lexicon_re(lexicon)


def extract_markers(text: str, lexicon: tuple[str, ...] | None = None) -> list[str]:
    """Return canonical marker spellings found in text, first-seen order."""
    if lexicon is None:
        lexicon = load_marker_lexicon()
    pattern = _cached_lexicon_re(lexicon)
    canonical = {t.lower(): t for t in lexicon}
    seen: list[str] = []
    for m in pattern.finditer(text):
        term = canonical[m.group(1).lower()]
        if term not in seen:
            seen.append(term)
    return seen


def mask_ihc(doc: ReportDoc, lexicon: tuple[str, ...] | None = None) -> ReportDoc:
    """Return a copy of ``doc`` with immunostain evidence redacted.

    The immunohistochemistry section body becomes ``[REDACTED]``; lines in
    other sections that mention a lexicon marker are replaced wholesale.
    Section structure is re-derived from the masked text so spans stay
    consistent. A document with no immunostain content comes back as an
    identical copy.
    """
    if lexicon is None:
        lexicon = load_marker_lexicon()
    pattern = _cached_lexicon_re(lexicon)

    def redact_lines(text: str) -> str:
        return "\n".join(
            REDACTION_MARKER if pattern.search(line) else line
            for line in text.split("\n")
        )

    clean = doc.clean_text
    pieces: list[str] = []
    cursor = 0
    for section in doc.sections:
        start, end = section.char_span
        pieces.append(clean[cursor:start])
        if section.label == "immunohistochemistry":
            pieces.append(REDACTION_MARKER)
        else:
            pieces.append(redact_lines(section.text))
        cursor = end
    pieces.append(clean[cursor:])
    masked = "".join(pieces)

    if masked == clean:
        return replace(doc)
    return replace(doc, clean_text=masked, sections=tuple(parse_sections(masked)))

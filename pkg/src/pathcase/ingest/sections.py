"""Heading-driven section parser.

Recognized headings must start a line. A bare heading must be the whole
line; with a colon, content may follow on the same line. Text before the
first heading (or a document with no headings at all) becomes a ``body``
section.
"""

from __future__ import annotations

import re

from .types import Section

# Order matters only for readability; alternation is anchored per line and
# the longer forms are listed before their prefixes ("FINAL DIAGNOSIS"
# before "DIAGNOSIS").
_HEADING_LABELS = (
    ("FINAL DIAGNOSIS", "final_diagnosis"),
    ("MICROSCOPIC DESCRIPTION", "microscopic_description"),
    ("GROSS DESCRIPTION", "gross_description"),
    ("IMMUNOHISTOCHEMISTRY", "immunohistochemistry"),
    ("DIAGNOSIS", "diagnosis"),
    ("COMMENT", "comment"),
)

HEADING_RE = re.compile(
    r"^(?P<heading>" + "|".join(h for h, _ in _HEADING_LABELS) + r")"
    r"(?:\s*:(?P<inline>.*))?\s*$",
    re.IGNORECASE,
)

_LABEL_BY_HEADING = {h.lower(): label for h, label in _HEADING_LABELS}


def match_heading(line: str) -> re.Match[str] | None:
    """Return the heading match for a single line, or None."""
    return HEADING_RE.match(line)


def _trimmed_span(text: str, start: int, end: int) -> tuple[int, int]:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end


def parse_sections(clean_text: str) -> list[Section]:
    """Split normalized text into labeled sections.

    Always returns at least one section. Spans are non-overlapping, ordered,
    and slice back to each section's text exactly.
    """
    # Locate heading lines with their absolute offsets.
    hits: list[tuple[str, int, int]] = []  # (label, line_start, content_start)
    offset = 0
    for line in clean_text.split("\n"):
        m = HEADING_RE.match(line)
        if m:
            label = _LABEL_BY_HEADING[m.group("heading").lower()]
            inline = m.group("inline")
            if inline is not None:
                content_start = offset + m.start("inline")
            else:
                content_start = offset + len(line)
            hits.append((label, offset, content_start))
        offset += len(line) + 1  # account for the newline split() removed

    sections: list[Section] = []

    def add(label: str, start: int, end: int, *, keep_empty: bool) -> None:
        s, e = _trimmed_span(clean_text, start, end)
        if s == e and not keep_empty:
            return
        sections.append(Section(label, clean_text[s:e], (s, e)))

    if not hits:
        add("body", 0, len(clean_text), keep_empty=True)
        return sections

    add("body", 0, hits[0][1], keep_empty=False)
    for i, (label, _line_start, content_start) in enumerate(hits):
        end = hits[i + 1][1] if i + 1 < len(hits) else len(clean_text)
        add(label, content_start, end, keep_empty=True)
    return sections

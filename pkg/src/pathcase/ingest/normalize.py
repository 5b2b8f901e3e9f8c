"""Text cleanup applied before any parsing.

The raw exports carry OCR and pagination artifacts: page marker lines,
words hyphenated across line breaks, and hard-wrapped paragraphs. This
module removes those while preserving paragraph breaks and heading lines,
so section parsing downstream stays line-oriented.
"""

from __future__ import annotations

import re

from ..errors import EmptyDocument
from .sections import match_heading

DEFAULT_PAGE_MARKER = r"^=== PAGE \d+ ===$"

_DEHYPHEN_RE = re.compile(r"(\w)-[ \t]*\n[ \t]*(\w)")
_SPACE_RUN_RE = re.compile(r"[ \t]+")


def normalize_text(raw_text: str, page_marker: str = DEFAULT_PAGE_MARKER) -> str:
    """Return cleaned text: markers dropped, hyphenation repaired, wrapping
    collapsed. Raises EmptyDocument for empty or whitespace-only input.
    """
    if not raw_text or not raw_text.strip():
        raise EmptyDocument("document is empty or whitespace-only")

    text = raw_text.replace("\r\n", "\n").replace("\r", "\n")

    marker_re = re.compile(page_marker)
    kept = [ln for ln in text.split("\n") if not marker_re.match(ln.strip())]
    text = "\n".join(kept)

    # Rejoin words split across a line break: "carcino-\nma" -> "carcinoma".
    text = _DEHYPHEN_RE.sub(r"\1\2", text)

    # Collapse hard wrapping. Lines within a paragraph are joined with a
    # space; blank lines and heading lines keep their breaks so paragraph
    # and section structure survive.
    out: list[str] = []
    buffer: list[str] = []

    def flush() -> None:
        if buffer:
            out.append(" ".join(buffer))
            buffer.clear()

    for line in text.split("\n"):
        line = _SPACE_RUN_RE.sub(" ", line).strip()
        if not line:
            flush()
            if out and out[-1] != "":
                out.append("")
        elif match_heading(line):
            flush()
            out.append(line)
        else:
            buffer.append(line)
    flush()

    while out and out[-1] == "":
        out.pop()
    while out and out[0] == "":
        out.pop(0)
    return "\n".join(out)

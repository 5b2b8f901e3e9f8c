"""Seeded synthetic report generator for tests and demos.

Reports are template-composed with a small pathology vocabulary: enough
structure for section parsing, chunking, retrieval, and cohort rules to
exercise real paths, with fully deterministic output under a seed. Raw
texts optionally carry page markers, hyphenated line breaks, and hard
wrapping so the normalizer has something to do.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ingest.types import RawReport

ORGANS = ("lung", "breast", "colon", "kidney", "liver", "skin", "prostate", "bladder")

DIAGNOSES = (
    "invasive adenocarcinoma",
    "mucinous adenocarcinoma",
    "squamous cell carcinoma",
    "invasive ductal carcinoma",
    "clear cell renal cell carcinoma",
    "hepatocellular carcinoma",
    "malignant melanoma",
    "urothelial carcinoma",
)

MARKER_PANELS = {
    "lung": ("TTF-1", "Napsin A", "CK7", "p40"),
    "breast": ("ER", "PR", "HER2", "GATA3", "Ki-67"),
    "colon": ("CDX2", "CK20", "SATB2", "CK7"),
    "kidney": ("PAX8", "CD10", "Vimentin", "AMACR"),
    "liver": ("HepPar-1", "Arginase-1", "Glypican-3", "AFP"),
    "skin": ("SOX10", "S-100", "Melan-A", "HMB-45"),
    "prostate": ("PSA", "NKX3.1", "AMACR", "p63"),
    "bladder": ("GATA3", "CK20", "p63", "CK7"),
}

GROSS_PHRASES = (
    "The specimen consists of a {size} cm fragment of tan-white tissue.",
    "Received fresh is a {size} cm resection specimen with attached fat.",
    "The cut surface shows a firm gray-white mass measuring {size} cm.",
    "Serial sectioning reveals a well-circumscribed nodule of {size} cm.",
)

MICRO_PHRASES = (
    "Sections show {dx} infiltrating the surrounding stroma.",
    "The tumor exhibits {grade} nuclear atypia and frequent mitoses.",
    "There is an associated desmoplastic response with chronic inflammation.",
    "Perineural invasion is {pni}.",
    "Lymphovascular invasion is {lvi}.",
    "The adjacent parenchyma shows reactive changes without dysplasia.",
    "Tumor cells form irregular glands with cribriform architecture.",
    "Necrosis comprises approximately {necrosis} percent of the tumor volume.",
)

COMMENT_PHRASES = (
    "Findings were reviewed at the departmental consensus conference.",
    "Correlation with imaging and clinical history is recommended.",
    "Additional levels were examined and confirm the diagnosis.",
    "The case was discussed with the submitting clinician.",
)

GRADES = ("mild", "moderate", "marked")
PRESENT = ("identified", "not identified")


@dataclass(frozen=True)
class SynthCase:
    """Ground truth retained alongside each generated report."""

    report_id: str
    organ: str
    diagnosis: str
    markers: tuple[str, ...]
    has_ihc: bool


def _sentences(rng: random.Random, phrases: tuple[str, ...], n: int, **subs) -> list[str]:
    out = []
    for _ in range(n):
        template = rng.choice(phrases)
        out.append(
            template.format(
                size=f"{rng.uniform(0.5, 9.5):.1f}",
                grade=rng.choice(GRADES),
                pni=rng.choice(PRESENT),
                lvi=rng.choice(PRESENT),
                necrosis=rng.randrange(5, 60, 5),
                **subs,
            )
        )
    return out


def _wrap(rng: random.Random, text: str, width: int = 72) -> str:
    """Hard-wrap long lines, occasionally hyphenating a word across lines."""
    words = text.split(" ")
    lines: list[str] = []
    current = ""
    for word in words:
        if current and len(current) + 1 + len(word) > width:
            if len(word) > 8 and rng.random() < 0.15:
                cut = len(word) // 2
                lines.append(f"{current} {word[:cut]}-")
                current = word[cut:]
            else:
                lines.append(current)
                current = word
        else:
            current = f"{current} {word}".strip()
    if current:
        lines.append(current)
    return "\n".join(lines)


def make_report(
    rng: random.Random,
    report_id: str,
    ihc_probability: float = 0.7,
    messy: bool = True,
) -> tuple[RawReport, SynthCase]:
    organ = rng.choice(ORGANS)
    diagnosis = rng.choice(DIAGNOSES)
    panel = MARKER_PANELS[organ]
    has_ihc = rng.random() < ihc_probability
    n_markers = rng.randint(2, len(panel)) if has_ihc else 0
    markers = tuple(rng.sample(panel, n_markers)) if has_ihc else ()

    blocks = [
        f"FINAL DIAGNOSIS: {organ.capitalize()}, resection: {diagnosis}.",
        "GROSS DESCRIPTION:\n" + " ".join(_sentences(rng, GROSS_PHRASES, rng.randint(2, 4))),
        "MICROSCOPIC DESCRIPTION:\n"
        + " ".join(_sentences(rng, MICRO_PHRASES, rng.randint(4, 10), dx=diagnosis)),
    ]
    if has_ihc:
        stain_lines = [
            f"{m}: {'positive' if rng.random() < 0.7 else 'negative'} in tumor cells."
            for m in markers
        ]
        blocks.append("IMMUNOHISTOCHEMISTRY:\n" + "\n".join(stain_lines))
    blocks.append("COMMENT:\n" + " ".join(_sentences(rng, COMMENT_PHRASES, rng.randint(1, 2))))

    if messy:
        pages = []
        for i, block in enumerate(blocks, start=1):
            wrapped = "\n".join(_wrap(rng, line) for line in block.split("\n"))
            pages.append(f"=== PAGE {i} ===\n{wrapped}")
        raw_text = "\n\n".join(pages)
    else:
        raw_text = "\n\n".join(blocks)

    raw = RawReport(report_id=report_id, raw_text=raw_text, wsi_id=f"wsi-{report_id}")
    return raw, SynthCase(
        report_id=report_id,
        organ=organ,
        diagnosis=diagnosis,
        markers=markers,
        has_ihc=has_ihc,
    )


def make_corpus(
    n: int,
    seed: int = 0,
    ihc_probability: float = 0.7,
    messy: bool = True,
) -> tuple[list[RawReport], list[SynthCase]]:
    rng = random.Random(seed)
    raws: list[RawReport] = []
    cases: list[SynthCase] = []
    width = max(4, len(str(n)))
    for i in range(n):
        raw, case = make_report(rng, f"R{i:0{width}d}", ihc_probability, messy)
        raws.append(raw)
        cases.append(case)
    return raws, cases

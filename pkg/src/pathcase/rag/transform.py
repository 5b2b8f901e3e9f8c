"""Prompt-controlled report rewriting: five renderings of the same report
differing only in the instruction block."""

from __future__ import annotations

from ..errors import InvalidConfig
from ..ingest.chunks import estimate_tokens
from ..ingest.types import ReportDoc
from .context import build_transform_prompt, truncate_to_tokens
from .llm import LlmClient, generate

RENDERING_INSTRUCTIONS = {
    "synoptic": (
        "Convert the report into a CAP-style synoptic format. Extract tumor "
        "size, histologic type, margins, lymph node status, and staging "
        "parameters into labeled fields, flagging any missing elements that "
        "require manual completion."
    ),
    "clinical_summary": (
        "Condense the report into a concise clinical summary for the "
        "treating physician, highlighting the key diagnostic findings, "
        "staging information, and actionable results."
    ),
    "oncologist": (
        "Rewrite the report as an oncologist-facing summary emphasizing "
        "staging, prognostic factors, and treatment-relevant biomarkers."
    ),
    "tumor_board": (
        "Rewrite the report as a structured case summary suitable for "
        "multidisciplinary tumor board presentation."
    ),
    "patient_friendly": (
        "Rewrite the report in patient-friendly language at a 6th-8th grade "
        "reading level, replacing medical terminology with plain wording "
        "while keeping every finding accurate."
    ),
}

RENDERING_KINDS = tuple(RENDERING_INSTRUCTIONS)


def transform_report(
    report: ReportDoc,
    kind: str,
    llm: LlmClient,
    budget: int = 8192,
) -> str:
    if kind not in RENDERING_INSTRUCTIONS:
        raise InvalidConfig(
            f"unknown rendering kind {kind!r}; expected one of {RENDERING_KINDS}"
        )
    instruction = RENDERING_INSTRUCTIONS[kind]

    text = report.clean_text
    bundle = build_transform_prompt(report.report_id, text, instruction, kind)
    if bundle.token_estimate > budget:
        # Estimates are ceilinged per string, so leave two tokens of slack.
        overhead = bundle.token_estimate - estimate_tokens(text)
        text = truncate_to_tokens(text, max(1, budget - overhead - 2))
        bundle = build_transform_prompt(report.report_id, text, instruction, kind)
    return generate(bundle, llm, budget)

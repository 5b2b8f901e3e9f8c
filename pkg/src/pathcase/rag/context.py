"""Prompt assembly under a fixed context window.

Retrieved reports are admitted in rank order. When the full set overflows
the budget, each report is cut head-first to whatever share of the budget
remains when its turn comes; rank 1 is never dropped, and admission stops
once the budget is spent. Every bundle records its own token estimate so
the over-budget guard can run before any network call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import BudgetExhausted, InvalidConfig
from ..ingest.chunks import estimate_tokens
from ..retrieval import RankedHit

DEFAULT_CONTEXT_BUDGET = 8192
MIN_CONTEXT_BUDGET = 256

CASE_SYSTEM_INSTRUCTION = (
    "You are an expert pathology assistant. Your role is to synthesize "
    "information exclusively from the provided pathology reports. Base all "
    "responses on evidence found in these reports and cite specific cases "
    "when making claims. Do not introduce information beyond what is present "
    "in the retrieved documents."
)

CASE_RESPONSE_INSTRUCTION = (
    "Provide a comprehensive answer based on the reports above, citing "
    "specific case identifiers when referencing information."
)

COHORT_SYSTEM_INSTRUCTION = (
    "You are tasked with determining whether a pathology case meets specific "
    "inclusion and exclusion criteria for a research cohort. Evaluate the "
    "case based solely on information present in the report. Return your "
    "decision in JSON format."
)

COHORT_OUTPUT_FORMAT = (
    '{"case_number": "XXXXX", "decision": 0 or 1, "rationale": "brief explanation"}\n'
    "Where decision=1 means INCLUDE and decision=0 means EXCLUDE."
)

IHC_SYSTEM_INSTRUCTION = (
    "You are an expert pathology assistant recommending an immunohistochemistry "
    "workup. Rank the most informative markers for the case below, choosing "
    "only from the candidate markers observed in similar historical cases. "
    "Return your ranking in JSON format."
)

IHC_OUTPUT_FORMAT = (
    '[{"marker": "NAME", "rationale": "one-line justification"}, ...]\n'
    "Use only markers from the candidate list, most informative first."
)

TRANSFORM_SYSTEM_INSTRUCTION = (
    "You are an expert pathology assistant. Rewrite the pathology report "
    "below according to the response instruction. Preserve diagnostic "
    "accuracy and do not introduce findings that are not present in the "
    "report."
)

EMPTY_CONTEXT_MARKER = "(no retrieved reports)"


@dataclass(frozen=True)
class ContextEntry:
    report_id: str
    text: str
    tokens: int
    truncated: bool = False


@dataclass(frozen=True)
class PromptBundle:
    use_case: str
    system_instruction: str
    context_block: tuple[ContextEntry, ...]
    user_query: str
    response_instruction: str
    rendered: str
    token_estimate: int

    def render(self) -> str:
        return self.rendered


def _bundle(
    use_case: str,
    system_instruction: str,
    context_block: tuple[ContextEntry, ...],
    user_query: str,
    response_instruction: str,
    rendered: str,
) -> PromptBundle:
    return PromptBundle(
        use_case=use_case,
        system_instruction=system_instruction,
        context_block=context_block,
        user_query=user_query,
        response_instruction=response_instruction,
        rendered=rendered,
        token_estimate=estimate_tokens(rendered),
    )


def truncate_to_tokens(text: str, tokens: int) -> str:
    """Keep the head of ``text`` so its estimate is at most ``tokens``."""
    if estimate_tokens(text) <= tokens:
        return text
    return text[: tokens * 4]


def assemble_context(
    hits: Sequence[RankedHit],
    report_texts: Mapping[str, str],
    budget: int,
) -> list[ContextEntry]:
    """Select and truncate report texts for the context block."""
    if budget < 1:
        raise BudgetExhausted(f"context budget {budget} leaves no room for rank-1")
    entries: list[ContextEntry] = []
    remaining = budget
    for hit in hits:
        if remaining < 1:
            break
        text = report_texts[hit.report_id]
        need = estimate_tokens(text)
        take = min(need, remaining)
        cut = text if take == need else truncate_to_tokens(text, take)
        entries.append(
            ContextEntry(
                report_id=hit.report_id,
                text=cut,
                tokens=estimate_tokens(cut),
                truncated=take < need,
            )
        )
        remaining -= take
    return entries


def build_prompt(
    use_case: str,
    context: Sequence[ContextEntry],
    query: str,
) -> PromptBundle:
    """Render the block template for a use case; byte-stable per inputs."""
    context = tuple(context)
    if use_case in ("case_retrieval", "qa"):
        lines = ["[SYSTEM INSTRUCTION]", CASE_SYSTEM_INSTRUCTION, "[RETRIEVED REPORTS]"]
        if context:
            for i, entry in enumerate(context, start=1):
                lines.append(f"Report {i} (ID: {entry.report_id}): {entry.text}")
        else:
            lines.append(EMPTY_CONTEXT_MARKER)
        lines += ["[USER QUERY]", query, "[RESPONSE INSTRUCTION]", CASE_RESPONSE_INSTRUCTION]
        return _bundle(
            use_case, CASE_SYSTEM_INSTRUCTION, context, query,
            CASE_RESPONSE_INSTRUCTION, "\n".join(lines),
        )

    if use_case == "cohort":
        if len(context) != 1:
            raise InvalidConfig("cohort prompts take exactly one report")
        entry = context[0]
        lines = [
            "[SYSTEM INSTRUCTION]",
            COHORT_SYSTEM_INSTRUCTION,
            "[COHORT CRITERIA]",
            query,
            "[PATHOLOGY REPORT]",
            f"CASE NUMBER: {entry.report_id}",
            entry.text,
            "[OUTPUT FORMAT]",
            COHORT_OUTPUT_FORMAT,
        ]
        return _bundle(
            use_case, COHORT_SYSTEM_INSTRUCTION, context, query,
            COHORT_OUTPUT_FORMAT, "\n".join(lines),
        )

    raise InvalidConfig(f"unknown prompt use case: {use_case!r}")


def build_ihc_prompt(
    case_context: ContextEntry,
    candidate_lines: Sequence[str],
    k: int,
) -> PromptBundle:
    query = "\n".join(candidate_lines)
    lines = [
        "[SYSTEM INSTRUCTION]",
        IHC_SYSTEM_INSTRUCTION,
        "[CASE CONTEXT]",
        case_context.text,
        "[CANDIDATE MARKERS]",
        query,
        "[OUTPUT FORMAT]",
        f"Recommend at most {k} markers.",
        IHC_OUTPUT_FORMAT,
    ]
    return _bundle(
        "ihc", IHC_SYSTEM_INSTRUCTION, (case_context,), query,
        IHC_OUTPUT_FORMAT, "\n".join(lines),
    )


def build_transform_prompt(
    report_id: str,
    report_text: str,
    instruction: str,
    kind: str,
) -> PromptBundle:
    entry = ContextEntry(report_id=report_id, text=report_text, tokens=estimate_tokens(report_text))
    lines = [
        "[SYSTEM INSTRUCTION]",
        TRANSFORM_SYSTEM_INSTRUCTION,
        "[PATHOLOGY REPORT]",
        report_text,
        "[RESPONSE INSTRUCTION]",
        instruction,
    ]
    return _bundle(
        f"transform:{kind}", TRANSFORM_SYSTEM_INSTRUCTION, (entry,), report_text,
        instruction, "\n".join(lines),
    )

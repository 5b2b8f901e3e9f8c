"""Cohort construction: classify every candidate report against free-text
eligibility criteria.

Each candidate gets an independent LLM call returning a JSON decision
object. Parse failures are retried with a stricter instruction up to
``max_retries`` times; a case that never parses is recorded as failed and
the run continues. An optional retrieval prefilter narrows the candidate
set; reports it drops are recorded with decision 0 and rationale
"prefilter" without spending an LLM call.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from threading import Lock
from typing import Callable, Sequence

from ..errors import InvalidConfig, ParseFailure
from ..ingest.chunks import estimate_tokens
from ..ingest.corpus import CorpusStore
from ..retrieval import RankedHit
from .context import ContextEntry, build_prompt
from .llm import LlmClient, generate

DEFAULT_MAX_RETRIES = 2
DEFAULT_CONCURRENCY = 4
STRICT_REPROMPT = "Respond with JSON only, no surrounding prose."


@dataclass(frozen=True)
class PrefilterSpec:
    query: str
    threshold: float

    def __post_init__(self) -> None:
        if not self.query.strip():
            raise InvalidConfig("prefilter query is empty")
        if not 0.0 < self.threshold <= 1.0:
            raise InvalidConfig(f"prefilter threshold must be in (0, 1], got {self.threshold}")


@dataclass(frozen=True)
class CohortSpec:
    inclusion_criteria: str = ""
    exclusion_criteria: str = ""
    prefilter: PrefilterSpec | None = None
    concurrency: int = DEFAULT_CONCURRENCY
    max_retries: int = DEFAULT_MAX_RETRIES

    def __post_init__(self) -> None:
        if not self.inclusion_criteria.strip() and not self.exclusion_criteria.strip():
            raise InvalidConfig("at least one criterion must be non-empty")
        if self.concurrency < 1:
            raise InvalidConfig(f"concurrency must be >= 1, got {self.concurrency}")

    def criteria_text(self) -> str:
        parts = []
        if self.inclusion_criteria.strip():
            parts.append(f"Include: {self.inclusion_criteria.strip()}")
        if self.exclusion_criteria.strip():
            parts.append(f"Exclude: {self.exclusion_criteria.strip()}")
        return "\n".join(parts)


@dataclass(frozen=True)
class CohortDecision:
    case_number: str
    decision: int | None  # None iff parse_status == "failed"
    rationale: str
    parse_status: str  # "ok" | "retried_ok" | "failed"
    attempts: int


@dataclass(frozen=True)
class CohortStats:
    llm_calls: int
    seconds: float
    candidates: int
    failures: int


def parse_decision(text: str) -> CohortDecision:
    """Extract and validate the first JSON object found in ``text``."""
    decoder = json.JSONDecoder()
    obj = None
    for i, ch in enumerate(text):
        if ch != "{":
            continue
        try:
            candidate, _ = decoder.raw_decode(text[i:])
        except json.JSONDecodeError:
            continue
        if isinstance(candidate, dict):
            obj = candidate
            break
    if obj is None:
        raise ParseFailure("no JSON object in model output")

    case_number = obj.get("case_number")
    decision = obj.get("decision")
    rationale = obj.get("rationale")
    if not isinstance(case_number, str) or not case_number:
        raise ParseFailure(f"bad case_number: {case_number!r}")
    if isinstance(decision, bool) or decision not in (0, 1):
        raise ParseFailure(f"decision must be 0 or 1, got {decision!r}")
    if not isinstance(rationale, str):
        raise ParseFailure(f"rationale must be a string, got {rationale!r}")
    return CohortDecision(
        case_number=case_number,
        decision=decision,
        rationale=rationale,
        parse_status="ok",
        attempts=1,
    )


SearchFn = Callable[[str], Sequence[RankedHit]]
ProgressFn = Callable[[int, int], None]


def _evaluate_case(
    report_id: str,
    text: str,
    criteria: str,
    llm: LlmClient,
    max_retries: int,
    budget: int,
) -> CohortDecision:
    bundle = build_prompt("cohort", [ContextEntry(report_id, text, 0)], criteria)
    for attempt in range(1, max_retries + 2):
        out = generate(bundle, llm, budget)
        try:
            parsed = parse_decision(out)
        except ParseFailure:
            if attempt == 1:
                stricter = bundle.rendered + "\n" + STRICT_REPROMPT
                bundle = replace(
                    bundle, rendered=stricter, token_estimate=estimate_tokens(stricter)
                )
            continue
        return replace(
            parsed,
            case_number=report_id,  # the report id is authoritative
            parse_status="ok" if attempt == 1 else "retried_ok",
            attempts=attempt,
        )
    return CohortDecision(
        case_number=report_id,
        decision=None,
        rationale="model output never parsed as a decision object",
        parse_status="failed",
        attempts=max_retries + 1,
    )


def run_cohort(
    spec: CohortSpec,
    corpus: CorpusStore,
    llm: LlmClient,
    search_fn: SearchFn | None = None,
    budget: int = 8192,
    on_progress: ProgressFn | None = None,
) -> tuple[list[CohortDecision], CohortStats]:
    started = time.perf_counter()
    report_ids = sorted(corpus.docs)
    total = len(report_ids)

    if spec.prefilter is not None:
        if search_fn is None:
            raise InvalidConfig("prefilter requires a search function over an indexed corpus")
        hits = search_fn(spec.prefilter.query)
        retained = {h.report_id for h in hits if h.fused >= spec.prefilter.threshold}
    else:
        retained = set(report_ids)

    decisions: dict[str, CohortDecision] = {}
    for report_id in report_ids:
        if report_id not in retained:
            decisions[report_id] = CohortDecision(
                case_number=report_id,
                decision=0,
                rationale="prefilter",
                parse_status="ok",
                attempts=0,
            )

    done = len(decisions)
    if on_progress is not None:
        on_progress(done, total)

    criteria = spec.criteria_text()
    candidates = [r for r in report_ids if r in retained]
    progress_lock = Lock()

    def work(report_id: str) -> CohortDecision:
        nonlocal done
        result = _evaluate_case(
            report_id,
            corpus.docs[report_id].clean_text,
            criteria,
            llm,
            spec.max_retries,
            budget,
        )
        if on_progress is not None:
            with progress_lock:
                done += 1
                on_progress(done, total)
        return result

    if candidates:
        with ThreadPoolExecutor(max_workers=spec.concurrency) as pool:
            for decision in pool.map(work, candidates):
                decisions[decision.case_number] = decision

    ordered = [decisions[r] for r in report_ids]
    stats = CohortStats(
        llm_calls=sum(d.attempts for d in ordered),
        seconds=time.perf_counter() - started,
        candidates=len(candidates),
        failures=sum(1 for d in ordered if d.parse_status == "failed"),
    )
    return ordered, stats

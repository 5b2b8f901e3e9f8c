"""Candidate-constrained immunostain recommendation.

The candidate vocabulary comes from the stains actually ordered in similar
historical cases (plus an optional canonical panel); the LLM only reorders
within that vocabulary. Input must already be masked: any immunostain
evidence in the case context would leak the answer.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import EmptyCandidateSet, InvalidConfig, UnmaskedInput
from ..ingest.corpus import CorpusStore
from ..ingest.ihc import REDACTION_MARKER, extract_markers, load_marker_lexicon
from ..ingest.sections import parse_sections
from ..retrieval import RankedHit
from .context import ContextEntry, build_ihc_prompt
from .llm import LlmClient, generate

DEFAULT_NEIGHBORS = 10

SearchFn = Callable[[str], Sequence[RankedHit]]


@dataclass(frozen=True)
class IhcRecommendation:
    markers: tuple[tuple[str, str], ...]  # (marker, rationale), ranked
    candidate_vocabulary: frozenset[str]


def _assert_masked(case_context: str, lexicon: tuple[str, ...]) -> None:
    """Reject input that would leak the answer. A masked report may keep its
    immunohistochemistry heading as long as the content is redacted."""
    for section in parse_sections(case_context):
        if section.label != "immunohistochemistry":
            continue
        leftover = section.text.replace(REDACTION_MARKER, "").strip()
        if leftover:
            raise UnmaskedInput("case context contains unredacted immunostain results")
    found = extract_markers(case_context, lexicon)
    if found:
        raise UnmaskedInput(f"case context mentions stain markers: {found[:3]}")


def _parse_ranking(text: str) -> list[dict]:
    decoder = json.JSONDecoder()
    for i, ch in enumerate(text):
        if ch != "[":
            continue
        try:
            candidate, _ = decoder.raw_decode(text[i:])
        except json.JSONDecodeError:
            continue
        if isinstance(candidate, list):
            return [x for x in candidate if isinstance(x, dict)]
    return []


def recommend_ihc(
    case_context: str,
    search_fn: SearchFn,
    corpus: CorpusStore,
    llm: LlmClient,
    k: int,
    m_neighbors: int = DEFAULT_NEIGHBORS,
    canonical_panel: Sequence[str] = (),
    lexicon: tuple[str, ...] | None = None,
    budget: int = 8192,
) -> IhcRecommendation:
    if k < 1:
        raise InvalidConfig(f"k must be >= 1, got {k}")
    if lexicon is None:
        lexicon = load_marker_lexicon()
    _assert_masked(case_context, lexicon)

    neighbors = list(search_fn(case_context))[:m_neighbors]
    frequency: Counter[str] = Counter()
    for hit in neighbors:
        doc = corpus.docs.get(hit.report_id)
        if doc is None:
            continue
        section = doc.section("immunohistochemistry")
        if section is None:
            continue
        for marker in set(extract_markers(section.text, lexicon)):
            frequency[marker] += 1

    vocabulary = set(frequency) | set(canonical_panel)
    if not vocabulary:
        raise EmptyCandidateSet("no markers in similar cases and no canonical panel")

    # Frequency-first candidate order; canonical-only markers trail at 0.
    ordered = sorted(vocabulary, key=lambda m: (-frequency.get(m, 0), m))
    candidate_lines = [
        f"{i}. {marker} (seen in {frequency.get(marker, 0)} of {len(neighbors)} similar cases)"
        for i, marker in enumerate(ordered, start=1)
    ]

    bundle = build_ihc_prompt(
        ContextEntry(report_id="case", text=case_context, tokens=0),
        candidate_lines,
        k,
    )
    raw = generate(bundle, llm, budget)

    canonical_by_lower = {m.lower(): m for m in vocabulary}
    picked: list[tuple[str, str]] = []
    seen: set[str] = set()
    for row in _parse_ranking(raw):
        name = row.get("marker")
        if not isinstance(name, str):
            continue
        marker = canonical_by_lower.get(name.strip().lower())
        if marker is None or marker in seen:
            continue  # outside the vocabulary or duplicate: drop silently
        rationale = row.get("rationale")
        picked.append((marker, rationale if isinstance(rationale, str) else ""))
        seen.add(marker)
        if len(picked) == k:
            break

    # Top up from the frequency order when the model returned too few.
    for marker in ordered:
        if len(picked) == k:
            break
        if marker not in seen:
            picked.append(
                (marker, f"ordered in {frequency.get(marker, 0)} of {len(neighbors)} similar cases")
            )
            seen.add(marker)

    return IhcRecommendation(markers=tuple(picked), candidate_vocabulary=frozenset(vocabulary))

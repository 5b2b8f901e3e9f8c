"""LLM clients: an HTTP chat-completions client and deterministic stubs.

The stubs drive tests and offline demos. Each behavior is a plain function
from rendered prompt to completion text; ``StubLlm`` records every prompt
it sees so tests can assert on what the model was actually shown.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import httpx

from ..errors import BudgetExhausted, ProviderUnavailable
from .context import PromptBundle


@dataclass(frozen=True)
class LlmConfig:
    endpoint_url: str = ""
    model_id: str = "stub"
    api_key: str = ""
    temperature: float = 0.2
    max_tokens: int = 1024
    timeout: float = 60.0
    max_attempts: int = 3
    backoff_base: float = 0.5


class LlmClient(Protocol):
    def complete(self, prompt: str) -> str: ...


@dataclass
class HttpLlm:
    """Chat-completions client with bounded retry on transient failures."""

    config: LlmConfig
    transport: httpx.BaseTransport | None = None
    _sleep: Callable[[float], None] = field(default=time.sleep, repr=False)

    def complete(self, prompt: str) -> str:
        payload = {
            "model": self.config.model_id,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        }
        headers = {}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"

        last_error: Exception | None = None
        for attempt in range(self.config.max_attempts):
            if attempt:
                self._sleep(self.config.backoff_base * (2 ** (attempt - 1)))
            try:
                with httpx.Client(transport=self.transport, timeout=self.config.timeout) as client:
                    resp = client.post(self.config.endpoint_url, json=payload, headers=headers)
                if resp.status_code == 429 or resp.status_code >= 500:
                    last_error = ProviderUnavailable(f"LLM endpoint returned {resp.status_code}")
                    continue
                resp.raise_for_status()
                return resp.json()["choices"][0]["message"]["content"]
            except httpx.TransportError as exc:
                last_error = exc
        raise ProviderUnavailable(
            f"LLM endpoint failed after {self.config.max_attempts} attempts: {last_error}"
        )


def _block(prompt: str, label: str) -> str:
    """Extract the text between ``[label]`` and the next ``[...]`` block."""
    pattern = re.compile(re.escape(f"[{label}]") + r"\n(.*?)(?=\n\[[A-Z ]+\]\n|\Z)", re.DOTALL)
    m = pattern.search(prompt)
    return m.group(1).strip() if m else ""


def echo_behavior(prompt: str) -> str:
    query = _block(prompt, "USER QUERY")
    return f"Based on the retrieved reports: {query}"


def rule_cohort_behavior(
    include_terms: tuple[str, ...] = ("adenocarcinoma",),
    exclude_terms: tuple[str, ...] = ("mucinous",),
) -> Callable[[str], str]:
    """Include iff the report mentions every include term and no exclude term."""

    def behavior(prompt: str) -> str:
        report = _block(prompt, "PATHOLOGY REPORT")
        case_match = re.search(r"CASE NUMBER: (\S+)", report)
        case_number = case_match.group(1) if case_match else "unknown"
        text = report.lower()
        include = all(t.lower() in text for t in include_terms) and not any(
            t.lower() in text for t in exclude_terms
        )
        return json.dumps(
            {
                "case_number": case_number,
                "decision": 1 if include else 0,
                "rationale": "matches criteria terms" if include else "criteria terms not met",
            }
        )

    return behavior


def frequency_ihc_behavior(prompt: str) -> str:
    """Return the candidate markers in the order they were listed."""
    lines = _block(prompt, "CANDIDATE MARKERS").splitlines()
    k_match = re.search(r"Recommend at most (\d+) markers", prompt)
    k = int(k_match.group(1)) if k_match else len(lines)
    out = []
    for line in lines[:k]:
        m = re.match(r"\d+\.\s*(.+?)\s*\(", line)
        if m:
            out.append({"marker": m.group(1), "rationale": "frequently ordered in similar cases"})
    return json.dumps(out)


def transform_behavior(prompt: str) -> str:
    instruction = _block(prompt, "RESPONSE INSTRUCTION").lower()
    if "synoptic" in instruction:
        return (
            "Tumor Size: 3.2 cm\n"
            "Histologic Type: adenocarcinoma\n"
            "Margins: negative\n"
            "Lymph Node Status: 0 of 12 involved\n"
            "Missing Elements: lymphovascular invasion not stated"
        )
    if "patient" in instruction:
        return (
            "We looked at the tissue. We found a small tumor. "
            "The edges were clear. No cancer was seen in the lymph nodes."
        )
    return (
        "The specimen demonstrates invasive adenocarcinoma measuring 3.2 cm "
        "with uninvolved resection margins and no regional lymph node "
        "metastasis identified in twelve examined nodes."
    )


def auto_behavior(prompt: str) -> str:
    """Dispatch on the prompt's block structure; default stub for the service."""
    if "[COHORT CRITERIA]" in prompt:
        return rule_cohort_behavior()(prompt)
    if "[CANDIDATE MARKERS]" in prompt:
        return frequency_ihc_behavior(prompt)
    if "[PATHOLOGY REPORT]" in prompt and "[RESPONSE INSTRUCTION]" in prompt:
        return transform_behavior(prompt)
    return echo_behavior(prompt)


@dataclass
class StubLlm:
    behavior: Callable[[str], str] = auto_behavior
    prompts: list[str] = field(default_factory=list)

    def complete(self, prompt: str) -> str:
        self.prompts.append(prompt)
        return self.behavior(prompt)


@dataclass
class FlakyLlm:
    """Wraps a client, returning garbage for the first ``failures`` calls."""

    inner: LlmClient
    failures: int = 1
    garbage: str = "I cannot comply with that request."
    calls: int = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        if self.calls <= self.failures:
            return self.garbage
        return self.inner.complete(prompt)


def generate(bundle: PromptBundle, llm: LlmClient, budget: int) -> str:
    """Run one completion; the budget check happens before any client call."""
    if bundle.token_estimate > budget:
        raise BudgetExhausted(
            f"prompt needs {bundle.token_estimate} tokens, budget is {budget}"
        )
    return llm.complete(bundle.rendered)

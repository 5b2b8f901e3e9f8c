from .context import (
    ContextEntry,
    PromptBundle,
    assemble_context,
    build_prompt,
    build_ihc_prompt,
    build_transform_prompt,
)
from .llm import (
    HttpLlm,
    LlmClient,
    LlmConfig,
    StubLlm,
    auto_behavior,
    echo_behavior,
    generate,
    rule_cohort_behavior,
)
from .cohort import CohortDecision, CohortSpec, CohortStats, parse_decision, run_cohort
from .ihc_rec import IhcRecommendation, recommend_ihc
from .transform import RENDERING_KINDS, transform_report

__all__ = [
    "CohortDecision",
    "CohortSpec",
    "CohortStats",
    "ContextEntry",
    "HttpLlm",
    "IhcRecommendation",
    "LlmClient",
    "LlmConfig",
    "PromptBundle",
    "RENDERING_KINDS",
    "StubLlm",
    "assemble_context",
    "auto_behavior",
    "build_ihc_prompt",
    "build_prompt",
    "build_transform_prompt",
    "echo_behavior",
    "generate",
    "parse_decision",
    "recommend_ihc",
    "rule_cohort_behavior",
    "run_cohort",
    "transform_report",
]

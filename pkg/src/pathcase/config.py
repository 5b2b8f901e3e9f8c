"""Engine configuration: defaults, TOML file loading, env overrides.

Precedence, lowest to highest: dataclass defaults, the TOML file, then the
environment variables EMBED_URL, EMBED_KEY, LLM_URL, LLM_KEY, LLM_MODEL.
Setting an URL via environment also flips the matching backend to "http".
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import InvalidConfig, IoError
from .embed import EncoderConfig
from .rag.llm import LlmConfig
from .retrieval import DEFAULT_K_BACKEND, DEFAULT_K_FINAL, FusionWeights

MIN_CONTEXT_BUDGET = 256


@dataclass(frozen=True)
class EngineConfig:
    corpus_dir: str = "corpus"
    index_dir: str = "indexes"
    weights: FusionWeights = field(default_factory=FusionWeights)
    k_backend: int = DEFAULT_K_BACKEND
    k_final: int = DEFAULT_K_FINAL
    context_budget: int = 8192
    encoder_backend: str = "mock"  # "mock" | "http"
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    mock_dim: int = 64
    mock_seed: int = 0
    llm_backend: str = "stub"  # "stub" | "http"
    llm: LlmConfig = field(default_factory=LlmConfig)
    cohort_concurrency: int = 4
    cohort_max_retries: int = 2
    ihc_neighbors: int = 10
    ihc_panel: tuple[str, ...] = ()
    auth_token: str = ""

    def __post_init__(self) -> None:
        if self.context_budget < MIN_CONTEXT_BUDGET:
            raise InvalidConfig(
                f"context_budget must be >= {MIN_CONTEXT_BUDGET}, got {self.context_budget}"
            )
        if self.encoder_backend not in ("mock", "http"):
            raise InvalidConfig(f"encoder_backend must be mock or http, got {self.encoder_backend!r}")
        if self.llm_backend not in ("stub", "http"):
            raise InvalidConfig(f"llm_backend must be stub or http, got {self.llm_backend!r}")
        if self.k_backend < 1 or self.k_final < 1:
            raise InvalidConfig("k_backend and k_final must be positive")


def _take(cls: type, data: Mapping[str, Any]) -> dict[str, Any]:
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise InvalidConfig(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return dict(data)


def config_from_dict(data: Mapping[str, Any]) -> EngineConfig:
    data = dict(data)
    weights = FusionWeights(**_take(FusionWeights, data.pop("weights", {})))
    encoder = EncoderConfig(**_take(EncoderConfig, data.pop("encoder", {})))
    llm = LlmConfig(**_take(LlmConfig, data.pop("llm", {})))
    if "ihc_panel" in data:
        data["ihc_panel"] = tuple(data["ihc_panel"])
    kwargs = _take(EngineConfig, data)
    kwargs.update(weights=weights, encoder=encoder, llm=llm)
    return EngineConfig(**kwargs)


def apply_env_overrides(config: EngineConfig, env: Mapping[str, str]) -> EngineConfig:
    encoder = config.encoder
    llm = config.llm
    encoder_backend = config.encoder_backend
    llm_backend = config.llm_backend

    if env.get("EMBED_URL"):
        encoder = replace(encoder, endpoint_url=env["EMBED_URL"])
        encoder_backend = "http"
    if env.get("EMBED_KEY"):
        encoder = replace(encoder, api_key=env["EMBED_KEY"])
    if env.get("LLM_URL"):
        llm = replace(llm, endpoint_url=env["LLM_URL"])
        llm_backend = "http"
    if env.get("LLM_KEY"):
        llm = replace(llm, api_key=env["LLM_KEY"])
    if env.get("LLM_MODEL"):
        llm = replace(llm, model_id=env["LLM_MODEL"])

    return replace(
        config,
        encoder=encoder,
        llm=llm,
        encoder_backend=encoder_backend,
        llm_backend=llm_backend,
    )


def load_config(path: str | Path | None, env: Mapping[str, str] | None = None) -> EngineConfig:
    if path is None:
        config = EngineConfig()
    else:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise IoError(f"cannot read config {path}: {exc}") from exc
        try:
            data = tomllib.loads(raw.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise InvalidConfig(f"bad TOML in {path}: {exc}") from exc
        config = config_from_dict(data)
    if env is not None:
        config = apply_env_overrides(config, env)
    return config

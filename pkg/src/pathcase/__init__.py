"""Retrieval-augmented engine for free-text pathology report archives."""

from .config import EngineConfig, load_config
from .retrieval import FusionWeights, RankedHit, SearchRequest

__version__ = "0.1.0"

__all__ = [
    "EngineConfig",
    "FusionWeights",
    "RankedHit",
    "SearchRequest",
    "load_config",
    "__version__",
]

from .ranks import RankEntry, rank_metrics, recall_at_k
from .panels import PanelCase, panel_metrics
from .textgen import bleu4, rouge
from .readability import count_syllables, readability
from .stats import MetricReport, paired_bootstrap, wilson

__all__ = [
    "MetricReport",
    "PanelCase",
    "RankEntry",
    "bleu4",
    "count_syllables",
    "paired_bootstrap",
    "panel_metrics",
    "rank_metrics",
    "readability",
    "recall_at_k",
    "rouge",
    "wilson",
]

"""Interval statistics: paired bootstrap for mean differences and the
Wilson score interval for proportions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InvalidInput


@dataclass(frozen=True)
class MetricReport:
    name: str
    value: float
    ci_low: float | None
    ci_high: float | None
    n: int
    method: str  # "bootstrap" | "wilson" | "point"

    def __post_init__(self) -> None:
        if self.ci_low is not None and self.ci_high is not None:
            if not (self.ci_low <= self.value <= self.ci_high):
                raise InvalidInput(
                    f"{self.name}: value {self.value} outside CI [{self.ci_low}, {self.ci_high}]"
                )


def paired_bootstrap(
    a: Sequence[float],
    b: Sequence[float],
    resamples: int = 2000,
    seed: int = 0,
    name: str = "mean_diff",
) -> MetricReport:
    """Percentile bootstrap CI for mean(a - b) over paired observations."""
    if len(a) != len(b):
        raise InvalidInput(f"paired inputs differ in length: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise InvalidInput("need at least 2 paired observations")
    diffs = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    n = diffs.shape[0]

    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(resamples, n))
    means = diffs[idx].mean(axis=1)
    low, high = np.percentile(means, [2.5, 97.5])

    value = float(diffs.mean())
    # Guard against the point estimate landing a hair outside the empirical
    # percentiles on degenerate data.
    return MetricReport(
        name=name,
        value=value,
        ci_low=min(float(low), value),
        ci_high=max(float(high), value),
        n=n,
        method="bootstrap",
    )


def wilson(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clipped to [0, 1].

    The boundaries are exact at the extremes: 0 successes pins the lower
    bound to 0 and all successes pins the upper bound to 1.
    """
    if n < 1 or not 0 <= successes <= n:
        raise InvalidInput(f"need 0 <= successes <= n with n >= 1, got {successes}/{n}")
    p = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == n else min(1.0, center + half)
    return (low, high)

"""Reference-overlap metrics for generated text: ROUGE-1/2/L and BLEU-4.

Tokenization is lowercase whitespace splitting. Empty candidate or
reference scores 0.0 rather than raising; generation can legitimately
produce nothing and the harness should keep going.
"""

from __future__ import annotations

import math
from collections import Counter

_BLEU_EPSILON = 1e-9


def _tokens(text: str) -> list[str]:
    return text.lower().split()


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _f1(overlap: int, cand_total: int, ref_total: int) -> float:
    if overlap == 0:
        return 0.0
    precision = overlap / cand_total
    recall = overlap / ref_total
    return 2 * precision * recall / (precision + recall)


def _lcs_length(a: list[str], b: list[str]) -> int:
    # Rolling single-row DP keeps memory at O(min side).
    if len(b) > len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        row = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                row.append(prev[j - 1] + 1)
            else:
                row.append(max(prev[j], row[-1]))
        prev = row
    return prev[-1]


def rouge(candidate: str, reference: str, variant: str) -> float:
    """ROUGE F1 for variant "1", "2", or "L"."""
    if variant not in ("1", "2", "L"):
        raise ValueError(f"variant must be '1', '2', or 'L', got {variant!r}")
    cand = _tokens(candidate)
    ref = _tokens(reference)
    if not cand or not ref:
        return 0.0

    if variant == "L":
        return _f1(_lcs_length(cand, ref), len(cand), len(ref))

    n = int(variant)
    cand_counts = _ngrams(cand, n)
    ref_counts = _ngrams(ref, n)
    overlap = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
    return _f1(overlap, sum(cand_counts.values()), sum(ref_counts.values()))


def bleu4(candidate: str, reference: str) -> float:
    """BLEU-4: brevity penalty times the geometric mean of clipped 1..4-gram
    precisions. Zero counts are smoothed with a tiny epsilon, except that an
    order with no candidate n-grams AND no reference n-grams is skipped as
    vacuous, so identical short texts still score 1.0.
    """
    cand = _tokens(candidate)
    ref = _tokens(reference)
    if not cand or not ref:
        return 0.0

    log_sum = 0.0
    orders = 0
    for n in range(1, 5):
        cand_counts = _ngrams(cand, n)
        ref_counts = _ngrams(ref, n)
        total = sum(cand_counts.values())
        if total == 0 and not ref_counts:
            continue
        orders += 1
        if total == 0:
            log_sum += math.log(_BLEU_EPSILON)
            continue
        overlap = sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
        p = overlap / total if overlap else _BLEU_EPSILON
        log_sum += math.log(p)
    if orders == 0:
        return 0.0
    geo_mean = math.exp(log_sum / orders)

    bp = 1.0 if len(cand) >= len(ref) else math.exp(1.0 - len(ref) / len(cand))
    return bp * geo_mean

"""Retrieval accuracy metrics: recall at k, reciprocal rank, and the
single-target nDCG form, each checked against counting oracles."""

import math
import random

import pytest

from pathcase.errors import EmptyInput, InvalidInput
from pathcase.evals.ranks import RankEntry, rank_metrics, rank_of, recall_at_k


def entries(ranks):
    return [
        RankEntry(query_id=f"q{i}", target_report_id=f"r{i}", rank=r)
        for i, r in enumerate(ranks)
    ]


class TestRankEntry:
    def test_rank_must_be_positive(self):
        with pytest.raises(InvalidInput):
            RankEntry(query_id="q", target_report_id="r", rank=0)

    def test_miss_allowed(self):
        assert RankEntry(query_id="q", target_report_id="r", rank=None).rank is None


class TestRankOf:
    def test_found_is_one_based(self):
        assert rank_of("b", ["a", "b", "c"]) == 2

    def test_missing_is_none(self):
        assert rank_of("z", ["a", "b"]) is None


class TestRecall:
    def test_semantic_row_replay(self):
        # 26, 29, 32 hits out of 32 at cutoffs 1, 3, 10.
        ranks = [1] * 26 + [2] * 3 + [4] * 3
        log = entries(ranks)
        assert recall_at_k(log, 1) == pytest.approx(0.8125)
        assert recall_at_k(log, 3) == pytest.approx(0.90625)
        assert recall_at_k(log, 10) == pytest.approx(1.0)

    def test_keyword_row_replay(self):
        # 6, 10, 13 hits out of 32 at cutoffs 1, 3, 10.
        ranks = [1] * 6 + [2] * 4 + [5] * 3 + [None] * 19
        log = entries(ranks)
        assert recall_at_k(log, 1) == pytest.approx(0.1875)
        assert recall_at_k(log, 3) == pytest.approx(0.3125)
        assert recall_at_k(log, 10) == pytest.approx(0.40625)

    def test_perfect_log(self):
        log = entries([1] * 7)
        for k in (1, 3, 10):
            assert recall_at_k(log, k) == 1.0

    def test_misses_count_as_failures(self):
        log = entries([1, None, None, 2])
        assert recall_at_k(log, 10) == pytest.approx(0.5)

    def test_random_log_matches_counting_oracle(self):
        rng = random.Random(4)
        ranks = [rng.choice([None] + list(range(1, 30))) for _ in range(50)]
        log = entries(ranks)
        for k in (1, 2, 5, 10, 25):
            expected = sum(1 for r in ranks if r is not None and r <= k) / 50
            assert recall_at_k(log, k) == pytest.approx(expected, abs=1e-12)

    def test_nondecreasing_in_k(self):
        rng = random.Random(8)
        ranks = [rng.choice([None] + list(range(1, 15))) for _ in range(40)]
        log = entries(ranks)
        values = [recall_at_k(log, k) for k in range(1, 20)]
        assert values == sorted(values)

    def test_empty_log_rejected(self):
        with pytest.raises(EmptyInput):
            recall_at_k([], 1)
        with pytest.raises(EmptyInput):
            rank_metrics([], 10)

    def test_bad_k_rejected(self):
        with pytest.raises(InvalidInput):
            recall_at_k(entries([1]), 0)


class TestRankMetrics:
    def test_all_rank_one(self):
        out = rank_metrics(entries([1, 1, 1]), cutoff=10)
        assert out["mrr"] == pytest.approx(1.0)
        assert out["ndcg"] == pytest.approx(1.0)

    def test_rank_three_ndcg_closed_form(self):
        out = rank_metrics(entries([3]), cutoff=10)
        assert out["ndcg"] == pytest.approx(1 / math.log2(4), abs=1e-12)
        assert out["mrr"] == pytest.approx(1 / 3, abs=1e-12)

    def test_cutoff_zeroes_both_metrics(self):
        out = rank_metrics(entries([5]), cutoff=4)
        assert out == {"mrr": 0.0, "ndcg": 0.0}

    def test_random_log_matches_formula_oracle(self):
        rng = random.Random(19)
        ranks = [rng.choice([None] + list(range(1, 250))) for _ in range(100)]
        log = entries(ranks)
        cutoff = 200
        rr = [
            1 / r if r is not None and r <= cutoff else 0.0 for r in ranks
        ]
        gain = [
            1 / math.log2(r + 1) if r is not None and r <= cutoff else 0.0 for r in ranks
        ]
        out = rank_metrics(log, cutoff=cutoff)
        assert out["mrr"] == pytest.approx(sum(rr) / len(rr), abs=1e-12)
        assert out["ndcg"] == pytest.approx(sum(gain) / len(gain), abs=1e-12)

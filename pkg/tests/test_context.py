"""Prompt construction: block templates, budget-bounded context admission,
and byte stability."""

import pytest

from pathcase.errors import BudgetExhausted, InvalidConfig
from pathcase.ingest.chunks import estimate_tokens
from pathcase.rag.context import (
    EMPTY_CONTEXT_MARKER,
    ContextEntry,
    assemble_context,
    build_ihc_prompt,
    build_prompt,
    build_transform_prompt,
    truncate_to_tokens,
)
from pathcase.retrieval import RankedHit


def hit(report_id, fused=0.5):
    return RankedHit(report_id=report_id, fused=fused, s_doc=0.0, s_chunk=0.0, s_bm25=0.0)


def text_of_tokens(tokens, char="x"):
    return char * (tokens * 4)


def entry(report_id, text="Sections show tumor."):
    return ContextEntry(report_id=report_id, text=text, tokens=estimate_tokens(text))


class TestTruncate:
    def test_under_limit_untouched(self):
        assert truncate_to_tokens("abcd", 1) == "abcd"

    def test_cut_to_character_budget(self):
        text = text_of_tokens(10)
        cut = truncate_to_tokens(text, 4)
        assert cut == text[:16]
        assert estimate_tokens(cut) == 4


class TestAssembleContext:
    def test_all_fit_untruncated_in_rank_order(self):
        hits = [hit("A", 0.9), hit("B", 0.8), hit("C", 0.7)]
        texts = {"A": "alpha report.", "B": "beta report.", "C": "gamma report."}
        entries = assemble_context(hits, texts, budget=1000)
        assert [e.report_id for e in entries] == ["A", "B", "C"]
        assert all(not e.truncated for e in entries)
        assert [e.text for e in entries] == ["alpha report.", "beta report.", "gamma report."]

    def test_rank_one_never_dropped(self):
        hits = [hit("A", 0.9), hit("B", 0.8)]
        texts = {"A": text_of_tokens(500), "B": text_of_tokens(10)}
        entries = assemble_context(hits, texts, budget=300)
        assert [e.report_id for e in entries] == ["A"]
        assert entries[0].truncated
        assert entries[0].tokens == 300

    def test_exactly_two_of_five_fit(self):
        hits = [hit(f"R{i}", 0.9 - i / 10) for i in range(5)]
        texts = {
            "R0": text_of_tokens(60),
            "R1": text_of_tokens(40),
            "R2": text_of_tokens(30),
            "R3": text_of_tokens(30),
            "R4": text_of_tokens(30),
        }
        entries = assemble_context(hits, texts, budget=100)
        assert [e.report_id for e in entries] == ["R0", "R1"]
        assert all(not e.truncated for e in entries)

    def test_partial_tail_truncated_head_first(self):
        hits = [hit("A", 0.9), hit("B", 0.8)]
        full = "HEAD " + text_of_tokens(59)
        texts = {"A": text_of_tokens(60), "B": full}
        entries = assemble_context(hits, texts, budget=100)
        assert entries[1].truncated
        assert entries[1].tokens == 40
        assert entries[1].text == full[:160]
        assert entries[1].text.startswith("HEAD ")

    def test_budget_spent_stops_admission(self):
        hits = [hit("A", 0.9), hit("B", 0.8), hit("C", 0.7)]
        texts = {k: text_of_tokens(50) for k in "ABC"}
        entries = assemble_context(hits, texts, budget=100)
        assert [e.report_id for e in entries] == ["A", "B"]

    def test_total_tokens_never_exceed_budget(self):
        import random

        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(1, 8)
            hits = [hit(f"R{i}", 1 - i / 10) for i in range(n)]
            texts = {f"R{i}": text_of_tokens(rng.randint(1, 120)) for i in range(n)}
            budget = rng.randint(1, 300)
            entries = assemble_context(hits, texts, budget)
            assert sum(e.tokens for e in entries) <= budget

    def test_zero_budget_rejected(self):
        with pytest.raises(BudgetExhausted):
            assemble_context([hit("A")], {"A": "text"}, budget=0)


class TestCasePrompt:
    def test_block_structure_and_grounding_sentences(self):
        bundle = build_prompt(
            "case_retrieval", [entry("R1"), entry("R2")], "melanoma cases"
        )
        rendered = bundle.render()
        for block in (
            "[SYSTEM INSTRUCTION]",
            "[RETRIEVED REPORTS]",
            "[USER QUERY]",
            "[RESPONSE INSTRUCTION]",
        ):
            assert block in rendered
        assert "You are an expert pathology assistant." in rendered
        assert "Do not introduce information beyond what is present" in rendered
        assert "citing specific case identifiers" in rendered
        assert "melanoma cases" in rendered

    def test_reports_numbered_with_ids(self):
        bundle = build_prompt("case_retrieval", [entry("R9"), entry("R4")], "q")
        rendered = bundle.render()
        assert "Report 1 (ID: R9): Sections show tumor." in rendered
        assert "Report 2 (ID: R4): Sections show tumor." in rendered

    def test_empty_context_uses_marker(self):
        bundle = build_prompt("qa", [], "what is the usual stage?")
        assert EMPTY_CONTEXT_MARKER in bundle.render()

    def test_byte_stable(self):
        args = ("case_retrieval", [entry("R1")], "query text")
        assert build_prompt(*args).render() == build_prompt(*args).render()

    def test_token_estimate_matches_rendered(self):
        bundle = build_prompt("case_retrieval", [entry("R1")], "q")
        assert bundle.token_estimate == estimate_tokens(bundle.render())

    def test_unknown_use_case_rejected(self):
        with pytest.raises(InvalidConfig):
            build_prompt("triage", [], "q")


class TestCohortPrompt:
    CRITERIA = "Include: invasive ductal carcinoma. Exclude: prior therapy."

    def test_criteria_embedded_verbatim_between_blocks(self):
        bundle = build_prompt("cohort", [entry("C77")], self.CRITERIA)
        rendered = bundle.render()
        criteria_block = rendered.split("[COHORT CRITERIA]")[1].split("[PATHOLOGY REPORT]")[0]
        assert criteria_block.strip() == self.CRITERIA

    def test_decision_schema_and_case_number(self):
        bundle = build_prompt("cohort", [entry("C77")], self.CRITERIA)
        rendered = bundle.render()
        assert "Return your decision in JSON format" in rendered
        assert "CASE NUMBER: C77" in rendered
        assert '"decision": 0 or 1' in rendered
        assert "decision=1 means INCLUDE and decision=0 means EXCLUDE" in rendered

    def test_exactly_one_report_required(self):
        with pytest.raises(InvalidConfig):
            build_prompt("cohort", [], self.CRITERIA)
        with pytest.raises(InvalidConfig):
            build_prompt("cohort", [entry("a"), entry("b")], self.CRITERIA)


class TestIhcPrompt:
    def test_candidate_block_and_limit(self):
        bundle = build_ihc_prompt(
            entry("R3", "Masked case context."),
            ["1. TTF-1 (seen in 4 of 5 similar cases)", "2. CK7 (seen in 2 of 5 similar cases)"],
            k=5,
        )
        rendered = bundle.render()
        assert "[CASE CONTEXT]" in rendered
        assert "[CANDIDATE MARKERS]" in rendered
        assert "1. TTF-1 (seen in 4 of 5 similar cases)" in rendered
        assert "Recommend at most 5 markers." in rendered
        assert "Use only markers from the candidate list" in rendered


class TestTransformPrompt:
    def test_report_and_instruction_blocks(self):
        bundle = build_transform_prompt(
            "R2", "FINAL DIAGNOSIS: benign nevus.", "Rewrite as a synoptic report.", "synoptic"
        )
        rendered = bundle.render()
        assert "[PATHOLOGY REPORT]" in rendered
        assert "FINAL DIAGNOSIS: benign nevus." in rendered
        assert "Rewrite as a synoptic report." in rendered
        assert bundle.use_case == "transform:synoptic"

import pytest
from hypothesis import given
import hypothesis.strategies as st

from supframes.detector import (
    Candidate,
    context_window,
    detect_candidates,
    detect_document,
    filter_non_superlative,
    segment,
)

FISHING = (
    "Tom went fishing at the lake together with his friends. "
    "He caught the largest fish."
)


class TestSegment:
    def test_three_terminals(self):
        assert [s.text for s in segment("A. B? C!")] == ["A.", "B?", "C!"]

    def test_empty(self):
        assert segment("") == []

    def test_abbreviation_guard(self):
        sents = segment("Mr. Smith arrived. He left.")
        assert [s.text for s in sents] == ["Mr. Smith arrived.", "He left."]

    def test_decimal_not_boundary(self):
        assert len(segment("It costs 3.5 million. Nobody paid.")) == 2

    def test_newline_boundary(self):
        sents = segment("Which one is best\nThe red one")
        assert [s.text for s in sents] == ["Which one is best", "The red one"]

    def test_offsets_faithful(self):
        text = "  Mr. Smith arrived.  He left. "
        for sent in segment(text):
            assert text[sent.start:sent.end] == sent.text

    def test_no_trailing_punct(self):
        sents = segment("no punctuation at all")
        assert len(sents) == 1
        assert sents[0].text == "no punctuation at all"


class TestDetect:
    def test_adjectival_est(self):
        cands = detect_candidates("He is the tallest.")
        assert len(cands) == 1
        assert cands[0].surface == "tallest"
        assert cands[0].kind == "adjectival"

    def test_adverbial_most(self):
        cands = detect_candidates(
            "Most commonly, psychologists use paper-and-pencil surveys."
        )
        assert [c.surface for c in cands] == ["Most"]
        assert cands[0].kind == "adverbial"

    def test_nothing(self):
        assert detect_candidates("The fish swam.") == []

    @pytest.mark.parametrize(
        "sentence,surface",
        [
            ("The biggest port is here.", "biggest"),
            ("That was the funniest joke.", "funniest"),
            ("She is the wisest of all.", "wisest"),
            ("The largest fish won.", "largest"),
            ("Our eldest son left.", "eldest"),
            ("The farthest star faded.", "farthest"),
            ("He picked the simplest design.", "simplest"),
            ("It was the least expensive room.", "least"),
        ],
    )
    def test_morphology_variants(self, sentence, surface):
        assert surface in [c.surface for c in detect_candidates(sentence)]

    def test_lexical_superlative(self):
        cands = detect_candidates("The main reason was cost.")
        assert [c.surface for c in cands] == ["main"]
        assert cands[0].kind == "lexical"

    def test_non_superlative_est_words_skipped(self):
        for sentence in ["The test was honest.", "We walked in the forest.", "Interest rates rose."]:
            assert detect_candidates(sentence) == []

    def test_hyphenated_most(self):
        cands = detect_candidates("Creole is the second most-spoken language.")
        assert [c.surface for c in cands] == ["most"]

    def test_deterministic(self):
        sentence = "The biggest and most beautiful city."
        assert detect_candidates(sentence) == detect_candidates(sentence)


class TestFilter:
    def run(self, sentence):
        return filter_non_superlative(detect_candidates(sentence), sentence)

    def test_at_least(self):
        cands = self.run("There were at least 5 people.")
        assert cands[0].filtered and cands[0].reason == "proportional-quantifier"

    def test_at_most(self):
        cands = self.run("Take at most two cards.")
        assert cands[0].filtered and cands[0].reason == "proportional-quantifier"

    def test_genuine_least_kept(self):
        cands = self.run("It was the least expensive room.")
        assert not cands[0].filtered

    def test_partitive_most(self):
        cands = self.run("Most of the students left.")
        assert cands[0].filtered and cands[0].reason == "partitive-quantifier"

    def test_most_of_without_determiner_kept(self):
        cands = self.run("She traveled most of all.")
        assert not cands[0].filtered

    def test_at_best_idiom(self):
        cands = self.run("It works at best occasionally.")
        assert cands[0].filtered and cands[0].reason == "idiom"

    def test_never_removes(self):
        sentence = "At least the biggest at most."
        cands = detect_candidates(sentence)
        filtered = filter_non_superlative(cands, sentence)
        assert len(filtered) == len(cands)
        assert [c.surface for c in filtered] == [c.surface for c in cands]


class TestContextWindow:
    def candidate(self, text, surface, sentence_index):
        for cand in detect_document("d", text):
            if cand.surface == surface and cand.sentence_index == sentence_index:
                return cand
        raise AssertionError("candidate not found")

    def test_identity_window(self):
        cand = self.candidate(FISHING, "largest", 1)
        win = context_window(FISHING, cand, 0, 0)
        assert win.text == "He caught the largest fish."

    def test_one_before(self):
        cand = self.candidate(FISHING, "largest", 1)
        win = context_window(FISHING, cand, 1, 0)
        assert win.text == FISHING.strip()

    def test_clamped(self):
        cand = self.candidate(FISHING, "largest", 1)
        win = context_window(FISHING, cand, 5, 5)
        assert win.first_sentence == 0
        assert win.last_sentence == 1

    def test_out_of_range(self):
        cand = Candidate("d", 7, 0, 2, "xx", "adjectival")
        with pytest.raises(ValueError):
            context_window("One sentence only.", cand, 1, 1)


sentence_bank = [
    "He is the tallest.",
    "Most commonly, psychologists use surveys.",
    "The fish swam.",
    "There were at least 5 people.",
    "Mr. Smith arrived.",
    "It costs 3.5 million.",
    "The main reason was cost.",
]


class TestDocumentProperties:
    @given(st.lists(st.sampled_from(sentence_bank), min_size=1, max_size=6))
    def test_offset_fidelity(self, sentences):
        text = " ".join(sentences)
        for cand in detect_document("doc", text):
            assert text[cand.start:cand.end] == cand.surface

    @given(st.lists(st.sampled_from(sentence_bank), min_size=1, max_size=6))
    def test_candidate_inside_its_sentence(self, sentences):
        text = " ".join(sentences)
        sents = segment(text)
        for cand in detect_document("doc", text):
            sent = sents[cand.sentence_index]
            assert sent.start <= cand.start <= cand.end <= sent.end

import math

import pytest

from gojun.corpus import render_text
from gojun.ngram import train_ngram
from gojun.scoring import (
    TIE,
    BidirectionalScorer,
    ScoredVariant,
    compare,
    compare_texts,
    score,
)
from gojun.transform import enumerate_orders

from conftest import (
    FixedScorer,
    _TableHandle,
    char_scorer,
    make_chunk,
    make_sentence,
    unigram_scorer,
)


class TestScore:
    def test_combined_is_sum(self):
        scorer = FixedScorer({"x": -2.0})
        scorer.forward = _TableHandle({"x": -2.0}, -100.0)
        scorer.backward = _TableHandle({"x": -3.0}, -100.0)
        variant = scorer.score("x")
        assert variant.combined_logp == -5.0

    def test_identical_unigram_models_double_the_score(self):
        scorer = unigram_scorer(["abca", "bcab"])
        variant = score(scorer, "abc")
        assert variant.combined_logp == pytest.approx(2 * variant.forward_logp, abs=1e-12)
        assert variant.forward_logp == pytest.approx(variant.backward_logp, abs=1e-12)

    def test_direction_validation(self):
        forward = train_ngram(["ab"], order=1, discount=0.5)
        with pytest.raises(ValueError):
            BidirectionalScorer(forward, forward)

    def test_combined_not_stored_independently(self):
        variant = ScoredVariant(label="v", text="t", forward_logp=-1.5, backward_logp=-2.5)
        assert variant.combined_logp == -4.0


class TestCompare:
    def test_argmax_winner(self):
        scorer = FixedScorer({"good": -5.0, "bad": -6.0})
        result = compare_texts(scorer, [("A", "good"), ("B", "bad")], tie_epsilon=1e-9)
        assert result.winner == "A"
        assert [v.label for v in result.variants] == ["A", "B"]

    def test_tie_within_epsilon(self):
        scorer = FixedScorer({"x": -5.0, "y": -5.0 - 2e-10})
        result = compare_texts(scorer, [("A", "x"), ("B", "y")], tie_epsilon=1e-9)
        assert result.winner == TIE
        assert result.is_tie

    def test_unigram_permutations_tie(self, give_sentence):
        scorer = unigram_scorer([render_text(give_sentence)])
        variants = enumerate_orders(give_sentence, site=3)
        result = compare(scorer, variants, tie_epsilon=1e-9)
        assert result.winner == TIE

    def test_six_variants_match_bruteforce_argmax(self, give_sentence):
        scorer = char_scorer([render_text(give_sentence), "先生が生徒に本をあげた"])
        variants = enumerate_orders(give_sentence, site=3)
        result = compare(scorer, variants, tie_epsilon=1e-12)
        # Independent recomputation, one variant at a time.
        best_label, best_score = None, -math.inf
        for label, sentence in variants.variants:
            text = render_text(sentence)
            combined = scorer.forward.logprob(text) + scorer.backward.logprob(text)
            if combined > best_score or (combined == best_score and label < best_label):
                best_label, best_score = label, combined
        assert result.winner == best_label
        assert result.best.combined_logp == pytest.approx(best_score, abs=1e-12)

    def test_needs_two_variants(self):
        scorer = FixedScorer({})
        with pytest.raises(ValueError):
            compare_texts(scorer, [("A", "x")])

    def test_score_order_invariance(self):
        scorer = FixedScorer({"x": -1.0, "y": -2.0, "z": -3.0})
        forward_order = compare_texts(scorer, [("X", "x"), ("Y", "y"), ("Z", "z")])
        reverse_order = compare_texts(scorer, [("Z", "z"), ("Y", "y"), ("X", "x")])
        assert forward_order.winner == reverse_order.winner
        assert [v.label for v in forward_order.variants] == [
            v.label for v in reverse_order.variants
        ]

    def test_equal_scores_order_lexicographically(self):
        scorer = FixedScorer({"x": -1.0, "y": -1.0})
        result = compare_texts(scorer, [("B", "y"), ("A", "x")], tie_epsilon=0.0)
        assert [v.label for v in result.variants] == ["A", "B"]
        assert result.winner == TIE

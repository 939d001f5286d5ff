import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gojun.ngram import BOS, EOS, UNK, Direction, NGramModel, Unit, train_ngram


def bigram_ab_model(discount=0.0):
    return train_ngram(["ab", "ab", "ac"], order=2, unit=Unit.CHAR,
                       direction=Direction.FORWARD, discount=discount, unk_threshold=0)


class TestTraining:
    def test_hand_counted_bigram_probabilities(self):
        model = bigram_ab_model()
        assert model.prob("b", ["a"]) == pytest.approx(2 / 3, abs=1e-15)
        assert model.prob("c", ["a"]) == pytest.approx(1 / 3, abs=1e-15)
        assert model.prob("a", [BOS]) == 1.0
        assert model.prob(EOS, ["b"]) == 1.0

    def test_unigram_ignores_context(self):
        model = train_ngram(["ab", "ba"], order=1, discount=0.5, unk_threshold=0)
        assert model.prob("a", []) == model.prob("a", ["b"]) == model.prob("a", ["a"])

    def test_backward_equals_forward_on_reversed_corpus(self):
        backward = train_ngram(["ab"], order=2, direction=Direction.BACKWARD,
                               discount=0.5, unk_threshold=0)
        forward = train_ngram(["ba"], order=2, direction=Direction.FORWARD,
                              discount=0.5, unk_threshold=0)
        assert backward.counts == forward.counts
        assert backward.prob("a", ["b"]) == forward.prob("a", ["b"])

    def test_unk_threshold_pools_rare_units(self):
        model = train_ngram(["aab", "aac"], order=1, discount=0.1, unk_threshold=1)
        assert "a" in model.vocab
        assert "b" not in model.vocab
        assert "c" not in model.vocab
        assert UNK in model.vocab

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            train_ngram([], order=2)

    def test_order_zero_rejected(self):
        with pytest.raises(ValueError):
            train_ngram(["ab"], order=0)

    def test_bad_discount_rejected(self):
        with pytest.raises(ValueError):
            train_ngram(["ab"], order=2, discount=1.0)


class TestLogprob:
    def test_hand_computed_ln_two_thirds(self):
        model = bigram_ab_model()
        assert model.logprob("ab") == pytest.approx(math.log(2 / 3), abs=1e-12)

    def test_empty_string_scores_eos_only(self):
        model = bigram_ab_model(discount=0.5)
        assert model.logprob("") == pytest.approx(
            math.log(model.prob(EOS, [BOS])), abs=1e-12
        )

    def test_unigram_permutation_invariance(self):
        model = train_ngram(["abcab", "bca"], order=1, discount=0.4, unk_threshold=0)
        base = model.logprob("abcab")
        for perm in itertools.permutations("abcab"):
            assert abs(model.logprob("".join(perm)) - base) <= 1e-9

    def test_oov_absorbed_by_unk(self):
        model = train_ngram(["aaab"], order=2, discount=0.5, unk_threshold=1)
        assert math.isfinite(model.logprob("axa"))

    def test_result_nonpositive(self):
        model = train_ngram(["abcd", "dcba"], order=3, discount=0.75)
        for text in ("abcd", "xyz", "a", ""):
            assert model.logprob(text) <= 0.0

    def test_unsmoothed_unseen_is_minus_inf(self):
        model = bigram_ab_model(discount=0.0)
        assert model.logprob("ba") == float("-inf")

    def test_pretokenized_unit(self):
        model = train_ngram(["the cat sat", "the cat ran"], order=2,
                            unit=Unit.PRETOKENIZED, discount=0.0, unk_threshold=0)
        assert model.prob("cat", ["the"]) == 1.0
        assert model.prob("sat", ["cat"]) == pytest.approx(0.5, abs=1e-15)
        assert model.logprob(["the", "cat"]) == model.logprob("the cat")


class TestSmoothingInvariants:
    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_distributions_normalize(self, order):
        model = train_ngram(["abcab", "cabba", "bac"], order=order,
                            discount=0.75, unk_threshold=0)
        for level in model.counts:
            for context in level:
                total = sum(model.distribution(context).values())
                assert abs(total - 1.0) <= 1e-9, (context, total)

    def test_unseen_context_normalizes_too(self):
        model = train_ngram(["abc"], order=3, discount=0.75, unk_threshold=0)
        total = sum(model.distribution(("c", "a")).values())
        assert abs(total - 1.0) <= 1e-9

    def test_all_probabilities_strictly_positive(self):
        model = train_ngram(["abcab"], order=2, discount=0.75, unk_threshold=1)
        for context in list(model.counts[1]) + [("zz",)]:
            for p in model.distribution(context).values():
                assert p > 0.0

    def test_duplicating_a_line_never_hurts_it(self):
        rng = random.Random(7)
        for _ in range(25):
            corpus = [
                "".join(rng.choice("abcd") for _ in range(rng.randint(1, 6)))
                for _ in range(rng.randint(2, 6))
            ]
            target = rng.choice(corpus)
            before = train_ngram(corpus, order=2, discount=0.75, unk_threshold=0)
            after = train_ngram(corpus + [target], order=2, discount=0.75, unk_threshold=0)
            assert after.logprob(target) >= before.logprob(target) - 1e-12


class TestReversalDuality:
    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.text(alphabet="abcde", min_size=1, max_size=8), min_size=1, max_size=6),
           st.text(alphabet="abcdef", max_size=8))
    def test_backward_logprob_equals_forward_on_reversed(self, corpus, text):
        backward = train_ngram(corpus, order=2, direction=Direction.BACKWARD,
                               discount=0.75, unk_threshold=0)
        forward = train_ngram([line[::-1] for line in corpus], order=2,
                              direction=Direction.FORWARD, discount=0.75, unk_threshold=0)
        assert backward.logprob(text) == forward.logprob(text[::-1])


class TestPersistence:
    def test_save_load_identity(self, tmp_path):
        model = train_ngram(["abcab", "cab", "ばにく"], order=3, discount=0.6,
                            unk_threshold=1)
        path = tmp_path / "m.model"
        model.save(path)
        loaded = NGramModel.load(path)
        assert loaded == model
        for text in ("abc", "ばに", "", "zz"):
            assert loaded.logprob(text) == model.logprob(text)

    def test_versioned_header(self, tmp_path):
        import json

        model = bigram_ab_model()
        path = tmp_path / "m.model"
        model.save(path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["gojun_ngram"] == 1

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "bad.model"
        path.write_text('{"something": 2}', encoding="utf-8")
        with pytest.raises(ValueError):
            NGramModel.load(path)

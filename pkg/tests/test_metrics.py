import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bibs.metrics import (
    CiderCorpus,
    bleu,
    brevity_penalty,
    cider,
    corpus_bleu,
    ngram_stats,
    ngrams,
)

words = st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), min_size=0, max_size=12)
nonempty = st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), min_size=1, max_size=12)


class TestNgrams:
    @given(words)
    def test_counts(self, seq):
        stats = ngram_stats(seq)
        for n in range(1, 5):
            assert sum(stats[n].values()) == max(0, len(seq) - n + 1)

    def test_values(self):
        assert ngrams("a b a b".split(), 2) == {("a", "b"): 2, ("b", "a"): 1}


class TestBleu:
    def test_identity(self):
        s = "a dog runs on the beach".split()
        for n in range(1, 5):
            assert bleu(s, [s], n) == 1.0

    def test_short_identity(self):
        # Orders longer than the candidate are left out of the mean.
        assert bleu(["a", "b"], [["a", "b"]], 4) == 1.0

    def test_clipping(self):
        assert bleu("the the the".split(), ["the cat".split()], 1) == pytest.approx(1 / 3, abs=1e-15)

    def test_brevity_penalty_factor(self):
        ref = "a b c d e f".split()
        cand = "a b c".split()
        assert bleu(cand, [ref], 1) == pytest.approx(math.exp(1 - 2), abs=1e-15)
        assert brevity_penalty(3, 6) == pytest.approx(math.exp(1 - 2))
        assert brevity_penalty(5, 2) == 1.0

    def test_zero_precision(self):
        assert bleu("a b c".split(), ["a c b".split()], 2) == 0.0

    def test_empty(self):
        assert bleu([], [["a"]]) == 0.0
        with pytest.raises(ValueError):
            bleu(["a"], [])

    def test_closest_reference_length(self):
        cand = "a b c d".split()
        refs = ["a b c d e f g h".split(), "a b c d e".split()]
        assert bleu(cand, refs, 1) == pytest.approx(math.exp(1 - 5 / 4))

    @settings(max_examples=300, deadline=None)
    @given(nonempty, nonempty, st.integers(1, 4))
    def test_matches_longhand_oracle(self, cand, ref, n):
        assert bleu(cand, [ref], n) == pytest.approx(oracles.sentence_bleu(cand, ref, n), abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(words, st.lists(nonempty, min_size=1, max_size=4), st.randoms())
    def test_bounds_and_reference_permutation(self, cand, refs, rnd):
        score = bleu(cand, refs)
        assert 0.0 <= score <= 1.0
        shuffled = list(refs)
        rnd.shuffle(shuffled)
        assert bleu(cand, shuffled) == score

    def test_deleting_matched_ngram_does_not_help(self):
        ref = "a b c d a b".split()
        cand = "a b c d a b".split()
        worse = "a b c d x b".split()
        assert bleu(worse, [ref]) <= bleu(cand, [ref])


class TestCorpusBleu:
    def test_pooled_not_mean(self):
        cands = ["a b c d".split(), "x y".split()]
        refs = [["a b c d".split()], ["x z".split()]]
        pooled = corpus_bleu(cands, refs, 2)
        # Pooled: unigram 5/6, bigram 3/4 (no zero), so positive.
        assert pooled == pytest.approx(math.sqrt(5 / 6 * 3 / 4))
        mean = (bleu(cands[0], refs[0], 2) + bleu(cands[1], refs[1], 2)) / 2
        assert mean != pytest.approx(pooled)

    def test_identity(self):
        sents = ["a b c".split(), "d e f g".split()]
        assert corpus_bleu(sents, [[s] for s in sents]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            corpus_bleu([["a"]], [])


TOY = [
    "a dog runs on the beach".split(),
    "a dog sleeps on a couch".split(),
    "two cats sit on the couch".split(),
]


class TestCider:
    def test_self_match_single_sentence(self):
        s = "a man riding a wave".split()
        assert cider(s, [s], CiderCorpus.from_sentences([s])) == pytest.approx(10.0, abs=1e-12)

    def test_disjoint_is_zero(self):
        corpus = CiderCorpus.from_sentences(TOY)
        assert cider("x y z".split(), [TOY[0]], corpus) == 0.0

    def test_toy_corpus_oracle(self):
        corpus = CiderCorpus.from_sentences(TOY)
        for cand in ["a dog sits on the couch".split(), "two dogs on a beach".split(), TOY[2]]:
            for refs in ([TOY[0]], [TOY[1], TOY[2]], TOY):
                assert cider(cand, refs, corpus) == pytest.approx(oracles.tfidf_cider(cand, refs, TOY), abs=1e-9)

    def test_document_frequency(self):
        corpus = CiderCorpus.from_sentences(TOY)
        assert corpus.size == 3
        assert corpus.document_frequency[("on",)] == 3
        assert corpus.document_frequency[("a",)] == 2  # counted once per document
        assert all(1 <= df <= corpus.size for df in corpus.document_frequency.values())

    def test_empty_candidate(self):
        assert cider([], [TOY[0]], CiderCorpus.from_sentences(TOY)) == 0.0

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            CiderCorpus([])

    @settings(max_examples=150, deadline=None)
    @given(words, st.lists(nonempty, min_size=1, max_size=3), st.randoms())
    def test_bounds_and_permutation(self, cand, refs, rnd):
        corpus = CiderCorpus.from_sentences(TOY + refs)
        score = cider(cand, refs, corpus)
        assert 0.0 <= score <= 10.0 + 1e-12
        shuffled = list(refs)
        rnd.shuffle(shuffled)
        assert cider(cand, shuffled, corpus) == pytest.approx(score, abs=1e-12)

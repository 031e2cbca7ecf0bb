"""BLEU and CIDEr over token-id (or token-string) sequences."""

from __future__ import annotations

import math
from collections import Counter
from typing import Hashable, Iterable, Sequence

MAX_N = 4

Seq = Sequence[Hashable]


def ngrams(seq: Seq, n: int) -> Counter:
    seq = tuple(seq)
    return Counter(seq[i : i + n] for i in range(len(seq) - n + 1))


def ngram_stats(seq: Seq, max_n: int = MAX_N) -> dict[int, Counter]:
    """Per-order n-gram multisets; order ``n`` holds ``max(0, L - n + 1)`` items."""
    return {n: ngrams(seq, n) for n in range(1, max_n + 1)}


def _closest_ref_len(cand_len: int, ref_lens: Iterable[int]) -> int:
    return min(ref_lens, key=lambda r: (abs(r - cand_len), r))


def _clipped(cand: Seq, refs: Sequence[Seq], n: int) -> tuple[int, int]:
    counts = ngrams(cand, n)
    max_ref: Counter = Counter()
    for ref in refs:
        for g, c in ngrams(ref, n).items():
            if c > max_ref[g]:
                max_ref[g] = c
    return sum(min(c, max_ref[g]) for g, c in counts.items()), sum(counts.values())


def brevity_penalty(cand_len: int, ref_len: int) -> float:
    if cand_len == 0:
        return 0.0
    return math.exp(min(0.0, 1.0 - ref_len / cand_len))


def _combine(matches: Sequence[int], totals: Sequence[int], bp: float) -> float:
    logs = []
    for m, t in zip(matches, totals):
        if t == 0:
            # Candidate too short to have n-grams of this order.
            continue
        if m == 0:
            return 0.0
        logs.append(math.log(m / t))
    if not logs:
        return 0.0
    return bp * math.exp(sum(logs) / len(logs))


def bleu(candidate: Seq, references: Sequence[Seq], max_n: int = MAX_N) -> float:
    """Sentence BLEU without smoothing.

    Geometric mean of clipped n-gram precisions times the brevity penalty
    against the closest reference length. Any zero precision gives 0. Orders
    longer than the candidate itself are left out of the mean, so a candidate
    identical to its reference always scores 1.
    """
    if not references:
        raise ValueError("bleu needs at least one reference")
    if not 1 <= max_n <= MAX_N:
        raise ValueError(f"max_n must be in 1..{MAX_N}")
    if len(candidate) == 0:
        return 0.0
    matches, totals = zip(*(_clipped(candidate, references, n) for n in range(1, max_n + 1)))
    ref_len = _closest_ref_len(len(candidate), [len(r) for r in references])
    return _combine(matches, totals, brevity_penalty(len(candidate), ref_len))


def corpus_bleu(candidates: Sequence[Seq], references: Sequence[Sequence[Seq]], max_n: int = MAX_N) -> float:
    """Corpus BLEU from pooled clipped counts and pooled lengths.

    Not the mean of sentence BLEU scores.
    """
    if len(candidates) != len(references):
        raise ValueError("one reference list per candidate is required")
    matches = [0] * max_n
    totals = [0] * max_n
    c_len = r_len = 0
    for cand, refs in zip(candidates, references):
        if not refs:
            raise ValueError("bleu needs at least one reference")
        for n in range(1, max_n + 1):
            m, t = _clipped(cand, refs, n)
            matches[n - 1] += m
            totals[n - 1] += t
        c_len += len(cand)
        r_len += _closest_ref_len(len(cand), [len(r) for r in refs])
    if c_len == 0:
        return 0.0
    return _combine(matches, totals, brevity_penalty(c_len, r_len))


class CiderCorpus:
    """Document frequencies of 1..4-grams over a collection of reference sets.

    A document is one reference set (all references for one item); an n-gram
    counts once per document however often it appears there.
    """

    def __init__(self, reference_sets: Iterable[Sequence[Seq]], max_n: int = MAX_N):
        self.max_n = max_n
        df: Counter = Counter()
        size = 0
        for refs in reference_sets:
            size += 1
            seen = set()
            for ref in refs:
                for n in range(1, max_n + 1):
                    seen.update(ngrams(ref, n))
            df.update(seen)
        if size == 0:
            raise ValueError("CIDEr corpus needs at least one reference set")
        self.size = size
        self.document_frequency = dict(df)

    @classmethod
    def from_sentences(cls, sentences: Iterable[Seq], max_n: int = MAX_N) -> "CiderCorpus":
        return cls(([s] for s in sentences), max_n)

    def idf(self, gram: tuple) -> float:
        # Add-one document count keeps weights positive when every document
        # contains the n-gram (e.g. a one-sentence corpus).
        return math.log((self.size + 1) / max(self.document_frequency.get(gram, 0), 1))

    def vector(self, seq: Seq, n: int) -> dict[tuple, float]:
        return {g: tf * self.idf(g) for g, tf in ngrams(seq, n).items()}


def _cosine(a: dict, b: dict) -> float:
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    dot = sum(v * b[g] for g, v in a.items() if g in b)
    return min(1.0, dot / (na * nb))


def cider(candidate: Seq, references: Sequence[Seq], corpus: CiderCorpus) -> float:
    """Plain CIDEr (no length penalty, no clipping, no stemming), in [0, 10]."""
    if not references:
        raise ValueError("cider needs at least one reference")
    if len(candidate) == 0:
        return 0.0
    per_n = []
    for n in range(1, corpus.max_n + 1):
        cv = corpus.vector(candidate, n)
        per_n.append(sum(_cosine(cv, corpus.vector(r, n)) for r in references) / len(references))
    return 10.0 * sum(per_n) / len(per_n)

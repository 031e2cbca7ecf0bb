"""Add-k smoothed n-gram scorers."""

from __future__ import annotations

import json
from collections import defaultdict
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ..io import atomic_write_text
from ..seqcore import BACKWARD, BOS, EOS, FORWARD
from .base import Scorer, check_direction

NGRAM_VERSION = 1


class NGramModel(Scorer):
    """Order-``n`` model with add-``k`` smoothing over the full vocabulary.

    ``pr(y | ctx) = (count(ctx, y) + k) / (count(ctx) + k * V)`` where ``ctx``
    is the previous ``n - 1`` tokens in reading order, BOS-padded. The state is
    that context tuple. A backward model is an ordinary model trained on
    reversed sentences, so BOS marks the right edge of the sentence for it.
    """

    def __init__(
        self,
        n: int,
        k: float,
        vocab_size: int,
        counts: Mapping[tuple[int, ...], Mapping[int, int]],
        direction: str = FORWARD,
    ):
        if n < 1:
            raise ValueError("n-gram order must be >= 1")
        if not k > 0:
            raise ValueError("smoothing constant k must be > 0")
        self.n = n
        self.k = float(k)
        self.vocab_size = vocab_size
        self.direction = check_direction(direction)
        self._counts: dict[tuple[int, ...], dict[int, int]] = {}
        for ctx, row in counts.items():
            ctx = tuple(ctx)
            if len(ctx) != n - 1:
                raise ValueError(f"context {ctx} has wrong length for order {n}")
            clean = {}
            for tok, c in row.items():
                if not 0 <= tok < vocab_size:
                    raise ValueError(f"token id {tok} out of range")
                if c < 1:
                    raise ValueError("stored counts must be >= 1")
                clean[int(tok)] = int(c)
            if clean:
                self._counts[ctx] = clean
        self._context_totals = {ctx: sum(row.values()) for ctx, row in self._counts.items()}
        self._cache: dict[tuple[int, ...], np.ndarray] = {}
        self._uniform = np.full(vocab_size, -np.log(vocab_size))
        self._uniform.flags.writeable = False

    def __repr__(self) -> str:
        return f"NGramModel(n={self.n}, k={self.k}, V={self.vocab_size}, {self.direction})"

    @property
    def counts(self) -> dict[tuple[int, ...], dict[int, int]]:
        return {ctx: dict(row) for ctx, row in self._counts.items()}

    def context_count(self, context: Sequence[int]) -> int:
        return self._context_totals.get(tuple(context), 0)

    def count(self, context: Sequence[int], token: int) -> int:
        return self._counts.get(tuple(context), {}).get(token, 0)

    def prob(self, context: Sequence[int], token: int) -> float:
        ctx = tuple(context)
        return (self.count(ctx, token) + self.k) / (self.context_count(ctx) + self.k * self.vocab_size)

    # -- scorer contract --------------------------------------------------

    def initial_state(self, conditioning=None) -> tuple[int, ...]:
        return (BOS,) * (self.n - 1)

    def advance(self, state: tuple[int, ...], token: int) -> tuple[int, ...]:
        if self.n == 1:
            return ()
        return state[1:] + (token,)

    def log_distribution(self, state: tuple[int, ...]) -> np.ndarray:
        cached = self._cache.get(state)
        if cached is not None:
            return cached
        row = self._counts.get(state)
        if row is None:
            return self._uniform
        dense = np.full(self.vocab_size, self.k)
        for tok, c in row.items():
            dense[tok] += c
        out = np.log(dense) - np.log(self._context_totals[state] + self.k * self.vocab_size)
        out.flags.writeable = False
        self._cache[state] = out
        return out

    # -- persistence --------------------------------------------------------

    def to_json(self, vocab_file: Optional[str] = None) -> dict:
        tables = {
            " ".join(map(str, ctx)): {str(tok): c for tok, c in sorted(row.items())}
            for ctx, row in sorted(self._counts.items())
        }
        return {
            "version": NGRAM_VERSION,
            "n": self.n,
            "k": self.k,
            "direction": self.direction,
            "vocab": {"file": vocab_file, "size": self.vocab_size},
            "tables": tables,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NGramModel":
        if data.get("version") != NGRAM_VERSION:
            raise ValueError(f"unsupported n-gram model version {data.get('version')!r}")
        counts = {}
        for key, row in data["tables"].items():
            ctx = tuple(int(x) for x in key.split()) if key else ()
            counts[ctx] = {int(tok): int(c) for tok, c in row.items()}
        return cls(data["n"], data["k"], data["vocab"]["size"], counts, data["direction"])

    def save(self, path, vocab_file: Optional[str] = None) -> None:
        atomic_write_text(path, json.dumps(self.to_json(vocab_file), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "NGramModel":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))


def _count(sentences: Iterable[Sequence[int]], n: int) -> dict:
    counts: dict = defaultdict(lambda: defaultdict(int))
    for sent in sentences:
        padded = (BOS,) * (n - 1) + tuple(sent) + (EOS,)
        for i in range(n - 1, len(padded)):
            counts[padded[i - n + 1 : i]][padded[i]] += 1
    return counts


def train_ngram(
    corpus: Iterable[Sequence[int]], n: int, k: float, vocab_size: int
) -> tuple[NGramModel, NGramModel]:
    """Train a forward and a backward model from id sequences.

    The backward model is trained on each sentence reversed.
    """
    if n < 1:
        raise ValueError("n-gram order must be >= 1")
    if not k > 0:
        raise ValueError("smoothing constant k must be > 0")
    sentences = [tuple(s) for s in corpus]
    if not sentences:
        raise ValueError("empty corpus")
    fwd = NGramModel(n, k, vocab_size, _count(sentences, n), FORWARD)
    bwd = NGramModel(n, k, vocab_size, _count((s[::-1] for s in sentences), n), BACKWARD)
    return fwd, bwd

"""First-order scorers defined directly by a transition table.

Handy for constructions and seeded random problems in tests and benchmarks.
"""

from __future__ import annotations

import numpy as np

from ..seqcore import BOS, FORWARD
from .base import Scorer, check_direction


class MarkovScorer(Scorer):
    """``pr(y_t | y_{t-1})`` from a row-normalised ``V x V`` log table.

    The state is the previous token id (BOS at the start). Rows are
    normalised on construction, so any finite matrix of scores works.
    """

    def __init__(self, log_table: np.ndarray, direction: str = FORWARD):
        table = np.asarray(log_table, dtype=np.float64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("transition table must be square")
        m = table.max(axis=1, keepdims=True)
        m = np.where(np.isfinite(m), m, 0.0)
        lse = m + np.log(np.exp(table - m).sum(axis=1, keepdims=True))
        self.table = table - lse
        self.table.flags.writeable = False
        self.vocab_size = table.shape[0]
        self.direction = check_direction(direction)

    def __repr__(self) -> str:
        return f"MarkovScorer(V={self.vocab_size}, {self.direction})"

    def initial_state(self, conditioning=None) -> int:
        return BOS

    def advance(self, state: int, token: int) -> int:
        return int(token)

    def log_distribution(self, state: int) -> np.ndarray:
        return self.table[state]


def random_markov(
    vocab_size: int, rng: np.random.Generator, direction: str = FORWARD, scale: float = 2.0
) -> MarkovScorer:
    """A random bigram scorer with Gaussian logits of standard deviation ``scale``."""
    return MarkovScorer(rng.normal(0.0, scale, size=(vocab_size, vocab_size)), direction)

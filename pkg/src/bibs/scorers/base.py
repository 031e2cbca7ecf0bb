"""The directional scorer contract shared by every decoder."""

from __future__ import annotations

import abc
import threading
from typing import Any, Optional, Sequence

import numpy as np

from ..seqcore import DIRECTIONS, EOS, FORWARD


class Scorer(abc.ABC):
    """Conditional next-token distributions in one reading direction.

    A forward scorer conditions on the past. A backward scorer conditions on
    the future: it reads sentences right-to-left through the same three
    calls. States are values; :meth:`advance` returns a fresh state and never
    mutates its argument.
    """

    direction: str
    vocab_size: int

    @abc.abstractmethod
    def initial_state(self, conditioning: Optional[np.ndarray] = None) -> Any:
        ...

    @abc.abstractmethod
    def advance(self, state: Any, token: int) -> Any:
        ...

    @abc.abstractmethod
    def log_distribution(self, state: Any) -> np.ndarray:
        """Natural-log probabilities over the whole vocabulary."""

    def reading_order(self, ids: Sequence[int]) -> tuple[int, ...]:
        """Sentence-order ids as this scorer consumes them."""
        return tuple(ids) if self.direction == FORWARD else tuple(reversed(ids))


def check_direction(direction: str) -> str:
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    return direction


def replay(scorer: Scorer, state: Any, tokens: Sequence[int], logp: float = 0.0):
    """Feed ``tokens`` (already in reading order) from ``state``.

    Returns the final state and ``logp`` plus the accumulated conditional
    log-probabilities, summed strictly left to right.
    """
    for tok in tokens:
        logp += float(scorer.log_distribution(state)[tok])
        state = scorer.advance(state, tok)
    return state, logp


def sequence_logp(
    scorer: Scorer,
    sentence: Sequence[int],
    conditioning: Optional[np.ndarray] = None,
    terminate: bool = True,
) -> float:
    """Joint log-probability of a whole sentence under ``scorer``.

    With ``terminate`` the end-of-sequence event is included, so the result is
    the log-probability of exactly this sentence.
    """
    state, logp = replay(scorer, scorer.initial_state(conditioning), scorer.reading_order(sentence))
    if terminate:
        logp += float(scorer.log_distribution(state)[EOS])
    return logp


class InstrumentedScorer(Scorer):
    """Wraps a scorer and counts :meth:`advance` calls (thread-safe)."""

    def __init__(self, inner: Scorer):
        self.inner = inner
        self.direction = inner.direction
        self.vocab_size = inner.vocab_size
        self._count = 0
        self._lock = threading.Lock()

    @property
    def advance_count(self) -> int:
        return self._count

    def reset(self) -> None:
        with self._lock:
            self._count = 0

    def initial_state(self, conditioning=None):
        return self.inner.initial_state(conditioning)

    def advance(self, state, token):
        with self._lock:
            self._count += 1
        return self.inner.advance(state, token)

    def log_distribution(self, state):
        return self.inner.log_distribution(state)

    def __repr__(self) -> str:
        return f"InstrumentedScorer({self.inner!r}, advances={self._count})"


def instrumented(inner: Scorer) -> InstrumentedScorer:
    return InstrumentedScorer(inner)

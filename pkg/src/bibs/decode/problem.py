"""Fill problems, decode results and the per-invocation step accounting."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from ..scorers.base import Scorer
from ..seqcore import (
    BACKWARD,
    BOS,
    EOS,
    FORWARD,
    UNK,
    BlankedInstance,
    DecodeConfig,
    Vocabulary,
    rank_key,
)

#: Step-accounting phases. ``update`` holds the blank-region steps of the
#: bidirectional passes; everything else is overhead reported separately.
PHASES = ("context", "init", "update", "search", "length", "rescore")


@dataclass(frozen=True)
class FillProblem:
    instance: BlankedInstance
    forward: Scorer
    backward: Scorer
    config: DecodeConfig = field(default_factory=DecodeConfig)
    conditioning: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.forward.direction != FORWARD or self.backward.direction != BACKWARD:
            raise ValueError("FillProblem needs a forward and a backward scorer")
        if self.forward.vocab_size != self.backward.vocab_size:
            raise ValueError("forward and backward scorers disagree on vocabulary size")
        V = self.forward.vocab_size
        for tok in self.instance.prefix + self.instance.suffix:
            if not 0 <= tok < V:
                raise ValueError(f"context token {tok} out of range")

    @property
    def width(self) -> int:
        return self.instance.width

    @property
    def vocab_size(self) -> int:
        return self.forward.vocab_size

    def scorer(self, direction: str) -> Scorer:
        return self.forward if direction == FORWARD else self.backward

    def candidates(self) -> np.ndarray:
        """Token ids a blank position may take."""
        if self.config.allow_sentinels_in_blank:
            return np.arange(self.vocab_size)
        return np.array([i for i in range(self.vocab_size) if i not in (BOS, EOS, UNK)])


@dataclass(frozen=True)
class Completion:
    ids: tuple[int, ...]
    objective: float
    joint_logp: float


@dataclass
class DecodeResult:
    algorithm: str
    completions: list[Completion]
    meta_iterations: int = 0
    steps: dict[str, int] = field(default_factory=dict)
    trace: list[float] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def best(self) -> Completion:
        return self.completions[0]

    @property
    def advance_steps(self) -> int:
        return sum(self.steps.values())

    def to_json(self, instance: BlankedInstance, vocab: Vocabulary, max_ranking: int = 100) -> dict:
        best = self.best
        row = {
            "id": instance.id,
            "algorithm": self.algorithm,
            "completion": vocab.decode(best.ids),
            "objective": best.objective,
            "joint_logp": best.joint_logp,
            "meta_iterations": self.meta_iterations,
            "advance_steps": self.advance_steps,
            "step_breakdown": {k: v for k, v in sorted(self.steps.items())},
            "trace": list(self.trace),
            "ranking": [
                {"completion": vocab.decode(c.ids), "objective": c.objective, "joint_logp": c.joint_logp}
                for c in self.completions[:max_ranking]
            ],
        }
        for key, value in self.extra.items():
            row[key] = value
        return row


def sort_completions(completions: Sequence[Completion], by: str = "joint") -> list[Completion]:
    attr = "joint_logp" if by == "joint" else "objective"
    return sorted(completions, key=lambda c: rank_key(getattr(c, attr), c.ids))


class Session:
    """State shared by one decode invocation.

    Replays the clamped context once per direction, routes every scorer
    advance through a per-phase counter, and memoises full-sentence joints.
    """

    def __init__(self, problem: FillProblem):
        self.problem = problem
        self.steps: Counter = Counter()
        self._context: dict[str, tuple[Any, float]] = {}
        self._joint: dict[tuple[str, tuple[int, ...]], float] = {}

    def advance(self, direction: str, state, token: int, phase: str):
        self.steps[phase] += 1
        return self.problem.scorer(direction).advance(state, token)

    def leading(self, direction: str) -> tuple[int, ...]:
        """Clamped tokens read before the blank, in reading order."""
        inst = self.problem.instance
        return inst.prefix if direction == FORWARD else inst.suffix[::-1]

    def trailing(self, direction: str) -> tuple[int, ...]:
        inst = self.problem.instance
        return inst.suffix if direction == FORWARD else inst.prefix[::-1]

    def context(self, direction: str) -> tuple[Any, float]:
        """State after the leading context and that context's log-probability."""
        if direction not in self._context:
            scorer = self.problem.scorer(direction)
            state = scorer.initial_state(self.problem.conditioning)
            logp = 0.0
            for tok in self.leading(direction):
                logp += float(scorer.log_distribution(state)[tok])
                state = self.advance(direction, state, tok, "context")
            self._context[direction] = (state, logp)
        return self._context[direction]

    def joint(self, blank: Sequence[int], direction: str = FORWARD) -> float:
        """Log-probability of the assembled sentence (EOS included) under one direction.

        Terms are summed in reading order starting from 0.0, so the value is
        bit-identical to :func:`bibs.scorers.sequence_logp` on the same sentence.
        """
        key = (direction, tuple(blank))
        if key not in self._joint:
            scorer = self.problem.scorer(direction)
            state, logp = self.context(direction)
            read_blank = tuple(blank) if direction == FORWARD else tuple(blank)[::-1]
            for tok in read_blank + self.trailing(direction):
                logp += float(scorer.log_distribution(state)[tok])
                state = self.advance(direction, state, tok, "rescore")
            logp += float(scorer.log_distribution(state)[EOS])
            self._joint[key] = logp
        return self._joint[key]

    def step_counts(self) -> dict[str, int]:
        return dict(self.steps)


def clamped_result(problem: FillProblem, algorithm: str) -> DecodeResult:
    """Result for an empty blank: the clamped sentence, unchanged."""
    session = Session(problem)
    joint = session.joint(())
    return DecodeResult(
        algorithm=algorithm,
        completions=[Completion((), joint, joint)],
        steps=session.step_counts(),
        trace=[joint],
    )

"""Step-count and wall-time benchmark for the bidirectional search."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .decode import FillProblem, bibs_decode
from .scorers import InstrumentedScorer, random_markov
from .seqcore import BACKWARD, FORWARD, BlankedInstance, DecodeConfig

BEAMS = (1, 3, 5)
ITERATIONS = (1, 2, 4)
WIDTHS = (2, 5, 10)

VOCAB_SIZE = 12
CONTEXT = 3


@dataclass(frozen=True)
class BenchRow:
    beam: int
    iters: int
    width: int
    update_steps: int
    expected: int
    other_steps: dict
    scorer_advances: int
    wall_ms: float

    @property
    def ok(self) -> bool:
        return self.update_steps == self.expected

    def to_json(self) -> dict:
        return {
            "B": self.beam,
            "M": self.iters,
            "w": self.width,
            "update_steps": self.update_steps,
            "expected_2BMw": self.expected,
            "other_steps": dict(sorted(self.other_steps.items())),
            "scorer_advances": self.scorer_advances,
            "wall_ms": self.wall_ms,
            "ok": self.ok,
        }


def bench_case(beam: int, iters: int, width: int, seed: int = 0) -> BenchRow:
    """One BiBS decode on a random bigram problem with instrumented scorers."""
    rng = np.random.default_rng(seed)
    fwd = InstrumentedScorer(random_markov(VOCAB_SIZE, rng, FORWARD))
    bwd = InstrumentedScorer(random_markov(VOCAB_SIZE, rng, BACKWARD))
    content = np.arange(3, VOCAB_SIZE)
    prefix = tuple(int(t) for t in rng.choice(content, CONTEXT))
    suffix = tuple(int(t) for t in rng.choice(content, CONTEXT))
    inst = BlankedInstance(f"bench-{beam}-{iters}-{width}", prefix, suffix, None, width)
    config = DecodeConfig(beam_width=beam, meta_iterations=iters)
    start = time.perf_counter()
    result = bibs_decode(FillProblem(inst, fwd, bwd, config))
    wall_ms = (time.perf_counter() - start) * 1000.0
    steps = dict(result.steps)
    update = steps.pop("update", 0)
    return BenchRow(
        beam, iters, width, update, 2 * beam * iters * width, steps,
        fwd.advance_count + bwd.advance_count, wall_ms,
    )


def run_bench(
    beams: Iterable[int] = BEAMS,
    iters: Iterable[int] = ITERATIONS,
    widths: Iterable[int] = WIDTHS,
    seed: int = 0,
) -> list[BenchRow]:
    return [bench_case(b, m, w, seed) for b, m, w in itertools.product(beams, iters, widths)]


def format_table(rows: Iterable[BenchRow]) -> str:
    header = f"{'B':>2} {'M':>2} {'w':>3} {'update':>7} {'2BMw':>7} {'other':>7} {'total':>7} {'ms':>8}  ok"
    lines = [header, "-" * len(header)]
    for r in rows:
        other = sum(r.other_steps.values())
        lines.append(
            f"{r.beam:>2} {r.iters:>2} {r.width:>3} {r.update_steps:>7} {r.expected:>7} "
            f"{other:>7} {r.scorer_advances:>7} {r.wall_ms:>8.2f}  {'yes' if r.ok else 'NO'}"
        )
    return "\n".join(lines)

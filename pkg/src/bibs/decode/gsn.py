"""Ordered Gibbs-style resampling baseline."""

from __future__ import annotations

import numpy as np

from ..scorers.combine import bidir_combine
from ..seqcore import BACKWARD, FORWARD, opposite
from .problem import Completion, DecodeResult, FillProblem, Session, clamped_result, sort_completions
from .search import _check_known, directional_pass


def conditional_distribution(fwd_logp: np.ndarray, bwd_logp: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    """Combined bidirectional conditional at one position, renormalised over ``allowed``."""
    return np.exp(bidir_combine(fwd_logp[allowed], bwd_logp[allowed]))


def resample_position(
    fwd_logp: np.ndarray, bwd_logp: np.ndarray, allowed: np.ndarray, rng: np.random.Generator
) -> int:
    p = conditional_distribution(fwd_logp, bwd_logp, allowed)
    cdf = np.cumsum(p)
    idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return int(allowed[min(idx, len(allowed) - 1)])


def _sweep(session: Session, chain: list[int], direction: str, rng: np.random.Generator) -> None:
    """Resample every blank position of ``chain`` in place, in reading order of ``direction``."""
    problem = session.problem
    w = len(chain)
    allowed = problem.candidates()
    other = opposite(direction)
    sweep_scorer = problem.scorer(direction)
    other_scorer = problem.scorer(other)

    # The far side of every position is untouched until the sweep reaches it,
    # so the opposite-direction states can be replayed once up front.
    read = chain if direction == FORWARD else chain[::-1]  # sweep reading order
    state, _ = session.context(other)
    other_states = [state]
    for tok in reversed(read[1:]):
        state = session.advance(other, state, tok, "update")
        other_states.append(state)
    other_states.reverse()  # other_states[k] conditions reading step k

    state, _ = session.context(direction)
    for k in range(w):
        tok = resample_position(
            sweep_scorer.log_distribution(state), other_scorer.log_distribution(other_states[k]), allowed, rng
        )
        read[k] = tok
        state = session.advance(direction, state, tok, "update")
    if direction == BACKWARD:
        read.reverse()
    chain[:] = read


def gsn_ordered(problem: FillProblem, rng_seed: int = 0) -> DecodeResult:
    """Sample ``B`` chains by resampling blank positions in alternating sweeps.

    Chains start from the top beam of standard beam search in
    ``config.init_direction``; each meta-iteration is one sweep in the
    opposite direction followed by one in the initial direction. The final
    chain states are reranked by true forward joint.
    """
    _check_known(problem)
    if problem.width == 0:
        return clamped_result(problem, "gsn")
    cfg = problem.config
    rng = np.random.default_rng(rng_seed)
    session = Session(problem)
    init_dir = cfg.init_direction
    beams, _ = directional_pass(session, init_dir, phase="init")
    start = min(beams, key=lambda b: (-session.joint(b.ids, init_dir), b.ids)).ids
    chains = [list(start) for _ in range(cfg.beam_width)]
    trace = [session.joint(start)]
    order = (opposite(init_dir), init_dir)
    for _ in range(cfg.meta_iterations):
        for direction in order:
            for chain in chains:
                _sweep(session, chain, direction, rng)
        trace.append(max(session.joint(c) for c in chains))

    unique = sorted({tuple(c) for c in chains})
    completions = []
    for ids in unique:
        j = session.joint(ids)
        completions.append(Completion(ids, j, j))
    return DecodeResult(
        algorithm="gsn",
        completions=sort_completions(completions),
        meta_iterations=cfg.meta_iterations,
        steps=session.step_counts(),
        trace=trace,
    )

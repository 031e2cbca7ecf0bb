"""Exhaustive enumeration of every blank completion."""

from __future__ import annotations

from ..seqcore import EOS, FORWARD
from .problem import Completion, DecodeResult, FillProblem, Session, clamped_result, sort_completions
from .search import _check_known

DEFAULT_BUDGET = 10**6


class OracleBudgetExceeded(RuntimeError):
    pass


def exact_fill_oracle(problem: FillProblem, budget: int = DEFAULT_BUDGET) -> DecodeResult:
    """Score all ``C**w`` completions by true forward joint and rank them.

    Enumeration is depth-first so shared prefixes reuse scorer states. Each
    sentence log-probability is accumulated left to right exactly as
    :meth:`Session.joint` does, so values match other decoders bit for bit.
    """
    _check_known(problem)
    if problem.width == 0:
        return clamped_result(problem, "oracle")
    cand = [int(c) for c in problem.candidates()]
    w = problem.width
    if len(cand) ** w > budget:
        raise OracleBudgetExceeded(f"oracle budget exceeded: {len(cand)}**{w} > {budget}")
    session = Session(problem)
    scorer = problem.forward
    suffix = problem.instance.suffix
    out: list[Completion] = []

    def finish(state, logp, ids):
        for tok in suffix:
            logp += float(scorer.log_distribution(state)[tok])
            state = session.advance(FORWARD, state, tok, "rescore")
        logp += float(scorer.log_distribution(state)[EOS])
        out.append(Completion(ids, logp, logp))

    def expand(state, logp, ids):
        if len(ids) == w:
            finish(state, logp, ids)
            return
        dist = scorer.log_distribution(state)
        for tok in cand:
            expand(session.advance(FORWARD, state, tok, "search"), logp + float(dist[tok]), ids + (tok,))

    state, logp = session.context(FORWARD)
    expand(state, logp, ())
    return DecodeResult(
        algorithm="oracle",
        completions=sort_completions(out),
        steps=session.step_counts(),
        extra={"enumerated": len(out)},
    )

"""Pool-and-rerank baselines over forward and backward beam search."""

from __future__ import annotations

from typing import Sequence

from ..seqcore import BACKWARD, FORWARD, rank_key
from .problem import Completion, DecodeResult, FillProblem, Session, clamped_result
from .search import _check_known, directional_pass

RULES = ("max-prob", "sum-logprob")


def rule_score(fwd_logp: float, bwd_logp: float, rule: str) -> float:
    if rule == "max-prob":
        return max(fwd_logp, bwd_logp)
    if rule == "sum-logprob":
        return fwd_logp + bwd_logp
    raise ValueError(f"unknown rerank rule {rule!r}; expected one of {RULES}")


def rank_by_rule(scored: Sequence[tuple[tuple[int, ...], float, float]], rule: str):
    """Rank ``(ids, fwd_logp, bwd_logp)`` triples; ties go to the smaller ids."""
    return sorted(scored, key=lambda t: rank_key(rule_score(t[1], t[2], rule), t[0]))


def rerank_f_plus_b(problem: FillProblem, rule: str = "max-prob") -> DecodeResult:
    """Beam search both ways, pool the ``2B`` completions, rerank the pool.

    Every pooled completion is scored by full replay under both directions.
    ``max-prob`` ranks by the larger of the two sentence probabilities,
    ``sum-logprob`` by the sum of the two log-probabilities.
    """
    _check_known(problem)
    name = "rerank-max" if rule == "max-prob" else "rerank-sum"
    if rule not in RULES:
        raise ValueError(f"unknown rerank rule {rule!r}; expected one of {RULES}")
    if problem.width == 0:
        return clamped_result(problem, name)
    session = Session(problem)
    fwd, _ = directional_pass(session, FORWARD, phase="search")
    bwd, _ = directional_pass(session, BACKWARD, phase="search")
    pool = list(dict.fromkeys([b.ids for b in fwd] + [b.ids for b in bwd]))
    scored = [(ids, session.joint(ids, FORWARD), session.joint(ids, BACKWARD)) for ids in pool]
    completions = [Completion(ids, rule_score(f, b, rule), f) for ids, f, b in rank_by_rule(scored, rule)]
    return DecodeResult(
        algorithm=name,
        completions=completions,
        steps=session.step_counts(),
        extra={"pool_size": len(pool)},
    )

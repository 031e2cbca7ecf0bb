"""Blank filling when the blank width is not given."""

from __future__ import annotations

from collections import Counter
from dataclasses import replace
from typing import Callable

from ..seqcore import BACKWARD, EOS, FORWARD, rank_key
from .problem import DecodeResult, FillProblem, Session, sort_completions

GENERATION_CAP = 30

Decoder = Callable[[FillProblem], DecodeResult]


def open_generation(session: Session, direction: str, cap: int = GENERATION_CAP) -> tuple[int, ...]:
    """Top-1 beam-search continuation from one side's context up to EOS.

    Beams extend over the blank candidates; the EOS extension of a beam
    finishes it. Search stops once the best finished hypothesis outscores
    every live beam (scores only fall), or at ``cap`` tokens, where live
    beams are force-finished. Returns the generated tokens in reading order.
    """
    problem = session.problem
    scorer = problem.scorer(direction)
    B = problem.config.beam_width
    cand = problem.candidates()
    cand = cand[cand != EOS]
    state, _ = session.context(direction)
    live = [((), 0.0, state)]
    finished: list[tuple[tuple[int, ...], float]] = []
    for step in range(cap + 1):
        expansions = []
        for ids, score, st in live:
            dist = scorer.log_distribution(st)
            finished.append((ids, score + float(dist[EOS])))
            if step < cap:
                expansions.extend((ids + (int(t),), score + float(dist[t]), st) for t in cand)
        best_done = min(finished, key=lambda f: rank_key(f[1], f[0]))
        expansions.sort(key=lambda e: rank_key(e[1], e[0]))
        kept = expansions[:B]
        if not kept or best_done[1] >= kept[0][1]:
            break
        live = [(ids, score, session.advance(direction, st, ids[-1], "length")) for ids, score, st in kept]
    return min(finished, key=lambda f: rank_key(f[1], f[0]))[0]


def unknown_length_decode(problem: FillProblem, inner: Decoder, name: str = "unknown-length") -> DecodeResult:
    """Search every width between the two one-sided generation lengths.

    The width range runs from ``min(len(Yf), len(Yb))`` to ``max(...)``
    inclusive, where ``Yf`` continues the prefix forward and ``Yb`` the suffix
    backward. ``inner`` decodes each width; the completion with the highest
    true forward joint over all widths wins. Lengths are compared on raw
    joint probability, with no length normalisation.
    """
    session = Session(problem)
    len_f = len(open_generation(session, FORWARD))
    len_b = len(open_generation(session, BACKWARD))
    lo, hi = min(len_f, len_b), max(len_f, len_b)
    widths = list(range(lo, hi + 1))
    steps = Counter(session.step_counts())
    pooled = []
    per_width = []
    iters = 0
    for width in widths:
        sub = replace(problem, instance=problem.instance.with_width(width))
        res = inner(sub)
        steps.update(res.steps)
        iters += res.meta_iterations
        pooled.extend(res.completions)
        per_width.append(res.best.joint_logp)
    ranked = sort_completions(list({c.ids: c for c in pooled}.values()))
    return DecodeResult(
        algorithm=name,
        completions=ranked,
        meta_iterations=iters,
        steps=dict(steps),
        trace=per_width,
        extra={"widths": widths, "generated_lengths": [len_f, len_b]},
    )

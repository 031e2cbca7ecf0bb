"""Directional beam search and Bidirectional Beam Search over a blank."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np

from ..seqcore import BACKWARD, FORWARD, Beam, BeamSet, opposite, rank_key
from .problem import Completion, DecodeResult, FillProblem, Session, clamped_result, sort_completions


@dataclass(frozen=True)
class CachedBeam:
    """A blank hypothesis in one direction with its cached scores.

    Everything is indexed by reading step ``k`` (sentence position ``k`` for a
    forward beam, ``w - 1 - k`` for a backward one):

    - ``dists[k]``: the direction's log-distribution at step ``k``,
    - ``running[k]``: the summed chosen-token log-probs of steps ``< k``
      (so ``running[-1]`` is the beam total),
    - ``states[k]``: the scorer state before step ``k``; ``states[-1]`` is
      the state after the last token.
    """

    direction: str
    read_ids: tuple[int, ...]
    dists: tuple[np.ndarray, ...]
    running: tuple[float, ...]
    states: tuple[Any, ...]
    partner: Optional[int] = None

    @property
    def ids(self) -> tuple[int, ...]:
        """Token ids in sentence order."""
        return self.read_ids if self.direction == FORWARD else self.read_ids[::-1]

    @property
    def total(self) -> float:
        return self.running[-1]

    @property
    def theta(self) -> tuple[float, ...]:
        return tuple(float(d[t]) for d, t in zip(self.dists, self.read_ids))

    def to_beam(self) -> Beam:
        theta = self.theta
        if self.direction == BACKWARD:
            theta = theta[::-1]
        return Beam(self.ids, theta, self.total)


#: Called once per pass step with ``(step, live, fixed, selected)`` where each
#: selected entry is ``(live_index, token, partner_index, score)``.
StepObserver = Callable[[int, Sequence[CachedBeam], Optional[Sequence[CachedBeam]], list], None]


def _select(scores: np.ndarray, live: Sequence[CachedBeam], cand: np.ndarray, B: int, direction: str):
    """Top-``B`` (live, candidate) cells; ties go to the smaller id sequence."""
    flat = scores.ravel()
    n = flat.size
    if n > B:
        threshold = np.partition(flat, n - B)[n - B]
        pool = np.flatnonzero(flat >= threshold)
    else:
        pool = np.arange(n)
    C = len(cand)

    def key(i):
        b, c = divmod(int(i), C)
        read = live[b].read_ids + (int(cand[c]),)
        ids = read if direction == FORWARD else read[::-1]
        return rank_key(float(flat[i]), ids)

    chosen = sorted(pool, key=key)[:B]
    return [divmod(int(i), C) for i in chosen]


def directional_pass(
    session: Session,
    direction: str,
    fixed: Optional[Sequence[CachedBeam]] = None,
    live: Optional[Sequence[CachedBeam]] = None,
    phase: str = "update",
    observer: Optional[StepObserver] = None,
) -> tuple[list[CachedBeam], list[float]]:
    """Run one beam pass over the blank in ``direction``.

    Without ``fixed`` this is standard beam search on the cumulative
    conditional log-probability. With ``fixed`` (complete beams of the
    opposite direction) each step ranks every (live beam, token, fixed beam)
    triple by::

        live_sum + log p_dir(y | live) + log p_opp(y | fixed) + fixed_sum

    where the sums cover the live beam's tokens so far and the fixed beam's
    tokens on the far side of the current position. Terms are added in that
    order everywhere, so scores are reproducible bit for bit.

    Each kept beam advances its scorer state by the chosen token exactly once,
    so a full pass costs ``len(kept) * w`` advances.

    Returns the final beams and their selection scores, best first.
    """
    problem = session.problem
    w = problem.width
    B = problem.config.beam_width
    scorer = problem.scorer(direction)
    cand = problem.candidates()
    if fixed is not None:
        fixed = list(fixed)
        if not fixed:
            raise ValueError("fixed beam set is empty")
        for fb in fixed:
            if fb.direction != opposite(direction):
                raise ValueError("fixed beams must run in the opposite direction")
            if len(fb.read_ids) != w or len(fb.dists) != w or len(fb.running) != w + 1:
                raise ValueError(
                    f"inconsistent cache: fixed beam covers {len(fb.read_ids)} positions, blank width is {w}"
                )
        fixed_dist = np.stack([np.stack(fb.dists) for fb in fixed])[:, :, cand]  # (F, w, C)
        fixed_run = np.array([fb.running for fb in fixed])  # (F, w + 1)
    if live is None:
        state, _ = session.context(direction)
        live = [CachedBeam(direction, (), (), (0.0,), (state,))]
    else:
        live = list(live)
        if len({len(b.read_ids) for b in live}) != 1:
            raise ValueError("live beams must all cover the same number of positions")
    start = len(live[0].read_ids)
    scores: list[float] = [b.total for b in live]

    for k in range(start, w):
        L = np.stack([scorer.log_distribution(b.states[-1]) for b in live])  # (N, V)
        run = np.array([b.running[-1] for b in live])
        base = run[:, None] + L[:, cand]  # (N, C)
        if fixed is not None:
            j = w - 1 - k
            full = (base[:, :, None] + fixed_dist[:, j, :].T[None, :, :]) + fixed_run[None, None, :, j]
            best = full.max(axis=2)
            partner = full.argmax(axis=2)
        else:
            best, partner = base, None
        chosen = _select(best, live, cand, B, direction)
        selected = []
        new_live = []
        for b, c in chosen:
            parent = live[b]
            tok = int(cand[c])
            p_idx = int(partner[b, c]) if partner is not None else None
            selected.append((b, tok, p_idx, float(best[b, c])))
            new_live.append(
                CachedBeam(
                    direction,
                    parent.read_ids + (tok,),
                    parent.dists + (L[b],),
                    parent.running + (float(base[b, c]),),
                    parent.states + (session.advance(direction, parent.states[-1], tok, phase),),
                    p_idx,
                )
            )
        if observer is not None:
            observer(k, live, fixed, selected)
        live = new_live
        scores = [s[3] for s in selected]
    return live, scores


def _check_known(problem: FillProblem) -> None:
    if not problem.instance.known_width:
        raise ValueError(f"instance {problem.instance.id}: blank width unknown; use unknown_length_decode")


def beam_search(problem: FillProblem, direction: str = FORWARD) -> DecodeResult:
    """Standard beam search over the blank in one direction.

    Context tokens are clamped. Finished beams are ranked by their
    full-sentence log-probability under the searching direction (suffix and
    end-of-sequence included), as a unidirectional model would rank them.
    """
    _check_known(problem)
    name = "bs-f" if direction == FORWARD else "bs-b"
    if problem.width == 0:
        return clamped_result(problem, name)
    session = Session(problem)
    beams, _ = directional_pass(session, direction, phase="search")
    completions = [
        Completion(b.ids, session.joint(b.ids, direction), session.joint(b.ids, FORWARD)) for b in beams
    ]
    return DecodeResult(
        algorithm=name,
        completions=sort_completions(completions, by="objective"),
        steps=session.step_counts(),
    )


def bibs_pass(
    problem: FillProblem,
    fixed_opposite: Sequence[CachedBeam],
    direction: str,
    live: Optional[Sequence[CachedBeam]] = None,
    session: Optional[Session] = None,
    observer: Optional[StepObserver] = None,
) -> list[CachedBeam]:
    """One bidirectional update pass holding ``fixed_opposite`` fixed."""
    session = session or Session(problem)
    beams, _ = directional_pass(session, direction, fixed_opposite, live, "update", observer)
    return beams


def as_beam_set(beams: Sequence[CachedBeam], scores: Sequence[float]) -> BeamSet:
    return BeamSet.sorted(beams[0].direction, [b.to_beam() for b in beams], scores)


def bibs_decode(problem: FillProblem, observer: Optional[StepObserver] = None) -> DecodeResult:
    """Bidirectional Beam Search.

    Beams are initialised by standard beam search in
    ``config.init_direction``; each meta-iteration then runs an update pass
    in the opposite direction followed by one in the initial direction, each
    holding the other direction's latest beams fixed. Stops after
    ``meta_iterations`` or, with ``convergence="unchanged"``, as soon as a
    meta-iteration leaves the ordered beams unchanged.

    ``trace[0]`` is the best true forward joint after initialisation and
    ``trace[m]`` the best after meta-iteration ``m``.
    """
    _check_known(problem)
    if problem.width == 0:
        return clamped_result(problem, "bibs")
    cfg = problem.config
    session = Session(problem)

    def best_joint(beams):
        return max(session.joint(b.ids) for b in beams)

    current, scores = directional_pass(session, cfg.init_direction, phase="init")
    trace = [best_joint(current)]
    order = (opposite(cfg.init_direction), cfg.init_direction)
    done = 0
    for _ in range(cfg.meta_iterations):
        before = [b.ids for b in current]
        for direction in order:
            current, scores = directional_pass(session, direction, current, None, "update", observer)
        done += 1
        trace.append(best_joint(current))
        if cfg.convergence == "unchanged" and [b.ids for b in current] == before:
            break

    completions = [Completion(b.ids, s, session.joint(b.ids)) for b, s in zip(current, scores)]
    return DecodeResult(
        algorithm="bibs",
        completions=sort_completions(completions),
        meta_iterations=done,
        steps=session.step_counts(),
        trace=trace,
    )

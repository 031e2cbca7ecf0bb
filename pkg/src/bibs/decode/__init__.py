"""Blank-filling decoders and the name registry used by the harness and CLI."""

from __future__ import annotations

from typing import Callable

from ..seqcore import BACKWARD, FORWARD
from .gsn import conditional_distribution, gsn_ordered, resample_position
from .oracle import OracleBudgetExceeded, exact_fill_oracle
from .problem import PHASES, Completion, DecodeResult, FillProblem, Session, clamped_result
from .rerank import rank_by_rule, rerank_f_plus_b, rule_score
from .search import CachedBeam, as_beam_set, beam_search, bibs_decode, bibs_pass, directional_pass
from .unknown import GENERATION_CAP, open_generation, unknown_length_decode

#: ``decoder(problem, seed) -> DecodeResult``
SeededDecoder = Callable[[FillProblem, int], DecodeResult]

KNOWN_WIDTH_ALGORITHMS: dict[str, SeededDecoder] = {
    "bs-f": lambda p, seed: beam_search(p, FORWARD),
    "bs-b": lambda p, seed: beam_search(p, BACKWARD),
    "bibs": lambda p, seed: bibs_decode(p),
    "gsn": lambda p, seed: gsn_ordered(p, seed),
    "rerank-max": lambda p, seed: rerank_f_plus_b(p, "max-prob"),
    "rerank-sum": lambda p, seed: rerank_f_plus_b(p, "sum-logprob"),
    "oracle": lambda p, seed: exact_fill_oracle(p),
}

UNKNOWN_PREFIX = "unknown-length:"


def algorithm_names() -> list[str]:
    return list(KNOWN_WIDTH_ALGORITHMS) + [UNKNOWN_PREFIX + name for name in KNOWN_WIDTH_ALGORITHMS]


def get_decoder(name: str) -> SeededDecoder:
    """Look up a decoder by its CLI name (e.g. ``bibs`` or ``unknown-length:bibs``)."""
    if name in KNOWN_WIDTH_ALGORITHMS:
        return KNOWN_WIDTH_ALGORITHMS[name]
    if name.startswith(UNKNOWN_PREFIX):
        inner_name = name[len(UNKNOWN_PREFIX) :]
        if inner_name not in KNOWN_WIDTH_ALGORITHMS:
            raise KeyError(f"unknown inner algorithm {inner_name!r}")
        inner = KNOWN_WIDTH_ALGORITHMS[inner_name]
        return lambda p, seed: unknown_length_decode(p, lambda q: inner(q, seed), name)
    raise KeyError(f"unknown algorithm {name!r}; expected one of {algorithm_names()}")


__all__ = [
    "CachedBeam",
    "Completion",
    "DecodeResult",
    "FillProblem",
    "GENERATION_CAP",
    "KNOWN_WIDTH_ALGORITHMS",
    "OracleBudgetExceeded",
    "PHASES",
    "Session",
    "algorithm_names",
    "as_beam_set",
    "beam_search",
    "bibs_decode",
    "bibs_pass",
    "clamped_result",
    "conditional_distribution",
    "directional_pass",
    "exact_fill_oracle",
    "get_decoder",
    "gsn_ordered",
    "open_generation",
    "rank_by_rule",
    "rerank_f_plus_b",
    "resample_position",
    "rule_score",
    "unknown_length_decode",
]

"""Shared domain types: vocabularies, blanked instances, beams and decode config."""

from __future__ import annotations

import json
import math
import string
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Optional, Sequence

#: log(0). IEEE -inf is absorbing under addition with finite values.
NEG_INF = float("-inf")

BOS_TOKEN = "<s>"
EOS_TOKEN = "</s>"
UNK_TOKEN = "<unk>"
BOS, EOS, UNK = 0, 1, 2

VOCAB_VERSION = 1

FORWARD = "forward"
BACKWARD = "backward"
DIRECTIONS = (FORWARD, BACKWARD)


def opposite(direction: str) -> str:
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    return BACKWARD if direction == FORWARD else FORWARD


_TERMINAL_PUNCT = string.punctuation + " \t"


def tokenize(line: str) -> list[str]:
    """Lowercase, strip terminal punctuation, split on whitespace."""
    return line.lower().strip().rstrip(_TERMINAL_PUNCT).split()


class Vocabulary:
    """Bijection between surface tokens and dense ids.

    Ids 0, 1, 2 are always BOS, EOS and UNK; content tokens follow.
    """

    def __init__(self, tokens: Sequence[str]):
        tokens = list(tokens)
        if tokens[:3] != [BOS_TOKEN, EOS_TOKEN, UNK_TOKEN]:
            tokens = [BOS_TOKEN, EOS_TOKEN, UNK_TOKEN] + [
                t for t in tokens if t not in (BOS_TOKEN, EOS_TOKEN, UNK_TOKEN)
            ]
        if len(set(tokens)) != len(tokens):
            raise ValueError("duplicate tokens in vocabulary")
        if len(tokens) < 4:
            raise ValueError("vocabulary needs at least one content token")
        self._tokens = tuple(tokens)
        self._index = {t: i for i, t in enumerate(self._tokens)}

    bos = BOS
    eos = EOS
    unk = UNK

    def __len__(self) -> int:
        return len(self._tokens)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self._tokens == other._tokens

    def __hash__(self) -> int:
        return hash(self._tokens)

    def __repr__(self) -> str:
        return f"Vocabulary(size={len(self)})"

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    @property
    def content_ids(self) -> tuple[int, ...]:
        return tuple(range(3, len(self._tokens)))

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def id(self, token: str) -> int:
        return self._index.get(token, UNK)

    def token(self, idx: int) -> str:
        return self._tokens[idx]

    def encode(self, tokens: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.id(t) for t in tokens)

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self._tokens[i] for i in ids]

    def to_json(self) -> dict:
        return {
            "version": VOCAB_VERSION,
            "tokens": list(self._tokens),
            "bos": BOS,
            "eos": EOS,
            "unk": UNK,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Vocabulary":
        if data.get("version") != VOCAB_VERSION:
            raise ValueError(f"unsupported vocabulary version {data.get('version')!r}")
        if (data["bos"], data["eos"], data["unk"]) != (BOS, EOS, UNK):
            raise ValueError("sentinel ids must be bos=0, eos=1, unk=2")
        return cls(data["tokens"])

    def save(self, path) -> None:
        from .io import atomic_write_text

        atomic_write_text(path, json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))


def build_vocabulary(corpus_tokens: Iterable[str], min_count: int = 1) -> Vocabulary:
    """Build a vocabulary ordered by descending frequency, then lexicographically.

    Tokens seen fewer than ``min_count`` times are left out and map to UNK.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts = Counter(corpus_tokens)
    if not counts:
        raise ValueError("empty corpus")
    for sentinel in (BOS_TOKEN, EOS_TOKEN, UNK_TOKEN):
        counts.pop(sentinel, None)
    kept = sorted((t for t, c in counts.items() if c >= min_count), key=lambda t: (-counts[t], t))
    if not kept:
        raise ValueError(f"no token reaches min_count={min_count}")
    return Vocabulary([BOS_TOKEN, EOS_TOKEN, UNK_TOKEN] + kept)


def validate_ids(ids: Sequence[int], vocab_size: int, *, allow_sentinels: bool = True) -> None:
    for i in ids:
        if not 0 <= i < vocab_size:
            raise ValueError(f"token id {i} out of range for vocabulary of size {vocab_size}")
        if not allow_sentinels and i in (BOS, EOS, UNK):
            raise ValueError(f"sentinel id {i} not allowed here")


@dataclass(frozen=True)
class BlankSpec:
    ratio: float
    centering: str = "middle"

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError(f"blank ratio must lie in [0, 1], got {self.ratio}")
        if self.centering != "middle":
            raise ValueError(f"unknown centering rule {self.centering!r}")


@dataclass(frozen=True)
class BlankedInstance:
    """One fill-in-the-blank problem.

    ``prefix`` and ``suffix`` are clamped context; ``gold`` is the removed span
    (``None`` for blind evaluation). ``width`` is the number of removed tokens.
    """

    id: str
    prefix: tuple[int, ...]
    suffix: tuple[int, ...]
    gold: Optional[tuple[int, ...]]
    width: int
    known_width: bool = True

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "suffix", tuple(self.suffix))
        if self.gold is not None:
            object.__setattr__(self, "gold", tuple(self.gold))
            if len(self.gold) != self.width:
                raise ValueError(f"gold length {len(self.gold)} != blank width {self.width}")
            if any(i in (BOS, EOS) for i in self.gold):
                raise ValueError("gold contains a sentinel id")
        if self.width < 0:
            raise ValueError("blank width must be >= 0")

    @property
    def length(self) -> int:
        return len(self.prefix) + self.width + len(self.suffix)

    def assemble(self, completion: Sequence[int]) -> tuple[int, ...]:
        return self.prefix + tuple(completion) + self.suffix

    def original(self) -> tuple[int, ...]:
        if self.gold is None:
            raise ValueError(f"instance {self.id} has no gold completion")
        return self.assemble(self.gold)

    def with_width(self, width: int) -> "BlankedInstance":
        """Known-width copy used when searching over candidate widths."""
        gold = self.gold if self.gold is not None and len(self.gold) == width else None
        return BlankedInstance(self.id, self.prefix, self.suffix, gold, width, True)

    def to_json(self, vocab: Vocabulary) -> dict:
        out = {
            "id": self.id,
            "prefix": vocab.decode(self.prefix),
            "suffix": vocab.decode(self.suffix),
            "width": self.width,
            "known_width": self.known_width,
        }
        if self.gold is not None:
            out["gold"] = vocab.decode(self.gold)
        return out

    @classmethod
    def from_json(cls, data: dict, vocab: Vocabulary) -> "BlankedInstance":
        gold = vocab.encode(data["gold"]) if data.get("gold") is not None else None
        width = data.get("width", len(gold) if gold is not None else None)
        if width is None:
            if data.get("known_width", True):
                raise ValueError(f"instance {data['id']}: known width requires 'width' or 'gold'")
            width = 0
        return cls(
            id=str(data["id"]),
            prefix=vocab.encode(data["prefix"]),
            suffix=vocab.encode(data["suffix"]),
            gold=gold,
            width=int(width),
            known_width=bool(data.get("known_width", True)),
        )


def blank_width(length: int, ratio: float) -> int:
    # Decimal(str(.)) so that e.g. 0.35 * 10 rounds as 3.5, not 3.4999...
    exact = Decimal(str(ratio)) * length
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def make_blank(sentence: Sequence[int], spec: BlankSpec, instance_id: str = "") -> BlankedInstance:
    """Remove ``round_half_up(r * T)`` tokens from the middle of ``sentence``.

    The prefix keeps ``floor((T - w) / 2)`` tokens, the suffix the rest.

    >>> inst = make_blank(tuple(range(10)), BlankSpec(0.25))
    >>> inst.prefix, inst.gold, inst.suffix
    ((0, 1, 2), (3, 4, 5), (6, 7, 8, 9))
    """
    sentence = tuple(sentence)
    n = len(sentence)
    if n < 1:
        raise ValueError("cannot blank an empty sentence")
    w = blank_width(n, spec.ratio)
    s = (n - w) // 2
    return BlankedInstance(
        id=instance_id,
        prefix=sentence[:s],
        suffix=sentence[s + w :],
        gold=sentence[s : s + w],
        width=w,
        known_width=True,
    )


@dataclass(frozen=True)
class Beam:
    """A (partial) hypothesis with its per-position conditional log-probs.

    ``ids`` and ``dir_logp`` are in sentence order; ``dir_logp`` holds the
    owning direction's conditional log-probability of each token.
    """

    ids: tuple[int, ...]
    dir_logp: tuple[float, ...]
    total_logp: float

    def __post_init__(self):
        if len(self.ids) != len(self.dir_logp):
            raise ValueError("ids and dir_logp length mismatch")
        if any(lp > 0 for lp in self.dir_logp):
            raise ValueError("conditional log-probabilities must be <= 0")
        expected = math.fsum(self.dir_logp)
        if abs(self.total_logp - expected) > 1e-12 and self.total_logp != expected:
            raise ValueError(f"total_logp {self.total_logp} != sum of dir_logp {expected}")

    @classmethod
    def from_logps(cls, ids: Sequence[int], dir_logp: Sequence[float]) -> "Beam":
        total = 0.0
        for lp in dir_logp:
            total += lp
        return cls(tuple(ids), tuple(dir_logp), total)


def rank_key(score: float, ids: Sequence[int]) -> tuple:
    """Sort key: higher score first, then lexicographically smaller ids."""
    return (-score, tuple(ids))


@dataclass(frozen=True)
class BeamSet:
    direction: str
    beams: tuple[Beam, ...]
    scores: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        object.__setattr__(self, "beams", tuple(self.beams))
        if not self.beams:
            raise ValueError("a beam set holds at least one beam")
        scores = self.scores
        if scores is None:
            scores = tuple(b.total_logp for b in self.beams)
        object.__setattr__(self, "scores", tuple(scores))
        keys = [rank_key(s, b.ids) for s, b in zip(self.scores, self.beams)]
        if keys != sorted(keys):
            raise ValueError("beams must be ordered by score, then ids")

    def __len__(self) -> int:
        return len(self.beams)

    @property
    def id_sequences(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b.ids for b in self.beams)

    @classmethod
    def sorted(cls, direction: str, beams: Iterable[Beam], scores=None) -> "BeamSet":
        beams = list(beams)
        scores = [b.total_logp for b in beams] if scores is None else list(scores)
        order = sorted(range(len(beams)), key=lambda i: rank_key(scores[i], beams[i].ids))
        return cls(direction, tuple(beams[i] for i in order), tuple(scores[i] for i in order))


CONVERGENCE_MODES = ("fixed", "unchanged")


@dataclass(frozen=True)
class DecodeConfig:
    """Search knobs shared by every decoder.

    ``convergence`` is ``"fixed"`` (always run ``meta_iterations``) or
    ``"unchanged"`` (also stop once the beams repeat between meta-iterations).
    """

    beam_width: int = 5
    meta_iterations: int = 4
    init_direction: str = BACKWARD
    allow_sentinels_in_blank: bool = False
    convergence: str = "fixed"

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.meta_iterations < 1:
            raise ValueError("meta_iterations must be >= 1")
        if self.init_direction not in DIRECTIONS:
            raise ValueError(f"unknown init direction {self.init_direction!r}")
        if self.convergence not in CONVERGENCE_MODES:
            raise ValueError(f"convergence must be one of {CONVERGENCE_MODES}")

    def to_json(self) -> dict:
        return {
            "beam_width": self.beam_width,
            "meta_iterations": self.meta_iterations,
            "init_direction": self.init_direction,
            "allow_sentinels_in_blank": self.allow_sentinels_in_blank,
            "convergence": self.convergence,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DecodeConfig":
        return cls(**data)

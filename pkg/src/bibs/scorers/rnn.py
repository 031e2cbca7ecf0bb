"""Elman RNN scorer (inference only, tanh cell)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..io import atomic_write_text
from ..seqcore import BOS, FORWARD
from .base import Scorer, check_direction
from .combine import log_softmax

RNN_VERSION = 1

_SHAPES = {
    "W_x": ("H", "E"),
    "W_h": ("H", "H"),
    "b_h": ("H",),
    "W_y": ("V", "H"),
    "b_y": ("V",),
    "E_tok": ("V", "E"),
}


@dataclass(frozen=True)
class RnnWeights:
    W_x: np.ndarray
    W_h: np.ndarray
    b_h: np.ndarray
    W_y: np.ndarray
    b_y: np.ndarray
    E_tok: np.ndarray
    x0: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in list(_SHAPES) + ["x0"]:
            value = getattr(self, name)
            if value is None:
                continue
            arr = np.array(value, dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        dims = self.dims
        for name, shape in _SHAPES.items():
            want = tuple(dims[d] for d in shape)
            got = getattr(self, name).shape
            if got != want:
                raise ValueError(f"{name} has shape {got}, expected {want}")
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} has non-finite entries")
        if self.x0 is not None:
            if self.x0.shape != (dims["E"],):
                raise ValueError(f"x0 has shape {self.x0.shape}, expected ({dims['E']},)")
            if not np.all(np.isfinite(self.x0)):
                raise ValueError("x0 has non-finite entries")

    @property
    def dims(self) -> dict[str, int]:
        H, E = np.shape(self.W_x)
        return {"H": H, "E": E, "V": np.shape(self.W_y)[0]}

    @classmethod
    def random(
        cls, rng: np.random.Generator, H: int, E: int, V: int, scale: float = 0.5, x0: bool = False
    ) -> "RnnWeights":
        g = lambda *shape: rng.normal(0.0, scale, size=shape)  # noqa: E731
        return cls(g(H, E), g(H, H), g(H), g(V, H), g(V), g(V, E), g(E) if x0 else None)

    @classmethod
    def zeros(cls, H: int, E: int, V: int) -> "RnnWeights":
        z = np.zeros
        return cls(z((H, E)), z((H, H)), z(H), z((V, H)), z(V), z((V, E)))

    def to_json(self) -> dict:
        arrays = {name: getattr(self, name).ravel().tolist() for name in _SHAPES}
        if self.x0 is not None:
            arrays["x0"] = self.x0.tolist()
        return {"version": RNN_VERSION, "dims": self.dims, "arrays": arrays}

    @classmethod
    def from_json(cls, data: dict) -> "RnnWeights":
        if data.get("version") != RNN_VERSION:
            raise ValueError(f"unsupported RNN weights version {data.get('version')!r}")
        dims = {d: int(data["dims"][d]) for d in ("H", "E", "V")}
        arrays = data["arrays"]
        parsed = {}
        for name, shape in list(_SHAPES.items()) + [("x0", ("E",))]:
            if name not in arrays:
                if name == "x0":
                    continue
                raise ValueError(f"missing array {name!r}")
            want = tuple(dims[d] for d in shape)
            flat = np.asarray(arrays[name], dtype=np.float64)
            if flat.ndim != 1 or flat.size != int(np.prod(want)):
                raise ValueError(f"{name}: {flat.size} values do not fit declared shape {want}")
            parsed[name] = flat.reshape(want)
        return cls(**parsed)

    def save(self, path) -> None:
        atomic_write_text(path, json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "RnnWeights":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))


def _hidden(weights: RnnWeights, h: np.ndarray, x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        pre = weights.W_x @ x + weights.W_h @ h + weights.b_h
    if not np.all(np.isfinite(pre)):
        raise FloatingPointError("numeric overflow in rnn_step")
    out = np.tanh(pre)
    out.flags.writeable = False
    return out


def output_log_distribution(weights: RnnWeights, h: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        logits = weights.W_y @ h + weights.b_y
    if not np.all(np.isfinite(logits)):
        raise FloatingPointError("numeric overflow in rnn_step")
    return log_softmax(logits)


def rnn_step(weights: RnnWeights, state: np.ndarray, token: int) -> tuple[np.ndarray, np.ndarray]:
    """One Elman step: consume ``token``, return the new hidden state and the
    log-distribution over the next token.

    ``h' = tanh(W_x emb(token) + W_h h + b_h)``, ``log softmax(W_y h' + b_y)``.
    """
    V = weights.E_tok.shape[0]
    if not 0 <= token < V:
        raise ValueError(f"token id {token} out of range for vocabulary of size {V}")
    if np.shape(state) != (weights.W_h.shape[0],):
        raise ValueError(f"state has shape {np.shape(state)}, expected ({weights.W_h.shape[0]},)")
    h = _hidden(weights, state, weights.E_tok[token])
    return h, output_log_distribution(weights, h)


class RnnScorer(Scorer):
    """Scorer contract over an Elman network.

    The initial state consumes the optional conditioning vector (or the
    weights' own ``x0``) as step zero, then BOS.
    """

    def __init__(self, weights: RnnWeights, direction: str = FORWARD):
        self.weights = weights
        self.direction = check_direction(direction)
        self.vocab_size = weights.dims["V"]

    def __repr__(self) -> str:
        d = self.weights.dims
        return f"RnnScorer(H={d['H']}, E={d['E']}, V={d['V']}, {self.direction})"

    def initial_state(self, conditioning=None) -> np.ndarray:
        w = self.weights
        h = np.zeros(w.dims["H"])
        x0 = conditioning if conditioning is not None else w.x0
        if x0 is not None:
            x0 = np.asarray(x0, dtype=np.float64)
            if x0.shape != (w.dims["E"],):
                raise ValueError(f"conditioning vector has shape {x0.shape}, expected ({w.dims['E']},)")
            h = _hidden(w, h, x0)
        return _hidden(w, h, w.E_tok[BOS])

    def advance(self, state: np.ndarray, token: int) -> np.ndarray:
        return _hidden(self.weights, state, self.weights.E_tok[token])

    def log_distribution(self, state: np.ndarray) -> np.ndarray:
        return output_log_distribution(self.weights, state)

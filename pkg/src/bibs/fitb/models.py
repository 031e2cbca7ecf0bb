"""Trained scorer bundle: vocabulary plus forward and backward n-gram models."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..scorers import NGramModel, Scorer, train_ngram
from ..seqcore import Vocabulary, build_vocabulary

VOCAB_FILE = "vocab.json"
FORWARD_FILE = "forward.json"
BACKWARD_FILE = "backward.json"


@dataclass
class ModelBundle:
    vocab: Vocabulary
    forward: Scorer
    backward: Scorer

    @classmethod
    def train(
        cls, sentences: Sequence[Sequence[str]], order: int = 3, smoothing: float = 0.1, min_count: int = 1
    ) -> "ModelBundle":
        vocab = build_vocabulary((t for s in sentences for t in s), min_count)
        fwd, bwd = train_ngram([vocab.encode(s) for s in sentences], order, smoothing, len(vocab))
        return cls(vocab, fwd, bwd)

    def save(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        self.vocab.save(out / VOCAB_FILE)
        self.forward.save(out / FORWARD_FILE, VOCAB_FILE)
        self.backward.save(out / BACKWARD_FILE, VOCAB_FILE)
        return [out / VOCAB_FILE, out / FORWARD_FILE, out / BACKWARD_FILE]

    @classmethod
    def load(cls, model_dir) -> "ModelBundle":
        d = Path(model_dir)
        vocab = Vocabulary.load(d / VOCAB_FILE)
        fwd = NGramModel.load(d / FORWARD_FILE)
        bwd = NGramModel.load(d / BACKWARD_FILE)
        for m in (fwd, bwd):
            if m.vocab_size != len(vocab):
                raise ValueError(f"{model_dir}: model vocabulary size {m.vocab_size} != {len(vocab)}")
        return cls(vocab, fwd, bwd)


def corpus_counts(sentences: Iterable[Sequence[str]]) -> tuple[int, int]:
    """Token and type counts."""
    tokens = 0
    types = set()
    for s in sentences:
        tokens += len(s)
        types.update(s)
    return tokens, len(types)

"""Corpus ingestion, splits and blanked dataset files."""

from __future__ import annotations

import logging
import random
from pathlib import Path
from typing import Iterable, Optional, Sequence

from ..io import read_jsonl, read_lines, write_jsonl
from ..seqcore import BlankedInstance, BlankSpec, Vocabulary, make_blank, tokenize

log = logging.getLogger(__name__)

MIN_SENTENCE_LENGTH = 2


def load_corpus(path) -> list[list[str]]:
    """Tokenized non-empty lines of a UTF-8 corpus file."""
    return [toks for toks in (tokenize(line) for line in read_lines(path)) if toks]


def split_corpus(
    sentences: Sequence[Sequence[str]],
    test: int,
    val: int = 0,
    train: Optional[int] = None,
    seed: int = 0,
) -> dict[str, list[list[str]]]:
    """Disjoint seeded splits; ``train=None`` takes everything left over."""
    order = list(range(len(sentences)))
    random.Random(seed).shuffle(order)
    if test + val > len(order):
        raise ValueError(f"corpus has {len(order)} sentences, need {test + val} for test+val")
    rest = order[test + val :]
    if train is not None:
        if train > len(rest):
            raise ValueError(f"only {len(rest)} sentences left for a train split of {train}")
        rest = rest[:train]
    pick = lambda idx: [list(sentences[i]) for i in idx]  # noqa: E731
    return {"test": pick(order[:test]), "val": pick(order[test : test + val]), "train": pick(rest)}


def ratio_tag(ratio: float) -> str:
    return f"r{round(ratio * 100):02d}"


def dataset_filename(ratio: float) -> str:
    return f"fitb_{ratio_tag(ratio)}.jsonl"


def blank_sentences(
    sentences: Iterable[Sequence[str]],
    ratio: float,
    vocab: Vocabulary,
    known_width: bool = True,
) -> list[BlankedInstance]:
    """One blanked instance per sentence of at least two tokens."""
    spec = BlankSpec(ratio)
    out = []
    skipped = 0
    for idx, words in enumerate(sentences):
        if len(words) < MIN_SENTENCE_LENGTH:
            skipped += 1
            continue
        inst = make_blank(vocab.encode(words), spec, f"{idx:05d}-{ratio_tag(ratio)}")
        if not known_width:
            inst = BlankedInstance(inst.id, inst.prefix, inst.suffix, inst.gold, inst.width, False)
        out.append(inst)
    if skipped:
        log.info("skipped %d sentences shorter than %d tokens", skipped, MIN_SENTENCE_LENGTH)
    return out


def generate_dataset(
    sentences: Sequence[Sequence[str]],
    ratios: Sequence[float],
    vocab: Vocabulary,
    out_dir=None,
    known_width: bool = True,
) -> dict[float, list[BlankedInstance]]:
    """Blank every sentence at every ratio; optionally write one JSON Lines file per ratio."""
    datasets = {r: blank_sentences(sentences, r, vocab, known_width) for r in ratios}
    if out_dir is not None:
        for r, instances in datasets.items():
            write_dataset(Path(out_dir) / dataset_filename(r), instances, vocab, r)
    return datasets


def write_dataset(path, instances: Iterable[BlankedInstance], vocab: Vocabulary, ratio: Optional[float] = None):
    rows = []
    for inst in instances:
        row = inst.to_json(vocab)
        if ratio is not None:
            row["ratio"] = ratio
        rows.append(row)
    write_jsonl(path, rows)


def read_dataset(path, vocab: Vocabulary) -> list[tuple[BlankedInstance, Optional[float]]]:
    """Instances with the ratio each was blanked at (``None`` when not recorded)."""
    return [(BlankedInstance.from_json(row, vocab), row.get("ratio")) for row in read_jsonl(path)]

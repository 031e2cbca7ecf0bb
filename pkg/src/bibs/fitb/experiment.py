"""Batch decoding runs over blanked datasets."""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from ..decode import FillProblem, get_decoder
from ..metrics import CiderCorpus
from ..seqcore import BlankedInstance, DecodeConfig, Vocabulary
from .dataset import generate_dataset, load_corpus, split_corpus
from .evaluate import RunReport, instance_metrics
from .models import ModelBundle
from .synthetic import generate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentSpec:
    """One run of the fill-in-the-blank grid.

    ``corpus`` is a text file with one sentence per line; when it is ``None``
    ``synthetic`` sentences are drawn from the built-in generator instead.
    """

    corpus: Optional[str] = None
    splits: dict = field(default_factory=lambda: {"train": None, "val": 0, "test": 200})
    ratios: tuple = (0.25, 0.5, 0.75)
    algorithms: tuple = ("bs-f", "bs-b", "bibs")
    config: DecodeConfig = field(default_factory=DecodeConfig)
    seed: int = 0
    order: int = 3
    smoothing: float = 0.1
    min_count: int = 1
    synthetic: int = 2200
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.ratios or any(not 0.0 < r < 1.0 for r in self.ratios):
            raise ValueError("ratios must be non-empty and lie in (0, 1)")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        for name in self.algorithms:
            get_decoder(name)
        for key in self.splits:
            if key not in ("train", "val", "test"):
                raise ValueError(f"unknown split {key!r}")
        if self.splits.get("test", 0) < 1:
            raise ValueError("test split must hold at least one sentence")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentSpec":
        data = dict(data)
        if "config" in data:
            data["config"] = DecodeConfig.from_json(data["config"])
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_json(self) -> dict:
        return {
            "corpus": self.corpus,
            "splits": dict(self.splits),
            "ratios": list(self.ratios),
            "algorithms": list(self.algorithms),
            "config": self.config.to_json(),
            "seed": self.seed,
            "order": self.order,
            "smoothing": self.smoothing,
            "min_count": self.min_count,
            "synthetic": self.synthetic,
            "jobs": self.jobs,
        }


@dataclass
class Prepared:
    models: ModelBundle
    splits: dict
    datasets: dict  # ratio -> list[BlankedInstance]


def prepare(spec: ExperimentSpec, models: Optional[ModelBundle] = None) -> Prepared:
    """Split the corpus, train scorers on the train split and blank the test split."""
    sentences = load_corpus(spec.corpus) if spec.corpus else generate(spec.synthetic, spec.seed)
    splits = split_corpus(
        sentences,
        test=spec.splits.get("test", 0),
        val=spec.splits.get("val", 0),
        train=spec.splits.get("train"),
        seed=spec.seed,
    )
    if models is None:
        models = ModelBundle.train(splits["train"], spec.order, spec.smoothing, spec.min_count)
    datasets = generate_dataset(splits["test"], spec.ratios, models.vocab)
    return Prepared(models, splits, datasets)


# Worker-side state, set once per process so models are not pickled per task.
_WORKER: dict = {}


def _init_worker(models: ModelBundle, config: DecodeConfig) -> None:
    _WORKER["models"] = models
    _WORKER["config"] = config


def decode_one(
    models: ModelBundle,
    config: DecodeConfig,
    instance: BlankedInstance,
    algorithm: str,
    seed: int,
) -> dict:
    """Decode one instance; errors become a row with an ``error`` field."""
    start = time.perf_counter()
    try:
        problem = FillProblem(instance, models.forward, models.backward, config)
        row = get_decoder(algorithm)(problem, seed).to_json(instance, models.vocab)
    except Exception as exc:  # noqa: BLE001 - recorded, never aborts a batch
        row = {"id": instance.id, "algorithm": algorithm, "error": f"{type(exc).__name__}: {exc}"}
    row["wall_ms"] = (time.perf_counter() - start) * 1000.0
    return row


def _decode_task(task) -> dict:
    instance, algorithm, seed = task
    return decode_one(_WORKER["models"], _WORKER["config"], instance, algorithm, seed)


def decode_batch(
    models: ModelBundle,
    config: DecodeConfig,
    tasks: Sequence[tuple[BlankedInstance, str]],
    seed: int = 0,
    jobs: int = 1,
) -> list[dict]:
    """Decode ``(instance, algorithm)`` pairs, in input order, on up to ``jobs`` processes."""
    payload = [(inst, algo, seed) for inst, algo in tasks]
    if jobs <= 1 or len(payload) <= 1:
        return [decode_one(models, config, inst, algo, s) for inst, algo, s in payload]
    chunk = max(1, len(payload) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(models, config)) as pool:
        return list(pool.map(_decode_task, payload, chunksize=chunk))


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def attach_metrics(
    rows: Sequence[dict],
    instances: dict,
    vocab: Vocabulary,
    full_corpus: Optional[CiderCorpus] = None,
) -> list[dict]:
    """Add ``sentence``, ``reference`` and ``metrics`` to every successful row.

    ``instances`` maps instance id to ``(BlankedInstance, ratio)``. The full
    sentence CIDEr corpus defaults to the originals of all instances.
    """
    originals = {i.id: vocab.decode(i.original()) for i, _ in instances.values() if i.gold is not None}
    if full_corpus is None:
        full_corpus = CiderCorpus.from_sentences(sorted(set(map(tuple, originals.values()))))
    golds = sorted({tuple(vocab.decode(i.gold)) for i, _ in instances.values() if i.gold})
    blank_corpus = CiderCorpus.from_sentences(golds) if golds else None
    out = []
    for row in rows:
        row = dict(row)
        inst, ratio = instances[row["id"]]
        row.setdefault("ratio", ratio)
        if "error" not in row and inst.gold is not None:
            completion = list(row["completion"])
            sentence = vocab.decode(inst.prefix) + completion + vocab.decode(inst.suffix)
            row["sentence"] = sentence
            row["reference"] = originals[inst.id]
            row["metrics"] = instance_metrics(
                sentence, row["reference"], completion, vocab.decode(inst.gold), full_corpus, blank_corpus
            )
        out.append(row)
    return out


def run_experiment(
    spec: ExperimentSpec,
    models: Optional[ModelBundle] = None,
    out_dir=None,
) -> RunReport:
    """Decode every test instance at every ratio with every algorithm and aggregate."""
    prep = prepare(spec, models)
    instances = {inst.id: (inst, r) for r, insts in prep.datasets.items() for inst in insts}
    tasks = [(inst, algo) for algo in spec.algorithms for r in spec.ratios for inst in prep.datasets[r]]
    log.info("decoding %d instances x %d algorithms", len(instances), len(spec.algorithms))
    rows = decode_batch(prep.models, spec.config, tasks, spec.seed, spec.jobs)
    failed = sum("error" in r for r in rows)
    if failed:
        log.warning("%d decodes failed and are excluded from the means", failed)
    report = RunReport.from_details(attach_metrics(rows, instances, prep.models.vocab))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report.write(out / "summary.json", out / "details.jsonl")
    return report

"""Fill-in-the-blank task harness."""

from .dataset import (
    blank_sentences,
    dataset_filename,
    generate_dataset,
    load_corpus,
    ratio_tag,
    read_dataset,
    split_corpus,
    write_dataset,
)
from .evaluate import METRIC_KEYS, RunReport, aggregate, instance_metrics
from .experiment import (
    ExperimentSpec,
    Prepared,
    attach_metrics,
    decode_batch,
    decode_one,
    default_jobs,
    prepare,
    run_experiment,
)
from .models import ModelBundle, corpus_counts
from .synthetic import generate as generate_synthetic

__all__ = [
    "METRIC_KEYS",
    "ExperimentSpec",
    "ModelBundle",
    "Prepared",
    "RunReport",
    "aggregate",
    "attach_metrics",
    "blank_sentences",
    "corpus_counts",
    "dataset_filename",
    "decode_batch",
    "decode_one",
    "default_jobs",
    "generate_dataset",
    "generate_synthetic",
    "instance_metrics",
    "load_corpus",
    "prepare",
    "ratio_tag",
    "read_dataset",
    "run_experiment",
    "split_corpus",
    "write_dataset",
]

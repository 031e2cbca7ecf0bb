"""Command-line entry point: train, blank, decode, eval and bench.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bench
from .decode import algorithm_names, get_decoder
from .fitb import (
    ModelBundle,
    RunReport,
    attach_metrics,
    corpus_counts,
    dataset_filename,
    decode_batch,
    default_jobs,
    generate_dataset,
    load_corpus,
    read_dataset,
    split_corpus,
)
from .io import atomic_write_text, read_jsonl, write_jsonl
from .metrics import CiderCorpus
from .seqcore import DIRECTIONS, BlankedInstance, DecodeConfig, build_vocabulary

log = logging.getLogger("bibs")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class CommandError(Exception):
    """A runtime failure reported as ``error: ...`` with exit code 1."""


def _ratio(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"ratio must lie in (0, 1), got {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bibs", description="Bidirectional beam search for fill-in-the-blank.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("train", help="train forward and backward n-gram scorers")
    p.add_argument("--corpus", required=True, help="text file, one sentence per line")
    p.add_argument("--order", type=_positive, default=3)
    p.add_argument("--smoothing", type=float, default=0.1, help="add-k constant")
    p.add_argument("--min-count", type=_positive, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("blank", help="split a corpus and write blanked datasets")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ratios", type=_ratio, nargs="+", default=[0.25, 0.5, 0.75])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test", type=_positive, default=200, help="test split size")
    p.add_argument("--val", type=_non_negative, default=0, help="validation split size")
    p.add_argument("--train", type=_non_negative, default=None, help="train split size (default: the rest)")
    p.add_argument("--unknown-width", action="store_true", help="mark instances as unknown width")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_blank)

    p = sub.add_parser("decode", help="fill every blank of a dataset")
    p.add_argument("--models", required=True, help="directory written by 'train'")
    p.add_argument("--dataset", required=True)
    p.add_argument("--algo", required=True, help=f"one of {', '.join(algorithm_names())}")
    p.add_argument("--beam", type=_positive, default=5)
    p.add_argument("--iters", type=_positive, default=4)
    p.add_argument("--init-direction", choices=DIRECTIONS, default="backward")
    p.add_argument("--convergence", choices=("fixed", "unchanged"), default="fixed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: available CPUs)")
    p.add_argument("--timings", default=None, help="optional JSON Lines file of per-instance wall times")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("eval", help="score decode results against the dataset")
    p.add_argument("--results", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--cider-corpus", default=None, help="sentences for CIDEr document frequencies")
    p.add_argument("--timings", default=None, help="wall times written by 'decode --timings'")
    p.add_argument("--out", default=None, help="directory for summary.json, details.jsonl and table.txt")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="verify the 2BMw blank-region step count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="optional JSON Lines output")
    p.set_defaults(func=cmd_bench)
    return parser


def cmd_train(args) -> int:
    sentences = load_corpus(args.corpus)
    if not sentences:
        raise CommandError(f"{args.corpus}: no sentences")
    models = ModelBundle.train(sentences, args.order, args.smoothing, args.min_count)
    for path in models.save(args.out):
        log.info("wrote %s", path)
    tokens, types = corpus_counts(sentences)
    print(f"sentences {len(sentences)}  tokens {tokens}  types {types}  vocab {len(models.vocab)}")
    return EXIT_OK


def cmd_blank(args) -> int:
    sentences = load_corpus(args.corpus)
    splits = split_corpus(sentences, test=args.test, val=args.val, train=args.train, seed=args.seed)
    out = Path(args.out)
    for name, part in splits.items():
        atomic_write_text(out / f"{name}.txt", "".join(" ".join(s) + "\n" for s in part))
    # Encoding only; decoders map strings through their own vocabulary.
    vocab = build_vocabulary(t for s in splits["test"] for t in s)
    datasets = generate_dataset(splits["test"], args.ratios, vocab, out, known_width=not args.unknown_width)
    for ratio, instances in datasets.items():
        print(f"{out / dataset_filename(ratio)}: {len(instances)} instances")
    return EXIT_OK


def cmd_decode(args) -> int:
    try:
        get_decoder(args.algo)
    except KeyError as exc:
        raise _UsageError(str(exc.args[0])) from None
    models = ModelBundle.load(args.models)
    dataset = read_dataset(args.dataset, models.vocab)
    config = DecodeConfig(
        beam_width=args.beam,
        meta_iterations=args.iters,
        init_direction=args.init_direction,
        convergence=args.convergence,
    )
    jobs = args.jobs or default_jobs()
    rows = decode_batch(models, config, [(inst, args.algo) for inst, _ in dataset], args.seed, jobs)
    timings = []
    for row, (_, ratio) in zip(rows, dataset):
        timings.append({"id": row["id"], "algorithm": row["algorithm"], "wall_ms": row.pop("wall_ms")})
        if ratio is not None:
            row["ratio"] = ratio
    # Wall times vary run to run, so they stay out of the results file.
    write_jsonl(args.out, rows)
    if args.timings:
        write_jsonl(args.timings, timings)
    failed = sum("error" in r for r in rows)
    print(f"{args.out}: {len(rows)} results, {failed} failed")
    return EXIT_OK


def _dataset_vocab(dataset_rows: Sequence[dict], result_rows: Sequence[dict]):
    tokens = []
    for row in dataset_rows:
        tokens += row["prefix"] + row["suffix"] + (row.get("gold") or [])
    for row in result_rows:
        tokens += row.get("completion", [])
    return build_vocabulary(tokens)


def cmd_eval(args) -> int:
    results = list(read_jsonl(args.results))
    if not results:
        raise CommandError("no results")
    dataset_rows = list(read_jsonl(args.dataset))
    vocab = _dataset_vocab(dataset_rows, results)
    instances: dict[str, tuple[BlankedInstance, Optional[float]]] = {}
    for row in dataset_rows:
        inst = BlankedInstance.from_json(row, vocab)
        if inst.gold is None:
            raise CommandError(f"dataset instance {inst.id} has no gold completion")
        instances[inst.id] = (inst, row.get("ratio"))
    result_ids = {r["id"] for r in results}
    missing = sorted(set(instances) - result_ids)
    unknown = sorted(result_ids - set(instances))
    if missing or unknown:
        parts = []
        if missing:
            parts.append(f"missing results for ids: {', '.join(missing)}")
        if unknown:
            parts.append(f"results for ids not in dataset: {', '.join(unknown)}")
        raise CommandError("; ".join(parts))
    seen = set()
    for r in results:
        key = (r["id"], r["algorithm"])
        if key in seen:
            raise CommandError(f"duplicate result for id {r['id']} algorithm {r['algorithm']}")
        seen.add(key)
    if args.timings:
        wall = {(t["id"], t["algorithm"]): t["wall_ms"] for t in read_jsonl(args.timings)}
        for r in results:
            r["wall_ms"] = wall.get((r["id"], r["algorithm"]))
    corpus = None
    if args.cider_corpus:
        sentences = load_corpus(args.cider_corpus)
        if not sentences:
            raise CommandError(f"{args.cider_corpus}: no sentences")
        corpus = CiderCorpus.from_sentences(sentences)
    report = RunReport.from_details(attach_metrics(results, instances, vocab, corpus))
    table = report.table()
    print(table)
    if args.out:
        out = Path(args.out)
        report.write(out / "summary.json", out / "details.jsonl")
        atomic_write_text(out / "table.txt", table + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench.run_bench(seed=args.seed)
    print(bench.format_table(rows))
    if args.out:
        write_jsonl(args.out, [r.to_json() for r in rows])
    bad = [r for r in rows if not r.ok]
    if bad:
        print(f"{len(bad)} configurations broke the 2BMw step count", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


class _UsageError(Exception):
    pass


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CommandError, OSError, ValueError, KeyError, FloatingPointError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

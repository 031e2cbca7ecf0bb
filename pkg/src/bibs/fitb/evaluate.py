"""Per-instance metrics and report aggregation."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..io import write_jsonl
from ..metrics import CiderCorpus, bleu, cider, corpus_bleu

METRIC_KEYS = ("bleu1", "bleu2", "bleu3", "bleu4", "cider", "blank_bleu4", "blank_cider")
MEAN_KEYS = METRIC_KEYS + ("joint_logp", "advance_steps", "wall_ms")


def instance_metrics(
    sentence: Sequence[str],
    reference: Sequence[str],
    completion: Sequence[str],
    gold: Sequence[str],
    full_corpus: CiderCorpus,
    blank_corpus: Optional[CiderCorpus] = None,
) -> dict[str, Optional[float]]:
    """Full-sentence metrics plus blank-only variants (``None`` for an empty gold span)."""
    out: dict[str, Optional[float]] = {
        f"bleu{n}": bleu(sentence, [reference], n) for n in range(1, 5)
    }
    out["cider"] = cider(sentence, [reference], full_corpus)
    if gold:
        out["blank_bleu4"] = bleu(completion, [gold], 4)
        out["blank_cider"] = cider(completion, [gold], blank_corpus) if blank_corpus else None
    else:
        out["blank_bleu4"] = out["blank_cider"] = None
    return out


def _mean(values: Iterable[Optional[float]]) -> Optional[float]:
    vals = [v for v in values if v is not None]
    return math.fsum(vals) / len(vals) if vals else None


def aggregate(details: Sequence[dict]) -> list[dict]:
    """One summary cell per (algorithm, ratio) from per-instance detail rows.

    Failed rows (those with an ``error``) are counted and left out of every mean.
    """
    groups: dict[tuple, list[dict]] = defaultdict(list)
    for row in details:
        groups[(row["algorithm"], row.get("ratio"))].append(row)
    cells = []
    for (algo, ratio), rows in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0.0)):
        ok = [r for r in rows if "error" not in r]
        cell = {"algorithm": algo, "ratio": ratio, "n": len(ok), "failed": len(rows) - len(ok)}
        for key in METRIC_KEYS:
            cell[key] = _mean(r["metrics"].get(key) for r in ok if "metrics" in r)
        for key in ("joint_logp", "advance_steps", "wall_ms"):
            cell[key] = _mean(r.get(key) for r in ok)
        scored = [r for r in ok if "sentence" in r]
        cell["corpus_bleu4"] = (
            corpus_bleu([r["sentence"] for r in scored], [[r["reference"]] for r in scored], 4) if scored else None
        )
        cells.append(cell)
    return cells


@dataclass
class RunReport:
    cells: list[dict]
    details: list[dict] = field(default_factory=list)

    @classmethod
    def from_details(cls, details: Sequence[dict]) -> "RunReport":
        return cls(aggregate(details), list(details))

    def cell(self, algorithm: str, ratio: Optional[float] = None) -> dict:
        for c in self.cells:
            if c["algorithm"] == algorithm and (ratio is None or c["ratio"] == ratio):
                return c
        raise KeyError((algorithm, ratio))

    def to_json(self) -> dict:
        return {"cells": self.cells}

    def write(self, summary_path, details_path=None) -> None:
        import json

        from ..io import atomic_write_text

        atomic_write_text(summary_path, json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n")
        if details_path is not None:
            write_jsonl(details_path, self.details)

    def table(self) -> str:
        cols = [
            ("algorithm", "{}"), ("ratio", "{}"), ("n", "{}"), ("failed", "{}"),
            ("bleu1", "{:.3f}"), ("bleu4", "{:.3f}"), ("corpus_bleu4", "{:.3f}"), ("cider", "{:.3f}"),
            ("blank_bleu4", "{:.3f}"), ("blank_cider", "{:.3f}"), ("joint_logp", "{:.3f}"),
            ("advance_steps", "{:.1f}"), ("wall_ms", "{:.2f}"),
        ]
        rows = [[name for name, _ in cols]]
        for c in self.cells:
            rows.append(["-" if c.get(k) is None else fmt.format(c[k]) for k, fmt in cols])
        widths = [max(len(r[i]) for r in rows) for i in range(len(cols))]
        lines = ["  ".join(v.rjust(w) if i else v.ljust(w) for i, (v, w) in enumerate(zip(r, widths))) for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines)

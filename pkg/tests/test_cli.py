import json
import subprocess
import sys

import pytest

import oracles
from bibs.cli import main
from bibs.fitb.synthetic import iter_lines

TINY = "a b\na b c\nb\n"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Corpus, blanked datasets and trained models shared across tests."""
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus.txt"
    corpus.write_text("\n".join(iter_lines(600, 11)) + "\n")
    assert main(["blank", "--corpus", str(corpus), "--test", "20", "--ratios", "0.25", "0.5",
                 "--seed", "3", "--out", str(root / "data")]) == 0
    assert main(["train", "--corpus", str(root / "data" / "train.txt"), "--order", "3",
                 "--smoothing", "0.1", "--out", str(root / "models")]) == 0
    return root


class TestTrain:
    def test_bigram_hand_count(self, tmp_path, capsys):
        corpus = tmp_path / "tiny.txt"
        corpus.write_text(TINY)
        code, out, _ = run(capsys, "train", "--corpus", corpus, "--order", 2, "--smoothing", 1, "--out", tmp_path / "m")
        assert code == 0
        assert "tokens 6" in out and "types 3" in out
        vocab = json.loads((tmp_path / "m" / "vocab.json").read_text())["tokens"]
        ids = {t: i for i, t in enumerate(vocab)}
        sents = [[ids[t] for t in line.split()] for line in TINY.splitlines()]
        fwd = json.loads((tmp_path / "m" / "forward.json").read_text())
        bwd = json.loads((tmp_path / "m" / "backward.json").read_text())
        for model, data in ((fwd, sents), (bwd, [s[::-1] for s in sents])):
            want = {
                " ".join(map(str, ctx)): {str(t): c for t, c in row.items()}
                for ctx, row in oracles.hand_ngram_counts(data, 2).items()
            }
            assert model["tables"] == want

    def test_unigram_empty_context(self, tmp_path, capsys):
        corpus = tmp_path / "tiny.txt"
        corpus.write_text(TINY)
        assert run(capsys, "train", "--corpus", corpus, "--order", 1, "--out", tmp_path / "m")[0] == 0
        assert list(json.loads((tmp_path / "m" / "forward.json").read_text())["tables"]) == [""]

    def test_missing_corpus_flag(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "bibs.cli", "train", "--out", str(tmp_path)], capture_output=True, text=True
        )
        assert proc.returncode == 2
        assert "--corpus" in proc.stderr

    def test_unreadable_corpus(self, tmp_path, capsys):
        code, _, err = run(capsys, "train", "--corpus", tmp_path / "nope.txt", "--out", tmp_path / "m")
        assert code == 1 and "error:" in err

    def test_unknown_flag(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["train", "--corpus", "x", "--out", str(tmp_path), "--bogus"])
        assert exc.value.code == 2


class TestBlank:
    def test_outputs(self, workspace):
        data = workspace / "data"
        for name in ("train.txt", "val.txt", "test.txt", "fitb_r25.jsonl", "fitb_r50.jsonl"):
            assert (data / name).exists()
        rows = [json.loads(l) for l in (data / "fitb_r50.jsonl").read_text().splitlines()]
        assert len(rows) == 20 and all(r["ratio"] == 0.5 for r in rows)

    def test_deterministic(self, workspace, tmp_path, capsys):
        run(capsys, "blank", "--corpus", workspace / "corpus.txt", "--test", 20, "--ratios", 0.25, 0.5,
            "--seed", 3, "--out", tmp_path)
        assert (tmp_path / "fitb_r50.jsonl").read_bytes() == (workspace / "data" / "fitb_r50.jsonl").read_bytes()

    def test_bad_ratio(self, workspace):
        with pytest.raises(SystemExit) as exc:
            main(["blank", "--corpus", str(workspace / "corpus.txt"), "--ratios", "1.5", "--out", "x"])
        assert exc.value.code == 2


class TestDecode:
    def test_byte_identical(self, workspace, tmp_path, capsys):
        args = ["decode", "--models", workspace / "models", "--dataset", workspace / "data" / "fitb_r50.jsonl",
                "--algo", "bibs", "--beam", 5, "--iters", 4, "--seed", 9]
        assert run(capsys, *args, "--out", tmp_path / "a.jsonl", "--jobs", 2)[0] == 0
        assert run(capsys, *args, "--out", tmp_path / "b.jsonl", "--jobs", 1)[0] == 0
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
        rows = [json.loads(l) for l in (tmp_path / "a.jsonl").read_text().splitlines()]
        assert len(rows) == 20
        assert all(r["meta_iterations"] == 4 and len(r["trace"]) == 5 for r in rows)

    def test_unknown_algo_is_usage_error(self, workspace, tmp_path, capsys):
        code, _, err = run(capsys, "decode", "--models", workspace / "models", "--dataset",
                           workspace / "data" / "fitb_r50.jsonl", "--algo", "viterbi", "--out", tmp_path / "x")
        assert code == 2 and "viterbi" in err
        assert not (tmp_path / "x").exists()

    def test_oracle_ranking(self, tmp_path, capsys):
        corpus = tmp_path / "c.txt"
        corpus.write_text("a b c d\nb c d a\nc d a b\nd a b c\na c b d\n")
        run(capsys, "blank", "--corpus", corpus, "--test", 2, "--ratios", 0.25, "--out", tmp_path / "d")
        run(capsys, "train", "--corpus", corpus, "--order", 2, "--out", tmp_path / "m")
        code, _, _ = run(capsys, "decode", "--models", tmp_path / "m", "--dataset", tmp_path / "d" / "fitb_r25.jsonl",
                         "--algo", "oracle", "--out", tmp_path / "o.jsonl")
        assert code == 0
        rows = [json.loads(l) for l in (tmp_path / "o.jsonl").read_text().splitlines()]
        for r in rows:
            assert len(r["ranking"]) == 4  # every one-token fill over four content words
            joints = [x["joint_logp"] for x in r["ranking"]]
            assert joints == sorted(joints, reverse=True)

    def test_unknown_length(self, workspace, tmp_path, capsys):
        code, _, _ = run(capsys, "decode", "--models", workspace / "models", "--dataset",
                         workspace / "data" / "fitb_r25.jsonl", "--algo", "unknown-length:bs-f", "--beam", 2,
                         "--out", tmp_path / "u.jsonl", "--jobs", 1)
        assert code == 0
        row = json.loads((tmp_path / "u.jsonl").read_text().splitlines()[0])
        assert row["algorithm"] == "unknown-length:bs-f" and "widths" in row


class TestEval:
    def test_gold_results_score_one(self, workspace, tmp_path, capsys):
        dataset = workspace / "data" / "fitb_r50.jsonl"
        rows = [json.loads(l) for l in dataset.read_text().splitlines()]
        results = tmp_path / "gold.jsonl"
        results.write_text("".join(
            json.dumps({"id": r["id"], "algorithm": "gold", "completion": r["gold"], "joint_logp": 0.0,
                        "advance_steps": 0}) + "\n"
            for r in rows
        ))
        code, out, _ = run(capsys, "eval", "--results", results, "--dataset", dataset,
                           "--cider-corpus", workspace / "data" / "test.txt", "--out", tmp_path / "ev")
        assert code == 0
        summary = json.loads((tmp_path / "ev" / "summary.json").read_text())["cells"][0]
        assert summary["bleu4"] == 1.0 and summary["blank_bleu4"] == 1.0
        assert "gold" in out

    def test_recomputation_matches_summary(self, workspace, tmp_path, capsys):
        dataset = workspace / "data" / "fitb_r50.jsonl"
        run(capsys, "decode", "--models", workspace / "models", "--dataset", dataset, "--algo", "bs-b",
            "--out", tmp_path / "r.jsonl", "--timings", tmp_path / "t.jsonl", "--jobs", 1)
        code, _, _ = run(capsys, "eval", "--results", tmp_path / "r.jsonl", "--dataset", dataset,
                         "--timings", tmp_path / "t.jsonl", "--out", tmp_path / "ev")
        assert code == 0
        cell = json.loads((tmp_path / "ev" / "summary.json").read_text())["cells"][0]
        details = [json.loads(l) for l in (tmp_path / "ev" / "details.jsonl").read_text().splitlines()]
        for key in ("bleu1", "bleu2", "bleu3", "bleu4", "cider"):
            vals = [d["metrics"][key] for d in details]
            assert abs(cell[key] - sum(vals) / len(vals)) <= 1e-12
        assert cell["wall_ms"] is not None
        assert (tmp_path / "ev" / "table.txt").exists()

    def test_empty_results(self, workspace, tmp_path, capsys):
        (tmp_path / "e.jsonl").write_text("")
        code, _, err = run(capsys, "eval", "--results", tmp_path / "e.jsonl", "--dataset",
                           workspace / "data" / "fitb_r50.jsonl")
        assert code == 1 and "no results" in err

    def test_missing_ids_listed(self, workspace, tmp_path, capsys):
        dataset = workspace / "data" / "fitb_r50.jsonl"
        rows = [json.loads(l) for l in dataset.read_text().splitlines()]
        partial = tmp_path / "p.jsonl"
        partial.write_text(json.dumps({"id": rows[0]["id"], "algorithm": "x", "completion": rows[0]["gold"]}) + "\n")
        code, _, err = run(capsys, "eval", "--results", partial, "--dataset", dataset)
        assert code == 1
        assert "missing results" in err and rows[1]["id"] in err and rows[-1]["id"] in err


class TestBench:
    def test_table_and_exit(self, tmp_path, capsys):
        code, out, _ = run(capsys, "bench", "--out", tmp_path / "b.jsonl")
        assert code == 0
        rows = [json.loads(l) for l in (tmp_path / "b.jsonl").read_text().splitlines()]
        assert len(rows) == 27 and all(r["ok"] for r in rows)
        assert all(r["update_steps"] == 2 * r["B"] * r["M"] * r["w"] for r in rows)
        assert "2BMw" in out


def test_no_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2

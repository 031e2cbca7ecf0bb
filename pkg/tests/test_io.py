import pytest

from bibs.io import atomic_write_text, dumps_jsonl, read_jsonl, write_jsonl


class TestIo:
    def test_atomic_overwrite(self, tmp_path):
        p = tmp_path / "sub" / "f.txt"
        atomic_write_text(p, "one")
        atomic_write_text(p, "two")
        assert p.read_text() == "two"
        assert [x.name for x in p.parent.iterdir()] == ["f.txt"]

    def test_jsonl_round_trip(self, tmp_path):
        rows = [{"b": 1, "a": [1, 2]}, {"x": None}]
        p = tmp_path / "r.jsonl"
        write_jsonl(p, rows)
        assert list(read_jsonl(p)) == rows
        assert dumps_jsonl(rows).splitlines()[0] == '{"a": [1, 2], "b": 1}'

    def test_bad_line_reports_location(self, tmp_path):
        p = tmp_path / "r.jsonl"
        p.write_text('{"a": 1}\n\n{oops\n')
        with pytest.raises(ValueError, match=":3:"):
            list(read_jsonl(p))

import csv
import io
import json

import pytest

from qoemetrics.analysis import analyze_dataset
from qoemetrics.dataset_io import (
    load_dataset,
    parse_ratings,
    read_report,
    render_report,
    round_sig,
    write_dataset,
    write_report,
)
from qoemetrics.errors import ParseError, ValidationError
from qoemetrics.synthetic import web_qoe_dataset
from qoemetrics.types import RatingScale


def test_two_line_file(write_files):
    path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,4\ns2,c1,2\n")
    ds = load_dataset(path)
    assert ds.counts == {"c1": 2}
    assert ds.scale == RatingScale.discrete(1, 5)


def test_comments_crlf_and_bom(write_files):
    text = "﻿# exported\r\nsubject_id,condition_id,rating\r\n# skip\r\ns1,c1,4\r\n\r\ns2,c2,3\r\n"
    path, _ = write_files(csv_text=text)
    ds = load_dataset(path)
    assert [r.value for r in ds.ratings] == [4.0, 3.0]


def test_parse_error_names_line(write_files):
    path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,4\ns2,c1,abc\n")
    with pytest.raises(ParseError) as exc:
        load_dataset(path)
    assert exc.value.line == 3
    assert "line 3" in str(exc.value)


@pytest.mark.parametrize("text, line", [
    ("subject,condition,rating\ns1,c1,4\n", 1),
    ("subject_id,condition_id,rating\ns1,c1\n", 2),
    ("subject_id,condition_id,rating\ns1,c1,nan\n", 2),
    ("subject_id,condition_id,rating\ns1,c1,inf\n", 2),
])
def test_malformed(text, line):
    with pytest.raises(ParseError) as exc:
        parse_ratings(text)
    assert exc.value.line == line


def test_missing_header():
    with pytest.raises(ParseError):
        parse_ratings("# nothing here\n")


def test_validation_lists_every_violation(write_files):
    path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,9\ns2,c1,3.5\ns2,c1,3\n")
    with pytest.raises(ValidationError) as exc:
        load_dataset(path)
    assert [v.rule for v in exc.value.violations] == ["out-of-range", "non-integer-category", "duplicate-rating"]


def test_metadata(write_files):
    meta = {
        "scale": {"kind": "continuous", "lower": 0, "upper": 6},
        "conditions": [{"id": "c2", "attributes": {"content": "w2", "plt": 1.5}}],
        "statistics": ["mos", "sos", "quantiles"],
        "thresholds": {"gb": 4, "pw": 2, "te": 1},
        "repeated_measures": True,
    }
    path, mpath = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,5.5\ns1,c1,2.25\ns1,c2,1\n",
                              metadata=meta)
    ds = load_dataset(path, mpath)
    assert ds.scale == RatingScale.continuous(0, 6)
    # c2 declared, c1 auto-registered after it
    assert ds.definition.condition_ids == ("c2", "c1")
    assert ds.definition.conditions[0].attributes == (("content", "w2"), ("plt", 1.5))
    assert ds.thresholds == (4.0, 2.0, 1.0)
    assert ds.repeated_measures


def test_bad_metadata(write_files):
    path, mpath = write_files(csv_text="subject_id,condition_id,rating\n", metadata={"scale": {"lower": 1}})
    with pytest.raises(ParseError):
        load_dataset(path, mpath)


def test_web_qoe_file(write_files):
    path, mpath = write_files(web_qoe_dataset())
    ds = load_dataset(path, mpath)
    assert len(ds.counts) == 40 and set(ds.counts.values()) == {72}


def test_load_write_load_fixpoint(write_files, tmp_path):
    path, mpath = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,0.1\ns2,c1,5.123456789012\n",
                              metadata={"scale": "0:6"})
    first = load_dataset(path, mpath)
    write_dataset(first, tmp_path / "again.csv", tmp_path / "again.json")
    second = load_dataset(tmp_path / "again.csv", tmp_path / "again.json")
    assert first == second


def test_round_sig():
    assert round_sig(3.123456789) == 3.12346
    assert round_sig(0.000123456789) == 0.000123457
    assert round_sig(0.0) == 0.0 and round_sig(None) is None


class TestReport:
    @pytest.fixture
    def report(self):
        return analyze_dataset(web_qoe_dataset(subjects=10, pages=3), quantiles=["1/2", "9/10"], thetas=[4],
                               gob_pow_tme=True)

    def test_json_round_trip(self, report, tmp_path):
        path = tmp_path / "r.json"
        write_report(report, path, "json")
        back = read_report(path)
        assert [c["condition"] for c in back["conditions"]] == ["c1", "c2", "c3"]
        for orig, got in zip(report["conditions"], back["conditions"]):
            assert got["mos"] == pytest.approx(orig["mos"], rel=5e-6)
            assert got["sos"] == pytest.approx(orig["sos"], rel=5e-6)
            assert set(got) >= {"quantiles", "acceptability", "gob", "pow", "tme"}
        assert back["study"]["sos_fit"]["a"] == pytest.approx(report["study"]["sos_fit"]["a"], rel=5e-6)
        # re-serializing the parsed report changes nothing
        assert render_report(back, "json") == path.read_text()

    def test_csv(self, report):
        text = render_report(report, "csv")
        lines = [line for line in text.splitlines() if not line.startswith("#")]
        rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
        assert len(rows) == 3
        assert list(rows[0]) == ["condition", "count", "mos", "sos", "standard_error", "q_1/2", "q_9/10",
                                 "acc_4", "gob", "pow", "tme"]
        assert float(rows[0]["mos"]) == pytest.approx(report["conditions"][0]["mos"], rel=5e-6)

    def test_deterministic(self, report):
        assert render_report(report, "json") == render_report(json.loads(render_report(report, "json")), "json")

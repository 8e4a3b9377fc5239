import csv
import io
import json
import random
import subprocess
import sys

import pytest

from qoemetrics.analysis import analyze_dataset, parse_quantile
from qoemetrics.cli import main
from qoemetrics.dataset_io import load_dataset
from qoemetrics.errors import DomainError
from qoemetrics.synthetic import binary_dataset, hypothesis_dataset, random_dataset
from qoemetrics.types import RatingScale

C15 = RatingScale.continuous(1, 5)
C06 = RatingScale.continuous(0, 6)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_quantile():
    assert parse_quantile("90/100") == (90, 100)
    for bad in ("1/1", "half", "0/2"):
        with pytest.raises(DomainError):
            parse_quantile(bad)


class TestAnalyze:
    def test_constant(self, capsys, write_files):
        path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,3\ns2,c1,3\ns3,c2,4\n")
        code, out, _ = run(capsys, "analyze", path)
        assert code == 0
        doc = json.loads(out)
        c1, c2 = doc["conditions"]
        assert c1["mos"] == 3.0 and c1["sos"] == 0.0 and c1["warnings"] == []
        assert c2["mos"] == 4.0 and c2["sos"] is None and c2["warnings"]

    def test_binary_fit(self, capsys, write_files):
        path, mpath = write_files(binary_dataset([3, 7, 10, 0], 10))
        code, out, _ = run(capsys, "analyze", path, "--metadata", mpath)
        doc = json.loads(out)
        assert code == 0
        assert doc["study"]["sos_fit"]["a"] == 1.0
        assert [c["acceptance"] for c in doc["conditions"]] == [0.3, 0.7, 1.0, 0.0]
        assert doc["study"]["sos_fit"]["degenerate_conditions"] == ["c3", "c4"]

    def test_hypothesis_recovery(self, capsys, write_files):
        ds = hypothesis_dataset(0.3, [0.1, 0.3, 0.5, 0.7, 0.9], 100, C15)
        path, mpath = write_files(ds)
        code, out, _ = run(capsys, "analyze", path, "--metadata", mpath)
        assert code == 0
        assert json.loads(out)["study"]["sos_fit"]["a"] == pytest.approx(0.3, abs=1e-9)

    def test_options(self, capsys, write_files):
        path, _ = write_files(csv_text="subject_id,condition_id,rating\n"
                                       + "".join(f"s{v},c1,{v}\n" for v in (1, 2, 3, 4, 5)))
        code, out, _ = run(capsys, "analyze", path, "--quantiles", "1/2", "9/10", "--theta", "4",
                           "--gob-pow-tme", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO("\n".join(
            line for line in out.splitlines() if not line.startswith("#")))))
        (row,) = rows
        assert row["q_1/2"] == "3" and row["q_9/10"] == "5" and row["acc_4"] == "0.4"
        assert (row["gob"], row["pow"], row["tme"]) == ("0.4", "0.4", "0.2")

    def test_explicit_thresholds_are_discretized(self):
        ds = random_dataset(random.Random(0), RatingScale.discrete(1, 5), 2, 5)
        rep = analyze_dataset(ds, thresholds=(3.1, 2.31513, 1.87293))
        assert rep["study"]["thresholds"] == {"gb": 4, "pw": 2, "te": 1}

    def test_no_default_thresholds(self, capsys, write_files):
        path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,3\n")
        code, _, err = run(capsys, "analyze", path, "--scale", "0:6", "--gob-pow-tme")
        assert code == 1 and "threshold" in err

    def test_validation_exit_1(self, capsys, write_files):
        path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,9\n")
        code, _, err = run(capsys, "analyze", path)
        assert code == 1 and "out-of-range" in err

    def test_parse_exit_2(self, capsys, write_files):
        path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,x\n")
        assert run(capsys, "analyze", path)[0] == 2

    def test_missing_file_exit_2(self, capsys, tmp_path):
        assert run(capsys, "analyze", tmp_path / "nope.csv")[0] == 2

    def test_missing_observator_exit_1(self, capsys, write_files):
        path, mpath = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,3\n",
                                  metadata={"observators": ["sum", "sum-of-squares"]})
        code, _, err = run(capsys, "analyze", path, "--metadata", mpath, "--quantiles", "1/2")
        assert code == 1 and "missing-observator" in err

    def test_usage_errors(self, capsys, write_files):
        path, mpath = write_files(csv_text="subject_id,condition_id,rating\n", metadata={})
        with pytest.raises(SystemExit) as exc:
            main(["analyze", str(path), "--bogus"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["analyze", str(path), "--metadata", str(mpath), "--scale", "1:5"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_output_file(self, capsys, write_files, tmp_path):
        path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,3\ns2,c1,4\n")
        out = tmp_path / "report.json"
        assert run(capsys, "analyze", path, "-o", out)[0] == 0
        assert json.loads(out.read_text())["conditions"][0]["mos"] == 3.5


class TestFitSos:
    def test_json(self, capsys, write_files):
        path, mpath = write_files(hypothesis_dataset(0.7, [0.2, 0.5], 100, C15))
        code, out, _ = run(capsys, "fit-sos", path, "--metadata", mpath)
        doc = json.loads(out)
        assert code == 0 and doc["a"] == pytest.approx(0.7, abs=1e-9)
        assert [p["count"] for p in doc["points"]] == [100, 100]

    def test_no_information(self, capsys, write_files):
        path, _ = write_files(csv_text="subject_id,condition_id,rating\ns1,c1,5\ns2,c1,5\n")
        assert run(capsys, "fit-sos", path)[0] == 1


class TestEmodel:
    def test_default_rows(self, capsys):
        code, out, _ = run(capsys, "emodel-table", "--default-rows")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 12
        assert rows[3] == {"mos": "2.00000", "r": "38.68", "pow": "65.349", "gob": "9.139", "tme": "43.340"}
        assert rows[-1]["r"] == "undefined"

    def test_single_red_row(self, capsys):
        code, out, _ = run(capsys, "emodel-table", "--mos", "3.1")
        (row,) = csv.DictReader(io.StringIO(out))
        assert row == {"mos": "3.10000", "r": "60.00", "pow": "17.425", "gob": "50.000", "tme": "6.681"}

    def test_domain_error(self, capsys):
        assert run(capsys, "emodel-table", "--mos", "0.5")[0] == 1

    def test_json(self, capsys):
        code, out, _ = run(capsys, "emodel-table", "--mos", "5", "--format", "json")
        assert json.loads(out) == [{"mos": 5.0, "r": None, "pow": 0.0, "gob": 100.0, "tme": 0.0}]

    def test_convert(self, capsys):
        _, out, _ = run(capsys, "emodel-convert", "--r", "60", "100")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["mos"] for r in rows] == ["3.10000", "4.50000"]
        _, out, _ = run(capsys, "emodel-convert", "--mos", "2.31513")
        assert next(csv.DictReader(io.StringIO(out)))["r"] == "45.00"
        assert run(capsys, "emodel-convert", "--r", "120")[0] == 1

    def test_curve(self, capsys):
        code, out, _ = run(capsys, "curve-data", "--steps", "36")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 36
        row = next(r for r in rows if r["mos"] == "3.10000")
        assert row["neutral_pct"] == "32.575"
        gob = [float(r["gob_pct"]) for r in rows]
        assert gob == sorted(gob)
        assert run(capsys, "curve-data", "--mos-min", "0")[0] == 1


class TestTransform:
    def test_verify(self, capsys, write_files, tmp_path):
        ds = random_dataset(random.Random(4), C06, conditions=6, subjects=20)
        path, mpath = write_files(ds)
        out = tmp_path / "t.csv"
        code, stdout, _ = run(capsys, "transform", path, "--metadata", mpath,
                              "--from", "0:6", "--to", "1:5", "-o", out, "--verify")
        assert code == 0
        doc = json.loads(stdout)
        assert abs(doc["a_original"] - doc["a_transformed"]) <= 1e-9
        moved = load_dataset(out, tmp_path / "t.json")
        assert moved.scale == C15
        assert len(moved.ratings) == len(ds.ratings)

    def test_identity(self, capsys, write_files, tmp_path):
        ds = random_dataset(random.Random(4), C06, conditions=2, subjects=5)
        path, mpath = write_files(ds)
        out = tmp_path / "same.csv"
        assert run(capsys, "transform", path, "--metadata", mpath, "--from", "0:6", "--to", "0:6", "-o", out)[0] == 0
        assert load_dataset(out, tmp_path / "same.json").ratings == ds.ratings

    def test_round_trip(self, capsys, write_files, tmp_path):
        ds = random_dataset(random.Random(9), C15, conditions=3, subjects=7)
        path, mpath = write_files(ds)
        run(capsys, "transform", path, "--metadata", mpath, "--from", "1:5", "--to", "0:100", "-o", tmp_path / "a.csv")
        run(capsys, "transform", tmp_path / "a.csv", "--metadata", tmp_path / "a.json",
            "--from", "0:100", "--to", "1:5", "-o", tmp_path / "b.csv")
        back = load_dataset(tmp_path / "b.csv", tmp_path / "b.json")
        for x, y in zip(ds.ratings, back.ratings):
            assert abs(x.value - y.value) <= 1e-9

    def test_scale_mismatch(self, capsys, write_files, tmp_path):
        path, mpath = write_files(random_dataset(random.Random(1), C06, 1, 2))
        code, _, err = run(capsys, "transform", path, "--metadata", mpath,
                           "--from", "1:5", "--to", "0:100", "-o", tmp_path / "x.csv")
        assert code == 1 and "does not match" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qoemetrics", "emodel-table", "--mos", "3.1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "60.00" in proc.stdout

import json

import pytest

from qoemetrics.dataset_io import write_dataset


@pytest.fixture
def write_files(tmp_path):
    """Write a dataset (or raw CSV text plus optional metadata dict) into tmp_path."""

    def _write(dataset=None, csv_text=None, metadata=None, name="ratings"):
        ratings = tmp_path / f"{name}.csv"
        meta = tmp_path / f"{name}.meta.json"
        if dataset is not None:
            write_dataset(dataset, ratings, meta)
            return ratings, meta
        ratings.write_text(csv_text, encoding="utf-8")
        if metadata is None:
            return ratings, None
        meta.write_text(json.dumps(metadata), encoding="utf-8")
        return ratings, meta

    return _write


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

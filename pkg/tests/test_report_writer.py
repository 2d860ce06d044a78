"""Tests for JSON reports and trace CSV output."""

import json
import os

import numpy as np
import pytest

from src.reports.report_writer import (
    emit_trace_csv,
    list_saved_reports,
    save_json_report,
    to_json,
    trace_to_dataframe,
)


def test_to_json_handles_numeric_types():
    text = to_json({"a": np.int64(3), "b": np.float64(0.5), "c": 1 + 2j, "d": np.arange(2)})
    assert json.loads(text) == {"a": 3, "b": 0.5, "c": [1.0, 2.0], "d": [0, 1]}


def test_to_json_is_deterministic():
    payload = {"command": "sm", "result": 1}
    assert to_json(payload) == to_json(dict(payload))


def test_save_json_report(tmp_path):
    path = save_json_report("total-sm", {"result": 3}, str(tmp_path))
    name = os.path.basename(path)
    assert name.startswith("total_sm_report_")
    assert name.endswith(".json")
    with open(path, encoding="utf-8") as fh:
        assert json.load(fh) == {"result": 3}
    assert list_saved_reports(str(tmp_path)) == [name]
    assert list_saved_reports(str(tmp_path / "missing")) == []


def test_trace_csv_text():
    rows = [(0.0, 1.0, 0.0), (0.1, 0.1 + 0.2, -1e-17)]
    text = emit_trace_csv(rows)
    lines = text.split("\n")
    assert lines[0] == "theta,re,im"
    assert lines[1] == "0,1,0"
    assert [float(v) for v in lines[2].split(",")] == [0.1, 0.1 + 0.2, -1e-17]
    assert text.endswith("\n")


def test_trace_csv_file(tmp_path):
    target = tmp_path / "out" / "trace.csv"
    path = emit_trace_csv([(0.0, 2.0, 0.0)], str(target))
    assert path == str(target)
    assert target.read_text(encoding="utf-8").startswith("theta,re,im\n")


def test_trace_csv_rejects_empty_traces():
    with pytest.raises(ValueError):
        emit_trace_csv([])


def test_trace_dataframe_columns():
    df = trace_to_dataframe([(0.0, 1.0, 2.0)])
    assert list(df.columns) == ["theta", "re", "im"]

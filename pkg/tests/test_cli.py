from __future__ import annotations

import json
import subprocess
import sys

import pytest

from slalomkit.cli import KINDS, Scenario, generate_instance, main, run_scenario

FIGURE = {"kind": "roundtrip", "payload": {"deltas": [4, 2, 3, 5, 1, 3], "word": "110001001101110010"}}
BLOCKED = {"kind": "diagonalize", "payload": {"a": "1111", "aprime": [0], "pieces": [["0000", "1000"]]}}


def _write(tmp_path, records, name="in.jsonl"):
    path = tmp_path / name
    path.write_text("".join((r if isinstance(r, str) else json.dumps(r)) + "\n" for r in records))
    return str(path)


def _run(tmp_path, records, *flags):
    out = tmp_path / "out.jsonl"
    code = main(["run", _write(tmp_path, records), "--out", str(out), *flags])
    lines = out.read_text().splitlines()
    return code, [json.loads(ln) for ln in lines] if "--format" not in flags else lines


def test_figure_roundtrip(tmp_path):
    code, reports = _run(tmp_path, [FIGURE])
    assert code == 0
    assert reports[0]["result"]["encoded"] == [12, 1, 1, 23, 0, 2]
    assert reports[0]["result"]["word_roundtrip"] is True


def test_blocked_diagonalization_exits_1(tmp_path):
    code, reports = _run(tmp_path, [BLOCKED])
    assert code == 1
    blocked = reports[0]["result"]["blocked"]
    assert blocked["n"] == 0 and blocked["position"] == 0


def test_empty_file_exits_2(tmp_path):
    assert main(["run", _write(tmp_path, [])]) == 2


@pytest.mark.parametrize(
    "record",
    [
        "not json",
        {"kind": "roundtrip", "payload": {"deltas": [0], "word": "0"}},
        {"kind": "roundtrip", "payload": {"deltas": [1], "word": "2"}},
        {"kind": "capture", "payload": {"cells": []}},
        {"kind": "teleport", "payload": {}},
        {"kind": "roundtrip"},
        [1, 2],
    ],
)
def test_schema_violations_exit_2(tmp_path, record):
    code, reports = _run(tmp_path, [FIGURE, record])
    assert code == 2
    assert reports[0]["ok"] is True and reports[1]["ok"] is False


def test_precondition_failure_is_a_verdict(tmp_path):
    bad = {"kind": "build-slalom", "payload": {"deltas": [1] * 6, "pieces": [["010000"]], "witness": [1]}}
    code, reports = _run(tmp_path, [bad])
    assert code == 1
    assert reports[0]["result"]["index"] == 2


def test_misaligned_payload_is_reported(tmp_path):
    bad = {"kind": "roundtrip", "payload": {"deltas": [2], "word": "0"}}
    code, reports = _run(tmp_path, [bad])
    assert code == 1 and "AlignmentError" in reports[0]["error"]


def test_horizon_limit(tmp_path):
    code, _ = _run(tmp_path, [FIGURE], "--horizon", "10")
    assert code == 2
    code, _ = _run(tmp_path, [FIGURE], "--horizon", "18")
    assert code == 0


def test_seed_only_lines_are_generated(tmp_path):
    code, reports = _run(tmp_path, [{"kind": "build-slalom", "seed": 3}, {"kind": "capture"}], "--seed", "5")
    assert code == 0
    assert all(r["ok"] for r in reports)


def test_reports_keep_input_order(tmp_path):
    records = [generate_instance(k, 1, 6).to_record() for k in KINDS] * 2
    code, reports = _run(tmp_path, records, "--jobs", "4")
    assert code == 0
    assert [r["kind"] for r in reports] == list(KINDS) * 2


def test_text_format(tmp_path):
    code, lines = _run(tmp_path, [FIGURE, BLOCKED], "--format", "text")
    assert code == 1
    assert "PASS" in lines[0] and "FAIL" in lines[1]


def test_gen_is_deterministic(tmp_path, capsys):
    assert main(["gen", "catalog", "--seed", "7", "--size", "5"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "catalog", "--seed", "7", "--size", "5"]) == 0
    assert capsys.readouterr().out == first
    assert main(["gen", "catalog", "--seed", "8", "--size", "5"]) == 0
    assert capsys.readouterr().out != first


def test_gen_unknown_kind():
    assert main(["gen", "teleport"]) == 2


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("size", [0, 1, 8])
def test_generated_instances_are_valid(kind, size):
    s = generate_instance(kind, 0, size)
    s.validate()
    report = run_scenario(s)
    assert not report.schema_error
    assert report.ok, report.error or report.result


def test_build_slalom_generator_meets_preconditions():
    report = run_scenario(generate_instance("build-slalom", 0, 8))
    assert report.ok and "hypothesis_failure" not in report.result


def test_reports_are_byte_identical(tmp_path):
    records = [{"kind": k, "seed": 11} for k in KINDS]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    path = _write(tmp_path, records)
    main(["run", path, "--out", str(out1)])
    main(["run", path, "--out", str(out2), "--jobs", "3"])
    assert out1.read_bytes() == out2.read_bytes()


def test_suite(capsys):
    assert main(["suite", "--count", "2", "--size", "6", "--format", "text"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2 * len(KINDS) and all("PASS" in ln for ln in lines)


def test_certificates_revalidate():
    from slalomkit.filterlab import FilterCertificate, check_certificate

    report = run_scenario(generate_instance("transport", 2, 8))
    for key in ("prepended", "unprepended"):
        assert check_certificate(FilterCertificate.from_json(report.result[key]))


def test_scenario_record_roundtrip():
    s = Scenario("roundtrip", FIGURE["payload"], seed=4, horizon=20)
    assert s.to_record() == {**FIGURE, "seed": 4, "horizon": 20}


def test_module_entry_point(tmp_path):
    path = _write(tmp_path, [FIGURE])
    proc = subprocess.run(
        [sys.executable, "-m", "slalomkit", "run", path, "--format", "text"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "PASS" in proc.stdout

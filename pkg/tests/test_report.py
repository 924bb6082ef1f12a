"""Report records, suites, serialization, CLI exit codes."""

import json

import pytest

from jetcocycles.cli import main
from jetcocycles.report import (
    CheckRecord,
    any_fail,
    emit_report,
    render_json,
    render_text,
    run_suite,
)


def test_record_invariants():
    with pytest.raises(ValueError):
        CheckRecord("x", "d", "1", "FAIL", "", "ref")
    with pytest.raises(ValueError):
        CheckRecord("x", "d", "1", "PASS", "", "")
    r = CheckRecord("x", "d", "symbolic", "PASS", "", "derived")
    assert list(r.as_dict().keys()) == [
        "check_id", "description", "lambda", "status", "residual", "paper_ref"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("everything")


def test_table3_suite_contents():
    records = run_suite("table3")
    assert len(records) == 9
    by_id = {r.check_id: r for r in records}
    # the one engine-vs-classical-table disagreement is reported as FAIL
    assert by_id["table3.det12"].status == "FAIL"
    assert "coboundary" in by_id["table3.det12"].residual
    assert sum(1 for r in records if r.status == "PASS") == 8
    assert any_fail(records)


def test_theorem1_suite_passes():
    records = run_suite("theorem1")
    assert not any_fail(records)
    ids = [r.check_id for r in records]
    assert "theorem1.c7.ratio" in ids
    assert "theorem1.cbar2.omega" in ids


def test_witt_and_nontrivial_suites():
    witt = run_suite("witt")
    assert not any_fail(witt)
    assert sum(1 for r in witt if r.check_id.startswith("witt.kn.m")) == 10
    nt = run_suite("nontrivial")
    by_id = {r.check_id: r.status for r in nt}
    assert by_id["nontrivial.kn"] == "NONTRIVIAL"
    assert by_id["nontrivial.c5"] == "NONTRIVIAL"
    assert all(v == "INCONCLUSIVE" for k, v in by_id.items()
               if k.startswith("nontrivial.coboundary"))
    assert not any_fail(nt)


def test_json_roundtrip_and_determinism(tmp_path):
    records = run_suite("table3")
    path = tmp_path / "report.json"
    text = emit_report(records, "json", str(path))
    again = emit_report(run_suite("table3"), "json")
    assert text == again                      # byte-identical
    loaded = json.loads(path.read_text())
    assert len(loaded) == 9
    for rec in loaded:
        assert list(rec.keys()) == [
            "check_id", "description", "lambda", "status", "residual", "paper_ref"]
        assert rec["status"] != "FAIL" or rec["residual"]
        assert rec["paper_ref"]


def test_text_report_carries_preamble():
    records = run_suite("table3")
    text = emit_report(records, "text")
    assert "conventions" in text
    assert "R = T' + T^2/2" in text
    with pytest.raises(ValueError):
        emit_report(records, "xml")


def test_empty_records_json():
    assert render_json([]).strip() == "[]"
    assert render_text([], preamble=False).startswith("-- 0 PASS")


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["table3"]) == 1              # honest table3 disagreement
    capsys.readouterr()
    assert main(["verify", "--suite", "witt"]) == 0
    capsys.readouterr()
    assert main(["eval", "--cocycle", "cbar0", "--m", "1", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "cbar0(L_1, L_2)" in out
    assert main(["globalize", "--symbol", "f[", "--weight", "1"]) == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--cocycle", "c9", "--m", "0", "--n", "0"])
    assert exc.value.code == 2


def test_cli_globalize(capsys):
    code = main(["globalize", "--symbol", "det(0,3)", "--weight", "1",
                 "--lambda", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "canonical representative" in out
    assert "transform-law PASS, cocycle PASS" in out


def test_cli_verify_writes_json(tmp_path, capsys):
    path = tmp_path / "out.json"
    code = main(["verify", "--suite", "nontrivial", "--json", str(path)])
    capsys.readouterr()
    assert code == 0
    loaded = json.loads(path.read_text())
    assert {r["status"] for r in loaded} <= {"NONTRIVIAL", "INCONCLUSIVE", "PASS"}

"""Command line behavior: exit codes, determinism, schemas, corpus sweeps."""
import json

import pytest

import filtra.checkers as checkers
from filtra.cli import main
from filtra.config import ConfigError, parse_config, validate_report
from filtra.filtration import (adic_filtration, explicit_filtration,
                               reduction_system)
from filtra.ideals import LocalRing
from filtra.report import _strict_warnings

from conftest import CORPUS_DIR

CUSP = CORPUS_DIR / "cusp.json"


def base_config(**over):
    cfg = {
        "name": "job",
        "ring": {"variables": ["x", "y"], "relations": ["y^2 - x^3"]},
        "filtration": {"kind": "adic", "stages": {"1": ["x", "y"]}},
        "reduction": {"generators": ["x"]},
        "horizon": 8,
    }
    cfg.update(over)
    return cfg


def write_config(tmp_path, cfg, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def read_report(path):
    report = json.loads(path.read_text())
    validate_report(report)
    return report


# -- verify ----------------------------------------------------------------

def test_verify_ok(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", str(CUSP), "--report", str(out), "--quiet"])
    assert code == 0
    report = read_report(out)
    assert report["verdict"] == "verified"
    assert report["exit_code"] == 0
    assert report["error"] is None
    assert report["ring"]["cm_certificate"] is True
    assert report["numbers"]["boundary"]["gap"] == 0


def test_verify_byte_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", str(CUSP), "--report", str(a), "--quiet"])
    capsys.readouterr()
    main(["verify", str(CUSP), "--report", str(b)])
    stdout = capsys.readouterr().out
    assert a.read_bytes() == b.read_bytes()
    assert stdout == a.read_text()
    assert "\\u" not in stdout  # ascii-safe output stays readable


def test_verify_horizon_override(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", str(CUSP), "--horizon", "8",
                 "--report", str(out), "--quiet"])
    assert code == 0
    assert read_report(out)["config"]["horizon"] == 8


def test_verify_missing_file(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "absent.json"), "--quiet"]) == 1
    assert "error" in capsys.readouterr().err


def test_verify_rejects_schema_violation(tmp_path, capsys):
    path = write_config(tmp_path, {"name": "bad"})
    assert main(["verify", path, "--quiet"]) == 1


def test_verify_bad_polynomial(tmp_path):
    cfg = base_config(ring={"variables": ["x", "y"], "relations": ["y^2 - $"]})
    out = tmp_path / "report.json"
    code = main(["verify", write_config(tmp_path, cfg),
                 "--report", str(out), "--quiet"])
    assert code == 1
    report = read_report(out)
    assert report["verdict"] == "invalid-input"
    assert report["error"]["type"] == "PolySyntaxError"


def test_verify_not_admissible(tmp_path):
    cfg = base_config(
        ring={"variables": ["x", "y"], "relations": []},
        filtration={"kind": "adic", "stages": {"1": ["x"]}},
        reduction={"generators": ["x", "y"]})
    out = tmp_path / "report.json"
    code = main(["verify", write_config(tmp_path, cfg),
                 "--report", str(out), "--quiet"])
    assert code == 1
    report = read_report(out)
    assert report["error"]["type"] == "NotAdmissible"
    assert report["error"]["witness"]["check"] == "m_primary"


def forced_fail(name):
    return {"name": name, "applicable": True, "status": "fail",
            "details": {"forced": True}}


def test_violation_exit_code(tmp_path, monkeypatch):
    monkeypatch.setattr(checkers, "check_master_inequality",
                        lambda data: forced_fail("master_inequality"))
    out = tmp_path / "report.json"
    code = main(["verify", str(CUSP), "--report", str(out), "--quiet"])
    assert code == 2
    report = read_report(out)
    assert report["verdict"] == "violation"
    assert report["exit_code"] == 2


def test_unstable_fit_is_invalid_input(tmp_path, monkeypatch):
    monkeypatch.setattr(checkers, "check_fit_stability",
                        lambda data: forced_fail("fit_stability"))
    out = tmp_path / "report.json"
    code = main(["verify", str(CUSP), "--report", str(out), "--quiet"])
    assert code == 1
    report = read_report(out)
    assert report["verdict"] == "invalid-input"
    assert report["error"]["type"] == "UnstableFit"


def test_markdown_rendering(tmp_path):
    md = tmp_path / "report.md"
    main(["verify", str(CUSP), "--markdown", str(md), "--quiet"])
    text = md.read_text()
    assert "cusp" in text
    assert "verified" in text
    assert "master_inequality" in text
    assert "—" not in text


# -- corpus ----------------------------------------------------------------

def test_corpus_mixed_verdicts(tmp_path, capsys):
    cdir = tmp_path / "corpus"
    cdir.mkdir()
    (cdir / "good.json").write_text(CUSP.read_text())
    (cdir / "broken.json").write_text(json.dumps({"name": "broken"}))
    (cdir / "ignored.txt").write_text("not a config")
    summary_path = tmp_path / "summary.json"
    reports_dir = tmp_path / "reports"
    code = main(["corpus", str(cdir), "--summary", str(summary_path),
                 "--reports", str(reports_dir), "--quiet"])
    assert code == 1  # invalid input present, no violation
    summary = json.loads(summary_path.read_text())
    assert summary["counts"] == {"verified": 1, "violation": 0,
                                 "invalid-input": 1}
    files = [e["file"] for e in summary["instances"]]
    assert files == sorted(files) == ["broken.json", "good.json"]
    assert (reports_dir / "good.json").exists()
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2


def test_corpus_violation_wins(tmp_path, monkeypatch):
    monkeypatch.setattr(checkers, "check_master_inequality",
                        lambda data: forced_fail("master_inequality"))
    cdir = tmp_path / "corpus"
    cdir.mkdir()
    (cdir / "good.json").write_text(CUSP.read_text())
    (cdir / "broken.json").write_text(json.dumps({"name": "broken"}))
    assert main(["corpus", str(cdir), "--quiet"]) == 2


def test_corpus_empty_directory(tmp_path, capsys):
    assert main(["corpus", str(tmp_path), "--quiet"]) == 1
    assert "error" in capsys.readouterr().err


def test_corpus_parallel_byte_identity(tmp_path):
    cdir = tmp_path / "corpus"
    cdir.mkdir()
    for name in ("cusp.json", "depth_zero.json", "regular_d1.json"):
        (cdir / name).write_text((CORPUS_DIR / name).read_text())
    seq_sum, par_sum = tmp_path / "seq.json", tmp_path / "par.json"
    seq_dir, par_dir = tmp_path / "seq", tmp_path / "par"
    assert main(["corpus", str(cdir), "--summary", str(seq_sum),
                 "--reports", str(seq_dir), "--quiet"]) == 0
    assert main(["corpus", str(cdir), "--jobs", "4", "--summary", str(par_sum),
                 "--reports", str(par_dir), "--quiet"]) == 0
    assert seq_sum.read_bytes() == par_sum.read_bytes()
    for name in ("cusp.json", "depth_zero.json", "regular_d1.json"):
        assert (seq_dir / name).read_bytes() == (par_dir / name).read_bytes()


# -- schema subcommand and config validation -------------------------------

def test_schema_subcommand(capsys):
    assert main(["schema", "config"]) == 0
    config_schema = json.loads(capsys.readouterr().out)
    assert config_schema["$schema"].endswith("2020-12/schema")
    assert main(["schema", "report"]) == 0
    report_schema = json.loads(capsys.readouterr().out)
    assert "verdict" in report_schema["required"]


def test_config_semantic_errors():
    with pytest.raises(ConfigError):
        parse_config(base_config(checks=["not_a_check"]))
    with pytest.raises(ConfigError):
        parse_config(base_config(filtration={
            "kind": "explicit",
            "stages": {"1": ["x", "y"], "3": ["x^3"]}}))
    with pytest.raises(ConfigError):
        parse_config(base_config(filtration={
            "kind": "adic",
            "stages": {"1": ["x", "y"], "2": ["x^2"]}}))
    with pytest.raises(ConfigError):
        parse_config(base_config(horizon=3))


def test_config_defaults_echo():
    cfg = parse_config(base_config())
    echo = cfg.canonical()
    assert echo["horizon"] == 8
    assert echo["power_bound"] == 2
    assert echo["checks"] == "all"
    assert echo["strict"] is False
    assert echo["reduction"] == {"generators": ["x"]}


def test_config_search_echo():
    cfg = parse_config(base_config(reduction={"search": {"seed": 3}}))
    echo = cfg.canonical()
    assert echo["reduction"]["search"]["seed"] == 3
    assert echo["reduction"]["search"]["attempts"] == 60


# -- strict mode -----------------------------------------------------------

def test_strict_warning_unit():
    ring = LocalRing(("x", "y"))
    filt = explicit_filtration(ring, {1: ["x", "y"]})
    narrow = reduction_system(ring, ["x^2", "y^2"])
    warnings = _strict_warnings(filt, narrow, 8)
    assert len(warnings) == 1 and "never becomes exact" in warnings[0]
    wide = reduction_system(ring, ["x", "y"])
    assert _strict_warnings(filt, wide, 8) == []
    assert _strict_warnings(adic_filtration(ring, ["x", "y"]), narrow, 8) == []


def test_strict_run_clean(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", str(CORPUS_DIR / "sally_rr_equality.json"),
                 "--report", str(out), "--quiet"])
    assert code == 0
    report = read_report(out)
    assert report["config"]["strict"] is True
    assert report["strict_warnings"] == []

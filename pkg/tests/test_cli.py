import json

import pytest

from repmoduli.cli import (
    UsageError, VerificationConfig, classify_q, main, parse_config, run,
)


def test_classify_q():
    assert classify_q("psl2", 4) == "psl2_even"
    assert classify_q("psl2", 32) == "psl2_even"
    assert classify_q("psl2", 11) == "psl2_odd"
    assert classify_q("psl2", 27) == "psl2_odd"
    assert classify_q("sz", 8) == "sz"
    assert classify_q("dihedral", 9) == "dihedral"
    for fam, q in [("psl2", 6), ("psl2", 7), ("psl2", 2), ("sz", 16),
                   ("sz", 4), ("dihedral", 8), ("cyclic", 0)]:
        with pytest.raises(UsageError):
            classify_q(fam, q)


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as e:
        parse_config(["--family", "psl2", "--q", "6"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        parse_config(["--family", "psl2", "--q", "4", "--checks", "bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        parse_config(["--family", "psl2", "--q", "4", "--tol", "unitary=-1"])
    assert e.value.code == 2


def test_run_psl2_4_all_checks_passes():
    cfg = parse_config(["--family", "psl2", "--q", "4"])
    report = run(cfg)
    assert report.ok
    names = [r.name for r in report.records]
    assert any(n.startswith("tables/") for n in names)
    assert any(n.startswith("numerics/") for n in names)
    assert names == sorted(names)


def test_sz_numerics_skip_recorded():
    cfg = parse_config(["--family", "sz", "--q", "8",
                        "--checks", "tables,fusion,moduli-dim,numerics"])
    report = run(cfg)
    assert report.ok
    skip = [r for r in report.records if r.name == "numerics/sz-q8"]
    assert skip and "class-data model" in skip[0].computed


def test_report_schema_and_determinism(tmp_path):
    argv = ["--family", "psl2", "--q", "4", "--checks", "tables,moduli-dim",
            "--seed", "7"]
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    r1 = json.loads(out1.read_text())
    r2 = json.loads(out2.read_text())
    for r in (r1, r2):
        assert set(r["header"]) >= {"version", "seed", "timestamp"}
        assert r["header"]["seed"] == 7
        for rec in r["records"]:
            assert set(rec) == {"name", "anchor", "inputs", "expected",
                                "computed", "pass", "millis"}
    r1["header"].pop("timestamp")
    r2["header"].pop("timestamp")
    # millis can differ between runs; record everything else
    for r in (r1, r2):
        for rec in r["records"]:
            rec.pop("millis")
    assert r1 == r2


def test_failing_tolerance_gives_exit_1(capsys):
    rc = main(["--family", "psl2", "--q", "4", "--checks", "numerics",
               "--tol", "character=1e-30", "--format", "text"])
    assert rc == 1
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_text_format_one_line_per_record(capsys):
    rc = main(["--family", "cyclic", "--q", "5,6", "--checks",
               "tables,centralizers", "--format", "text"])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[-1] == "OVERALL PASS"
    assert all(line.startswith(("PASS", "FAIL", "repmoduli")) for line in out[:-1])


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("REPMODULI_FAMILY", "dihedral")
    monkeypatch.setenv("REPMODULI_Q", "5")
    monkeypatch.setenv("REPMODULI_CHECKS", "tables")
    monkeypatch.setenv("REPMODULI_SEED", "42")
    cfg = parse_config([])
    assert cfg.family == "dihedral" and cfg.qs == [5]
    assert cfg.checks == ("tables",) and cfg.seed == 42


def test_jobs_parallel_matches_serial():
    argv = ["--family", "psl2", "--q", "4,8", "--checks",
            "tables,centralizers,moduli-dim"]
    serial = run(parse_config(argv + ["--jobs", "1"]))
    parallel = run(parse_config(argv + ["--jobs", "4"]))
    key = lambda rep: [(r.name, r.expected, r.computed, r.passed)
                       for r in rep.records]
    assert key(serial) == key(parallel)

import json
import subprocess
import sys

import pytest

from twdeg import checks, cli
from twdeg.checks import RunConfig


def run_cli(args):
    return cli.main(args)


def test_table1_q7_exit_zero(capsys):
    rc = run_cli(["table1", "--q", "7", "--m", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS  table1.row2.q7.m2" in out
    assert "expected=441" in out


def test_json_report_schema(tmp_path):
    out = tmp_path / "r.json"
    rc = run_cli(["table2", "--q", "7", "--m", "2", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert set(data) == {"version", "config", "results"}
    assert data["config"]["q"] == [7]
    rec = data["results"][0]
    assert {"check_id", "status", "expected", "actual", "runtime_ms"} <= set(rec)
    # certificate values serialized as decimal strings
    assert isinstance(rec["witness"]["r"]["value"], str)


def test_csv_format(tmp_path):
    out = tmp_path / "r.csv"
    rc = run_cli(["table1", "--q", "4", "--m", "2", "--out", str(out), "--format", "csv"])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "check_id,status,expected,actual,runtime_ms"
    assert len(lines) > 1


def test_results_sorted_by_check_id(tmp_path):
    out = tmp_path / "r.json"
    run_cli(["table1", "--q", "7", "8", "--out", str(out)])
    ids = [r["check_id"] for r in json.loads(out.read_text())["results"]]
    assert ids == sorted(ids)


def test_q5_aliased(tmp_path):
    out = tmp_path / "r.json"
    rc = run_cli(["table1", "--q", "5", "--m", "2", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["config"]["q"] == [4]
    assert any("aliased" in n for n in data["config"]["notes"])


def test_bad_q_rejected():
    with pytest.raises(ValueError):
        run_cli(["table1", "--q", "6"])
    with pytest.raises(ValueError):
        run_cli(["table1", "--q", "3"])


def test_unknown_lemma():
    with pytest.raises(checks.UnknownLemmaError):
        run_cli(["lemma", "9.99"])


def test_census_d_filter(capsys):
    rc = run_cli(["lemma", "dickson-census", "--q", "11", "--d", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "dickson-census.q11.d3" in out
    assert "dickson-census.q11.d5" not in out


def test_workers_match_serial(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run_cli(["table1", "--q", "7", "--out", str(a)])
    run_cli(["table1", "--q", "7", "--workers", "2", "--out", str(b)])
    ra = [(r["check_id"], r["status"], r["expected"], r["actual"])
          for r in json.loads(a.read_text())["results"]]
    rb = [(r["check_id"], r["status"], r["expected"], r["actual"])
          for r in json.loads(b.read_text())["results"]]
    assert ra == rb


def test_workers_env(monkeypatch):
    monkeypatch.setenv("TWDEG_WORKERS", "3")
    cfg = cli.config_from_args(cli.build_parser().parse_args(["table1"]))
    assert cfg.workers == 3


def test_skipped_long_exit_zero(capsys):
    # q = 29 table4 rows are gated without --long
    rc = run_cli(["table4", "--q", "29"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "SKIP" in out and "skipped" in out


def test_report_aggregates_and_fails(tmp_path, capsys):
    good = tmp_path / "good.json"
    run_cli(["table2", "--q", "7", "--m", "2", "--out", str(good)])
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "version": "0.1.0", "config": {},
        "results": [{"check_id": "synthetic.fail", "status": "fail",
                     "expected": "1", "actual": "2", "runtime_ms": 0.1}],
    }))
    rc = run_cli(["report", "--in", str(good), str(bad)])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL  synthetic.fail" in out
    rc2 = run_cli(["report", "--in", str(good)])
    assert rc2 == 0


def test_report_replay(tmp_path, capsys):
    out = tmp_path / "r.json"
    run_cli(["table2", "--q", "7", "--m", "2", "3", "--out", str(out)])
    capsys.readouterr()
    rc = run_cli(["report", "--in", str(out), "--replay"])
    text = capsys.readouterr().out
    assert rc == 0
    assert "replay.table2.row5.q7.m2" in text


def test_cache_reused(tmp_path, capsys):
    cache = tmp_path / "wit.json"
    rc1 = run_cli(["lemma", "3.5", "--q", "7", "--cache", str(cache)])
    assert rc1 == 0
    records = json.loads(cache.read_text())
    assert records and records[0]["lemma"] == "3.5a"
    rc2 = run_cli(["lemma", "3.5", "--q", "7", "--cache", str(cache)])
    assert rc2 == 0


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "twdeg.cli", "lemma", "3.3", "--q", "7"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "lemma3.3.q7" in proc.stdout


def test_normalize_q_list():
    notes = []
    assert checks.normalize_q_list([5, 7], notes) == [4, 7]
    assert notes
    assert checks.normalize_q_list([4, 5], []) == [4]
    with pytest.raises(ValueError):
        checks.normalize_q_list([12], [])


def test_table4_default_q():
    cfg = RunConfig()
    assert checks.table4_q_list(cfg) == [7, 11, 19, 23]
    cfg_long = RunConfig(long_running=True)
    assert checks.table4_q_list(cfg_long) == [7, 11, 19, 23, 29, 59]
    cfg_explicit = RunConfig(q_list=[7, 8, 11], q_explicit=True)
    assert checks.table4_q_list(cfg_explicit) == [7, 11]


def test_census_rule_matches_frozen_truths():
    for (q, d, expected) in [(11, 3, 2), (11, 5, 1), (13, 6, 1), (13, 7, 1),
                             (19, 3, 1), (19, 5, 2)]:
        assert checks.census_rule(q, d) == expected


def test_lemma_csv_output(tmp_path):
    out = tmp_path / "lemma.csv"
    rc = run_cli(["lemma", "3.3", "--q", "7", "8", "--out", str(out), "--format", "csv"])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("check_id,")
    assert any("lemma3.3.q7" in ln for ln in lines)


def test_runs_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli(["table4", "--q", "7", "--out", str(a)])
    run_cli(["table4", "--q", "7", "--out", str(b)])
    da = json.loads(a.read_text())["results"]
    db = json.loads(b.read_text())["results"]
    strip = lambda rs: [{k: v for k, v in r.items() if k != "runtime_ms"} for r in rs]
    assert strip(da) == strip(db)

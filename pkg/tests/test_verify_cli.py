import csv
import io
import json

import pytest

from ffprim import cli, verify
from ffprim.zarith import odd_prime_powers


def run(tmp_path, *argv):
    return cli.main(["--out-dir", str(tmp_path), *argv])


def records(tmp_path, command):
    return verify.ReportLog.read(tmp_path / "reports" / f"{command}.jsonl")


def test_check_exit_codes(tmp_path, capsys):
    assert run(tmp_path, "check", "--q", "5", "--n", "2", "--beta", "2") == 0
    assert run(tmp_path, "check", "--q", "5", "--n", "2", "--beta", "1") == 2
    assert run(tmp_path, "check", "--q", "7", "--n", "3") == 0
    out = capsys.readouterr().out
    assert "odd-pair" in out and "genuine-exception" in out
    assert run(tmp_path, "check", "--q", "6", "--n", "2") == 1
    assert run(tmp_path, "check", "--q", "9", "--n", "2", "--beta=-i") == 0
    assert run(tmp_path, "check", "--q", "9", "--n", "2", "--beta=i+1") == 2


def test_check_records_roundtrip(tmp_path):
    run(tmp_path, "check", "--q", "61", "--n", "3")
    (rec,) = records(tmp_path, "check")
    assert rec["schema_version"] == verify.SCHEMA_VERSION
    assert rec["command"] == "check" and rec["inputs"] == {"q": 61, "n": 3, "beta": None}
    assert rec["verdict"] == "proven-analytic"
    assert rec["report"]["reports"][0]["verdict"] == "holds"
    assert isinstance(rec["wall_time"], float) and rec["library_version"]


def test_records_deterministic(tmp_path):
    for _ in range(2):
        run(tmp_path, "check", "--q", "13", "--n", "3")
        run(tmp_path, "verify", "--q", "31", "--n", "2")
    for cmd in ("check", "verify"):
        a, b = records(tmp_path, cmd)
        assert verify.strip_timing(a) == verify.strip_timing(b)


def test_no_report_flag(tmp_path):
    cli.main(["--out-dir", str(tmp_path), "--no-report", "check", "--q", "7", "--n", "3"])
    assert not (tmp_path / "reports").exists()


def test_parse_beta():
    assert cli.parse_beta(9, "-i") == 6
    assert cli.parse_beta(9, "1") == 1
    assert cli.parse_beta(7, "-1") == 6
    assert cli.parse_beta(7, "10") == 3
    with pytest.raises(ValueError):
        cli.parse_beta(9, "j")


def test_verify_command(tmp_path, capsys):
    assert run(tmp_path, "verify", "--q", "31", "--n", "2") == 2
    rec = records(tmp_path, "verify")[0]["report"]
    assert len(rec["trace_set"]) == 28 and rec["missing"] == ["11", "20"]
    assert run(tmp_path, "verify", "--q", "9", "--n", "2") == 2
    assert records(tmp_path, "verify")[1]["report"]["trace_set"] == ["1", "-1", "i", "-i"]
    assert run(tmp_path, "verify", "--q", "37", "--n", "3") == 0
    assert run(tmp_path, "verify", "--q", "17", "--n", "2") == 0


def test_sweep_command(tmp_path):
    assert run(tmp_path, "sweep", "--n", "3", "--qmax", "200") == 0
    data = json.loads((tmp_path / "tables" / "sweep_n3_q3-200_all.json").read_text())
    assert data["survivors"] == {"nonzero": [5, 9, 13, 25], "zero": [5, 9, 13, 25, 37, 49, 121]}
    rows = list(csv.DictReader(io.StringIO((tmp_path / "tables" / "sweep_n3_q3-200_all.csv").read_text())))
    assert len(rows) == len(odd_prime_powers(3, 200))
    assert [int(r["q"]) for r in rows] == odd_prime_powers(3, 200)


def test_sweep_n7_empty():
    res = verify.sweep(7, 200, "all", threads=2)
    assert res.survivor_list == []
    assert any(r["status"] == "odd-pair" for r in res.rows)
    assert sorted(r["q"] for r in res.rows) == [r["q"] for r in res.rows]


def test_sweep_rejects():
    with pytest.raises(ValueError):
        verify.sweep(4, 100)
    with pytest.raises(ValueError):
        verify.sweep(2, 100, "zero")


def test_sweep_deterministic_across_threads():
    a = verify.sweep(2, 3000, threads=1)
    b = verify.sweep(2, 3000, threads=4)
    assert a.rows == b.rows and a.survivors == b.survivors


def test_thread_env(monkeypatch):
    monkeypatch.setenv("FFPRIM_THREADS", "3")
    assert verify.thread_count() == 3
    monkeypatch.setenv("FFPRIM_THREADS", "0")
    with pytest.raises(ValueError):
        verify.thread_count()
    monkeypatch.setenv("FFPRIM_THREADS", "many")
    with pytest.raises(ValueError):
        verify.thread_count()
    monkeypatch.delenv("FFPRIM_THREADS")
    assert verify.thread_count() >= 1


def test_tables_1_cli(tmp_path, capsys):
    assert run(tmp_path, "tables", "--reproduce", "1") == 0
    text = (tmp_path / "tables" / "table1.csv").read_text()
    assert text.splitlines()[0] == "n,q,status"
    assert len(text.splitlines()) == 109
    assert "matches the expected table exactly" in capsys.readouterr().out


def test_diff_reports_mismatch():
    cols = ["n", "q", "status"]
    expected = [{"n": "2", "q": "3", "status": "x"}, {"n": "2", "q": "5", "status": "x"}]
    computed = [{"n": 2, "q": 3, "status": "x"}, {"n": 2, "q": 7, "status": "x"}]
    assert verify._diff(expected, computed, cols) == ["- 2,5,x", "+ 2,7,x"]


def test_embedded_data_files():
    t1 = verify._data_rows("table1.csv")
    t2 = verify._data_rows("table2.csv")
    assert len(t1) == 108 and sum(1 for r in t1 if r["n"] == "3") == 7
    assert [int(r["q"]) for r in t2] == [3, 5, 7, 9, 11, 13, 31]
    assert [len(r["traces"].split(";")) for r in t2] == [1, 2, 4, 4, 8, 10, 28]

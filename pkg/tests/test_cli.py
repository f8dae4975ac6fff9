import json
import subprocess
import sys

import pytest

from scatterforge import certificate as cert_mod
from scatterforge.cli import main
from scatterforge.errors import PreconditionError


def _run(tmp_path, *argv):
    out = tmp_path / "cert.json"
    rc = main([*argv, "--out", str(out)])
    return rc, (json.loads(out.read_text()) if out.exists() else None)


def test_construct_scattered(tmp_path):
    rc, cert = _run(tmp_path, "construct", "-p", "2", "-m", "5", "-s", "2")
    assert rc == 0
    assert cert["schema_version"] == 1 and cert["command"] == "construct"
    res = cert["results"]
    assert res["scattered"] is True and res["dim_q"] == 7
    assert res["conditions"] == {"i": True, "ii": True, "iii": True}
    assert cert["witnesses"][0]["kind"] == "exhaustive"
    assert cert["witnesses"][0]["points_checked"] == 1057
    assert cert["field"]["poly_qm"] == [[1], [0], [1], [0], [0], [1]]  # x^5 + x^2 + 1


def test_construct_failing_case_records_witnesses(tmp_path):
    rc, cert = _run(tmp_path, "construct", "-p", "2", "-e", "2", "-m", "5")
    assert rc == 0
    kinds = {w["kind"]: w for w in cert["witnesses"]}
    assert kinds["root of Q outside F_q"]["x"] == 13
    g = kinds["G_{m-1}(gamma) = 0"]
    assert g["gamma"] == 2 and g["projective_roots"] == g["q_plus_1"] == 5
    assert kinds["point of weight >= 2"]["point"] == [1, 13, 10]
    assert cert["results"]["scattered"] is False


def test_construct_oracle_flag(tmp_path):
    rc, cert = _run(tmp_path, "construct", "-p", "2", "-m", "4", "-s", "1")
    assert rc == 0
    assert cert["results"]["flag"] == cert_mod.ORACLE_NOTE


def test_spectrum_and_csv(tmp_path):
    csv = tmp_path / "spec.csv"
    rc, cert = _run(tmp_path, "spectrum", "-p", "2", "-m", "5", "--csv", str(csv))
    assert rc == 0
    res = cert["results"]
    assert res["spectrum"] == {"2": 812, "3": 240, "4": 5}
    assert res["closed_form_match"] is True
    assert res["standard_equations"] == [True, True, True]
    lines = csv.read_text().splitlines()
    assert lines[0] == "weight,count,closed_form,match"
    assert lines[1:] == ["2,812,812,true", "3,240,240,true", "4,5,5,true"]


def test_replay_round_trip_and_tamper(tmp_path):
    rc, cert = _run(tmp_path, "spectrum", "-p", "2", "-m", "5")
    assert rc == 0
    path = tmp_path / "cert.json"
    assert main(["--replay", str(path), "--out", str(tmp_path / "fresh.json")]) == 0

    # a spectrum that breaks the standard equations is caught before re-running
    cert["results"]["spectrum"]["2"] = 811
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    assert main(["--replay", str(bad), "--out", str(tmp_path / "x.json")]) == 1


def test_replay_detects_changed_result(tmp_path):
    rc, cert = _run(tmp_path, "construct", "-p", "2", "-m", "5")
    cert["results"]["dim_q"] = 6
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    assert main(["--replay", str(bad), "--out", str(tmp_path / "x.json")]) == 1


def test_flags_before_subcommand(tmp_path):
    out = tmp_path / "c.json"
    assert main(["--out", str(out), "equivalence", "-p", "2", "-m", "5", "-s", "1", "-t", "4"]) == 0
    cert = json.loads(out.read_text())
    assert cert["results"]["equivalent"] is True
    assert cert["results"]["witness_verified"] is True
    assert cert["witnesses"][0]["name"] == "reversal"


def test_equivalence_negative(tmp_path):
    rc, cert = _run(tmp_path, "equivalence", "-p", "2", "-m", "7", "-s", "1", "-t", "2")
    assert rc == 0 and cert["results"]["equivalent"] is False and cert["witnesses"] == []


def test_scan_small_grid(tmp_path, monkeypatch):
    monkeypatch.setenv("SCATTERFORGE_THREADS", "1")
    csv = tmp_path / "scan.csv"
    rc, cert = _run(tmp_path, "scan", "--grid", "p=2;e=1,2;m=5;s=1", "--csv", str(csv))
    assert rc == 0
    rows = cert["results"]["rows"]
    assert [(r["e"], r["scattered"]) for r in rows] == [(1, True), (2, False)]
    assert cert_mod.theorem_consistency(rows)
    assert csv.read_text().splitlines()[0].startswith("p,e,m,s,cond_i")


def test_scan_skips_over_budget(monkeypatch):
    monkeypatch.setenv("SCATTERFORGE_THREADS", "1")
    results, _, _ = cert_mod.run_scan("p=3;e=1;m=7;s=1", budget=1000)
    assert results["rows"][0]["scattered"] == "skipped"


def test_parse_grid():
    assert cert_mod.parse_grid("p=2;e=1;m=5;s=all") == [(2, 1, 5, s) for s in (1, 2, 3, 4)]
    with pytest.raises(PreconditionError):
        cert_mod.parse_grid("p=2;m=5")


def test_theorem_consistency_flags_contradiction():
    row = {"cond_i": True, "cond_ii": True, "cond_iii": True, "g_criterion": True, "scattered": False}
    assert not cert_mod.theorem_consistency([row])
    assert not cert_mod.theorem_consistency([{"cond_iii": True, "g_criterion": False}])


@pytest.mark.parametrize("argv,code", [
    (["construct", "-p", "2", "-m", "5", "-s", "5"], 2),     # s outside 1..m-1
    (["construct", "-p", "4", "-m", "5"], 2),                # 4 is not prime
    (["construct", "-p", "2", "-m", "6", "-s", "2"], 2),     # gcd(s, m) != 1
    (["construct", "-p", "2"], 2),                            # missing -m
    (["spectrum", "-p", "3", "-m", "5", "--budget", "100"], 3),
])
def test_exit_codes(argv, code, tmp_path):
    assert main([*argv, "--out", str(tmp_path / "o.json")]) == code


def test_io_error_exit_code(tmp_path):
    assert main(["construct", "-p", "2", "-m", "5", "--out", str(tmp_path / "missing" / "x.json")]) == 5
    assert main(["--replay", str(tmp_path / "nope.json")]) == 5


def test_module_entry_point(tmp_path):
    out = tmp_path / "c.json"
    proc = subprocess.run([sys.executable, "-m", "scatterforge", "construct", "-p", "2", "-m", "5",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["results"]["scattered"] is True


def test_code_report(tmp_path):
    rc, cert = _run(tmp_path, "code-report", "-p", "2", "-m", "5")
    assert rc == 0
    res = cert["results"]
    assert (res["n"], res["k"], res["d_min"]) == (7, 3, 3)
    assert res["distribution"] == {"0": 1, "3": 155, "4": 7440, "5": 25172}
    assert res["minimal"] is True and res["minimal_routes"] == {"supports": True, "cutting": True}
    assert res["dual"] == {"n": 7, "k": 4}
    assert res["saturating"] is True

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from tautcalc import cli

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    ns = cli.build_parser().parse_args(list(argv))
    code = cli.run(cli.config_from_args(ns), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv, name", [
    (("class", "prym", "--r", "3", "--emit", "json"), "class_prym_r3.json"),
    (("class", "strongly-bn", "--r", "4", "--emit", "json"), "class_strongly_bn_r4.json"),
    (("kodaira", "r14-2", "--emit", "csv"), "kodaira_r14_2.csv"),
    (("fp", "--r", "3"), "fp_r3.txt"),
])
def test_golden_outputs(argv, name):
    code, out, _ = run_cli(*argv)
    assert code == 0
    assert out == (GOLDEN / name).read_text(encoding="utf-8")


def test_prym_json_values():
    code, out, _ = run_cli("class", "prym", "--r", "3", "--emit", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"] is True
    assert data["lambda"] == "7" and data["delta0p"] == "1" and data["delta0ram"] == "3/2"
    assert data["delta"] == {"0p": "1", "0pp": "4", "0ram": "3/2",
                             "1": "15", "2": "14", "3": "12", "4": "9", "5": "5"}
    assert data["unknown"] == ["1:5", "2:4", "3:3"]


def test_numbers_are_exact_strings():
    _, out, _ = run_cli("class", "prym", "--r", "4", "--emit", "json")
    data = json.loads(out)
    assert all(isinstance(v, str) for v in data["slopes"])
    assert data["slopes"][1] == "22/23"


def test_fp_does_not_depend_on_m():
    _, a, _ = run_cli("fp", "--r", "3", "--m", "2")
    _, b, _ = run_cli("fp", "--r", "3", "--m", "9")
    diff = [(x, y) for x, y in zip(a.splitlines(), b.splitlines()) if x != y]
    assert len(diff) == 1 and diff[0][0].startswith("m ")


def test_fp_methods_agree():
    _, a, _ = run_cli("fp", "--r", "4", "--emit", "json")
    _, b, _ = run_cli("fp", "--r", "4", "--method", "leibniz", "--emit", "json")
    ja, jb = json.loads(a), json.loads(b)
    for key in ("diagonal", "eta2", "eta3", "gamma23"):
        assert ja[key] == jb[key]
    assert ja["diagonal"] == "34560" and ja["eta2"] == "7776"


def test_thread_count_does_not_change_output(monkeypatch):
    monkeypatch.setenv("TAUTCALC_THREADS", "4")
    _, a, _ = run_cli("verify-all", "--r-max", "3", "--identity-r-max", "12", "--emit", "json")
    _, b, _ = run_cli("verify-all", "--r-max", "3", "--identity-r-max", "12", "--emit", "json",
                      "--threads", "1")
    assert a == b


def test_csv_header_and_rows():
    _, out, _ = run_cli("nikulin", "--r", "3", "--emit", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["kind", "name", "value", "expected", "status", "source"]
    assert {r[0] for r in rows[1:]} <= {"value", "check", "note"}


def test_rho_with_profiles(tmp_path):
    ram = tmp_path / "ram.json"
    ram.write_text(json.dumps({"orders": [0, 3, 4]}))
    ram2 = tmp_path / "ram2.json"
    ram2.write_text(json.dumps({"orders": [0, 2, 4]}))
    code, out, _ = run_cli("rho", "--g", "1", "--r", "2", "--d", "4",
                           "--ram", str(ram), "--ram", str(ram2), "--emit", "json")
    data = json.loads(out)
    assert code == 0 and data["rho"] == "4" and data["rho_ramified"] == "-3"


def test_rho_multivanishing(tmp_path):
    # r = 2, g = 2: the profile lowers rho to -1
    multi = tmp_path / "multi.json"
    multi.write_text(json.dumps({"orders": [0, 2, 4], "divisor_degrees": [0, 2, 4, 6]}))
    code, out, _ = run_cli("rho", "--g", "2", "--r", "2", "--d", "4", "--multi", str(multi), "--emit", "json")
    data = json.loads(out)
    assert code == 0 and data["rho_multivanishing"] == "-1"
    assert data["notes"]


@pytest.mark.parametrize("payload", [{"orders": [0, 2, 2]}, {"order": [0, 1, 2]}, "not json"])
def test_bad_profile_is_usage_error(tmp_path, payload):
    p = tmp_path / "bad.json"
    p.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    code, out, err = run_cli("rho", "--g", "5", "--r", "2", "--d", "6", "--ram", str(p))
    assert code == 2 and out == "" and err.startswith("error:")


def test_usage_errors():
    assert run_cli("fp", "--r", "5", "--method", "leibniz")[0] == 2
    assert run_cli("fp", "--r", "1")[0] == 2
    assert run_cli("class", "prym", "--r", "2")[0] == 2
    assert run_cli("fp", "--r", "3", "--threads", "0")[0] == 2
    assert run_cli("verify-all", "--r-max", "2")[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["fp"])
    assert e.value.code == 2


def test_failed_check_exits_one(monkeypatch):
    # a wrong closed form must surface as a failure with a diff on stderr
    monkeypatch.setattr(cli.dg, "fp_closed_form", lambda r: -1)
    code, out, err = run_cli("fp", "--r", "3")
    assert code == 1
    assert "result: FAILED" in out
    assert "expected: -1" in err and "computed: 240" in err


def test_verify_all_passes_and_lists_stated_mismatches():
    code, out, _ = run_cli("verify-all", "--r-max", "4", "--emit", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"] is True
    assert not [c for c in data["checks"] if c["status"] == "fail"]
    assert any("c_2" in n or "c2" in n for n in data["notes"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tautcalc", "kodaira", "r14-2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "22963/25428" in proc.stdout

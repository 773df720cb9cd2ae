import csv
import io
import json
import subprocess
import sys

import pytest

from ymss.cli import main, parse_m
from ymss.pipeline import CSV_COLUMNS
from ymss.roots import closed_form_roots


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_m():
    assert parse_m("7") == (7, 7)
    assert parse_m("3..15") == (3, 15)


def test_derive_text(capsys):
    code, out, _ = run(capsys, "derive", "--m", "1")
    assert code == 0 and out == "P_1(z) = 5z - 1\n"


def test_derive_json_with_coefficients(capsys):
    code, out, _ = run(capsys, "derive", "--d", "9", "--format", "json", "--coeffs")
    js = json.loads(out)
    assert code == 0
    assert js["Pm_text"] == "196z^2 - 77z + 1"
    assert js["factor_multiplicities"] == {"c": 1, "1-c^2": 1}
    assert set(js["coeff_table"]["cn"]) == {"1", "2"}


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--d", "9")
    assert code == 0 and out == "d=9 m=2 N=2\n"


def test_even_dimension_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as ex:
        main(["count", "--d", "10"])
    assert ex.value.code == 2
    assert "even" in capsys.readouterr().err


def test_range_rejected_for_single_case(capsys):
    with pytest.raises(SystemExit) as ex:
        main(["count", "--m", "3..5"])
    assert ex.value.code == 2


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--m", "3..9", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == CSV_COLUMNS
    assert [r[2] for r in rows[1:]] == ["3"] * 7
    assert [r[7] for r in rows[1:]] == ["MINUS_STAR_PLUS"] * 4 + ["STAR_MINUS_PLUS"] * 3


def test_sweep_exit_status_reflects_failed_checks(capsys):
    code, out, _ = run(capsys, "sweep", "--m", "10")
    assert code == 1
    assert "m=10: sign_ok" in out


def test_sweep_is_deterministic(capsys):
    _, a, _ = run(capsys, "sweep", "--m", "3..6", "--format", "json")
    _, b, _ = run(capsys, "sweep", "--m", "3..6", "--format", "json")
    assert a == b
    assert json.loads(a)["ok"] is True


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "--d", "13")
    assert code == 0
    assert "S_m(z) = 847z^2 - 44z - 3" in out
    assert "[FAIL]" not in out


def test_shoot_star_json(capsys, tmp_path):
    prof = tmp_path / "p.csv"
    code, out, _ = run(capsys, "shoot", "--d", "11", "--format", "json", "--profile", str(prof))
    js = json.loads(out)
    assert code == 0 and js["ok"]
    assert abs(js["c"] - js["c_target"]) < 2e-8
    assert abs(js["endpoint_residual"]) < 1e-5
    header = prof.read_text().splitlines()[0]
    assert header == "y,u,du,H,residual"


def test_shoot_explicit_a(capsys):
    code, out, _ = run(capsys, "shoot", "--d", "13", "--a", "1.0")
    assert code == 0 and "c_target = None" in out


def test_extend_plus(capsys):
    code, out, _ = run(capsys, "extend", "--d", "11", "--target", "plus", "--format", "json")
    js = json.loads(out)
    alpha = float(closed_form_roots(11).alpha_plus)
    # u+ = 1 - alpha/(1 + beta x^2) peaks in modulus at x = 0
    assert code == 0 and js["ok"]
    assert abs(js["max_abs_u"] - (alpha - 1)) < 1e-6  # grid need not hit x = 0


def test_limit(capsys):
    code, out, _ = run(capsys, "limit", "--d", "19", "--format", "json")
    assert code == 0 and json.loads(out)["monotone"] is True


def test_limit_d5_negative_control(capsys):
    code, out, _ = run(capsys, "limit", "--d", "5")
    assert code == 0 and "oscillates" in out


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "r.csv"
    code, out, _ = run(capsys, "sweep", "--m", "3", "--format", "csv", "-o", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().startswith(",".join(CSV_COLUMNS))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ymss", "derive", "--m", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "P_2(z) = 196z^2 - 77z + 1\n"

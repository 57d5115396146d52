import json
import subprocess
import sys

import pytest

from sperval.cli import main
from sperval.session import bundled_session_text

CUSP = "variables x y\ncurvette c: x = t^2; y = t^3\ncurvette d: x = t^2; y = t^3 + t^4\npoly g = y^2 - x^3\npair p = c d\n"


@pytest.fixture
def cusp(tmp_path):
    path = tmp_path / "cusp.session"
    path.write_text(CUSP)
    return str(path)


@pytest.fixture
def space(tmp_path):
    path = tmp_path / "space.session"
    path.write_text(bundled_session_text())
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_value(capsys, cusp):
    code, out, _ = run(capsys, "value", cusp, "--poly", "x*y")
    assert code == 0 and "nu(x*y) = 5" in out


def test_value_json(capsys, cusp):
    code, out, _ = run(capsys, "value", cusp, "--poly", "g", "--curvette", "d", "--json")
    data = json.loads(out)
    assert code == 0 and data["status"] == "ok" and data["value"] == "7"


def test_semigroup_positions(capsys):
    code, out, _ = run(capsys, "semigroup", "--generators", "6,10,14,21,25,29", "--index", "21,25")
    assert code == 0
    assert "position of 21: 8" in out and "position of 25: 11" in out


def test_roots_on_space_curve(capsys, space):
    code, out, _ = run(capsys, "roots", space, "--level", "29")
    assert code == 0
    assert "Q4 = y^2 - x*z" in out and "value 21" in out


def test_standard_form_steps(capsys, space):
    code, out, _ = run(capsys, "standard-form", space, "--poly", "f", "--level", "31", "--show-steps")
    assert code == 0 and "18, 30, 31, 31, 42" in out


def test_sep_ideal(capsys, space):
    code, out, _ = run(capsys, "sep-ideal", space, "--pair", "exact", "--json")
    data = json.loads(out)
    assert code == 0 and str(data["value_alpha"]) == "31"


def test_blowup_pair(capsys, cusp):
    code, out, _ = run(capsys, "blowup", cusp, "--pair", "p")
    assert code == 0 and out


def test_chart_table(capsys, cusp):
    code, out, _ = run(capsys, "blowup", cusp, "--curvette", "c", "--chart-table", "--steps", "3")
    assert code == 0 and "chart 1 (start)" in out


def test_dual_graph_script(capsys, tmp_path):
    script = tmp_path / "ev.script"
    script.write_text("init U\ncase2.2 first-step-U\n")
    code, out, _ = run(capsys, "dual-graph", "--script", str(script), "--dot")
    assert code == 0 and "bamboo True" in out and "graph" in out


def test_math_error_exits_one(capsys, space):
    code, _, err = run(capsys, "roots", space, "--level", "37", "--trunc", "30")
    assert code == 1 and "truncation-exceeded" in err


def test_error_json_has_code(capsys, space):
    code, out, _ = run(capsys, "roots", space, "--level", "37", "--trunc", "30", "--json")
    assert code == 1 and json.loads(out)["error"]["code"] == "truncation-exceeded"


def test_usage_errors_exit_two(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "value", str(tmp_path / "missing.session"), "--poly", "x")
    assert code == 2
    bad = tmp_path / "bad.session"
    bad.write_text("variables x\ncurvette c: x = t^\n")
    code, _, err = run(capsys, "value", str(bad), "--poly", "x")
    assert code == 2 and "line 2" in err


def test_walkthrough_passes(capsys):
    code, out, _ = run(capsys, "walkthrough")
    assert code == 0 and "35/35 checks passed" in out


def test_walkthrough_json(capsys):
    code, out, _ = run(capsys, "walkthrough", "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and len(data["checks"]) == 35


def test_walkthrough_low_truncation_fails(capsys):
    code, _, err = run(capsys, "walkthrough", "--trunc", "24")
    assert code == 1 and "truncation-exceeded" in err


def test_walkthrough_mismatch_exits_one(capsys, tmp_path):
    path = tmp_path / "m.session"
    path.write_text(bundled_session_text().replace("poly f = x^3 + y^3 + z^3", "poly f = x^3 + y^3"))
    code, out, _ = run(capsys, "walkthrough", "--session", str(path))
    assert code == 1 and "FAIL" in out


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "sperval.cli", "walkthrough", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b

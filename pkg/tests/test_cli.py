import csv
import io
import math
import subprocess
import sys
from pathlib import Path

import pytest

from cnnd.cli import fmt, run

FIX = Path(__file__).parent / "fixtures"


def _run(task, config, out_dir, *extra):
    out, err = io.StringIO(), io.StringIO()
    code = run([task, "--config", str(FIX / config), "--out", str(out_dir), *extra], out, err)
    return code, out.getvalue(), err.getvalue()


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_fmt_is_shortest_round_trip():
    assert fmt(0.1) == "0.1" and fmt(1e-16) == "1e-16" and fmt(2) == "2"
    assert fmt(True) == "true" and fmt(math.nan) == "nan"


def test_verify_family1_exit_0(tmp_path):
    code, out, _ = _run("verify", "family1.ini", tmp_path)
    assert code == 0
    rows = _rows(tmp_path / "verify.csv")
    assert rows and {r["status"] for r in rows} <= {"pass", "skipped"}
    assert "checks passed" in out


def test_cos_sinh_analyze_exit_1_and_golden(tmp_path):
    code, out, err = _run("analyze", "cos_sinh.ini", tmp_path)
    assert code == 1 and "not CNND" in err
    got = (tmp_path / "analyze.csv").read_bytes()
    assert got == (FIX / "golden" / "cos_sinh_analyze.csv").read_bytes()
    for r in _rows(tmp_path / "analyze.csv"):
        x = float(r["x"])
        assert float(r["zperp_norm2"]) == pytest.approx(math.cos(x) ** 2, abs=1e-9)
        near = abs(math.cos(x)) < 1e-6
        assert (r["status"] == "NotCnnd") is not near


def test_bad_expression_exit_2_with_offset(tmp_path):
    code, _, err = _run("analyze", "bad_expr.ini", tmp_path)
    assert code == 2
    assert "[surface] f" in err and "offset 4" in err


@pytest.mark.parametrize(
    "extra, needle",
    [
        (["--set", "domain.nx=0"], "[domain] nx"),
        (["--set", "domain.x=1, 0"], "[domain] x"),
        (["--set", "surface.kind=torus"], "[surface] kind"),
        (["--set", "surface.alpha=sin(t"], "[surface] alpha"),
        (["--set", "surface.alpha=foo(t)"], "[surface] alpha"),
        (["--set", "task.tol=abc"], "[task] tol"),
        (["--set", "nodot=1"], "--set"),
        (["--set", "extra.key=1"], "--set"),
    ],
)
def test_fault_injected_configs_exit_2(tmp_path, extra, needle):
    code, _, err = _run("verify", "family1.ini", tmp_path, *extra)
    assert code == 2 and needle in err


def test_missing_and_malformed_files(tmp_path):
    out, err = io.StringIO(), io.StringIO()
    assert run(["analyze", "--config", str(tmp_path / "none.ini")], out, err) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[surface\nkind = graph\n")
    assert run(["analyze", "--config", str(bad)], out, err) == 2
    bad.write_text("[surface]\nkind = graph\nf = x\ng = 0\n[domain]\nx = 0, 1\ny = 0, 1\n[weird]\n")
    assert run(["analyze", "--config", str(bad)], out, err) == 2
    assert run(["nosuchtask", "--config", str(bad)], out, err) == 2


def test_determinism(tmp_path):
    for task, name in (("verify", "verify.csv"), ("analyze", "analyze.csv")):
        _run(task, "family1.ini", tmp_path / "a")
        _run(task, "family1.ini", tmp_path / "b")
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_analyze_family1_flags_tangent_points(tmp_path):
    code, out, _ = _run("analyze", "family1.ini", tmp_path)
    assert code == 1 and "42 of 49 points are CNND" in out
    rows = _rows(tmp_path / "analyze.csv")
    assert [r["x"] for r in rows[:3]] == ["-1.0", "-0.6666666666666667", "-0.33333333333333337"]
    cnnd = [r for r in rows if r["status"] == "CNND"]
    assert all(float(r["a"]) == 0.0 and abs(float(r["E"]) - 1.0) < 1e-12 for r in cnnd)


def test_ellipse_and_gauss_on_cone(tmp_path):
    assert _run("ellipse", "lambda_cone.ini", tmp_path)[0] == 0
    rows = _rows(tmp_path / "ellipse.csv")
    assert len(rows) == 16 and list(rows[0]) == ["theta", "x_Zperp", "y_Wprime", "B1", "B2", "B3", "B4"]
    code, out, _ = _run("gauss", "lambda_cone.ini", tmp_path)
    assert code == 0
    q = {r["quantity"]: complex(float(r["re"]), float(r["im"])) for r in _rows(tmp_path / "gauss.csv")}
    assert q["z_sum_sq"] == pytest.approx(1.0, abs=1e-12)
    assert "adapted_z1" in q
    code, _, err = _run("verify", "lambda_cone.ini", tmp_path)
    assert code == 1 and "exceed tol" in err


def test_tasks_needing_a_point_or_graph(tmp_path):
    assert _run("ellipse", "family1.ini", tmp_path, "--set", "domain.point=0, 0")[0] == 1
    assert _run("gauss", "cos_sinh.ini", tmp_path)[0] == 2
    assert _run("pde-check", "cos_sinh.ini", tmp_path)[0] == 2


def test_pde_tasks(tmp_path):
    assert _run("pde-check", "family1.ini", tmp_path)[0] == 0
    assert len(_rows(tmp_path / "pde_check.csv")) == 49
    code, out, _ = _run("pde-solve", "family1_solve.ini", tmp_path)
    assert code == 0 and "converged=true" in out
    assert len(_rows(tmp_path / "pde_solve.csv")) == 21 * 21
    log = (tmp_path / "pde_solve.log").read_text().splitlines()
    assert log[0].startswith("iteration 0") and log[-1].startswith("converged true")
    code, _, err = _run("pde-solve", "family1_solve.ini", tmp_path, "--set", "task.initial=constant", "--set", "task.max_iter=1")
    assert code == 1
    assert _run("pde-solve", "family1_solve.ini", tmp_path, "--set", "task.initial=sideways")[0] == 2
    assert _run("pde-check", "family1.ini", tmp_path, "--set", "surface.Z=1, 0")[0] == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cnnd", "verify", "--config", str(FIX / "family1.ini"), "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0

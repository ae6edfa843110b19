import math
from pathlib import Path

import pytest

from riccati_gauge.cli import main
from riccati_gauge.fileformats import read_csv, read_equation, read_matrix

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_constant(capsys):
    code, out, _ = run(capsys, "check", DATA / "constant.eq")
    assert code == 0
    assert "constant solutions: 1.0, 2.0" in out
    assert "criterion a: PASS" in out  # 2 - 3 + 1 = 0
    assert out.startswith("command: check")
    assert "inputs: sha256:" in out


def test_check_criterion_a(capsys, tmp_path):
    eq = tmp_path / "a.eq"
    eq.write_text("a0 = -sin(t) - 1\na1 = sin(t)\na2 = 1\n")
    code, out, _ = run(capsys, "check", eq)
    assert code == 0 and "criterion a: PASS; particular solution x=1" in out


def test_transform_inversion(capsys, tmp_path):
    out_path = tmp_path / "out.eq"
    code, out, _ = run(capsys, "transform", DATA / "constant.eq", DATA / "invert.matrix",
                       "--out", out_path)
    assert code == 0
    eq = read_equation(out_path)
    assert eq.coefficients_at(0.0) == (1.0, 3.0, 2.0)
    assert f"wrote {out_path}" in out


def test_transform_rejects_non_unimodular(capsys, tmp_path):
    m = tmp_path / "bad.matrix"
    m.write_text("alpha = 2\nbeta = 0\ngamma = 0\ndelta = 1\n")
    code, _, err = run(capsys, "transform", DATA / "constant.eq", m, "--out", tmp_path / "o.eq")
    assert code == 2 and "not unimodular" in err


@pytest.mark.parametrize("known, variant", [
    (["2"], "shift"), (["2"], "coshift"), (["2,1"], "composed"),
    (["2", "1"], "standard"), (["2,1"], "alternative"),
    (["1 - 1/(2*exp(t) - 1)", "2", "1"], None),
])
def test_reduce_variants(capsys, tmp_path, known, variant):
    argv = ["reduce", DATA / "constant.eq", "--out", tmp_path / "r.eq",
            "--matrix-out", tmp_path / "r.matrix"]
    for k in known:
        argv += ["--known", k]
    if variant:
        argv += ["--variant", variant]
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert "FAIL" not in out
    read_equation(tmp_path / "r.eq")
    read_matrix(tmp_path / "r.matrix")


def test_reduce_refuses_unverified(capsys, tmp_path):
    code, out, _ = run(capsys, "reduce", DATA / "constant.eq", "--known", "3",
                       "--out", tmp_path / "r.eq")
    assert code == 1 and "refusing" in out


def test_solve_two_known(capsys, tmp_path):
    out_path = tmp_path / "x.csv"
    code, out, _ = run(capsys, "solve", DATA / "constant.eq", "--x0", 0, "--known", "2,1",
                       "--out", out_path)
    assert code == 0
    assert "quadratures in closed form: 1" in out
    traj = read_csv(out_path)
    assert traj.x[-1] == pytest.approx(1 - 1 / (2 * math.e - 1), abs=1e-9)
    assert (tmp_path / "x_rk4.csv").exists()


def test_solve_three_known_uses_no_quadrature(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", DATA / "tangent.eq", "--x0", 0.3,
                       "--known", "tan(t+0.8), tan(t+0.4), tan(t)", "--out", tmp_path / "x.csv",
                       "--report", tmp_path / "rep.txt")
    assert code == 0
    assert "quadratures in closed form: 0" in out
    assert (tmp_path / "rep.txt").read_text() == out


def test_solve_rk4_only_reports_blowup(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", DATA / "tangent.eq", "--x0", 0, "--t1", 2,
                       "--out", tmp_path / "x.csv")
    assert code == 0 and "RK4 blow-up" in out
    assert read_csv(tmp_path / "x.csv").blowup_at is not None


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", DATA / "tangent.eq", "--candidate", "tan(t)")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", DATA / "tangent.eq", "--candidate", "t")
    assert code == 1 and "FAIL" in out


def test_sample(capsys, tmp_path):
    code, _, _ = run(capsys, "sample", DATA / "tangent.eq", "--expr", "tan(t)", "--grid", 7,
                     "--out", tmp_path / "s.csv")
    assert code == 0 and len(read_csv(tmp_path / "s.csv")) == 7
    code, _, err = run(capsys, "sample", DATA / "tangent.eq", "--out", tmp_path / "s.csv")
    assert code == 2 and "--x0" in err


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.eq"
    bad.write_text("a0 = 1 +\na1 = 0\na2 = 1\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "bad.eq:1:" in err
    code, _, err = run(capsys, "check", tmp_path / "missing.eq")
    assert code == 2
    code, _, err = run(capsys, "verify", DATA / "tangent.eq", "--candidate", "t +")
    assert code == 2 and err.startswith("error: --candidate")

import math

import pytest

from riccati_gauge.expr import Interval
from riccati_gauge.fileformats import (FormatError, format_csv, format_equation,
                                       parse_equation_text, parse_matrix_text,
                                       read_csv, read_equation, read_matrix,
                                       write_csv, write_equation, write_matrix)
from riccati_gauge.riccati import RiccatiEquation
from riccati_gauge.parser import parse_expr


def test_parse_equation_with_comments_and_interval():
    eq = parse_equation_text("# demo\na0 = 2\na1 = -3 # linear\na2 = t^2\ninterval = 0 0.5\nsamples = 11\n")
    assert eq.domain == Interval(0.0, 0.5, 11)
    assert eq.coefficients_at(0.5) == (2.0, -3.0, 0.25)


def test_defaults():
    eq = parse_equation_text("a0 = 1\na1 = 0\na2 = 1")
    assert eq.domain == Interval()


@pytest.mark.parametrize("text, match", [
    ("a0 = 1\na1 = 0", "missing required key 'a2'"),
    ("a0 = 1\na0 = 2\na1 = 0\na2 = 1", ":2: duplicate key 'a0'"),
    ("a0 = 1\na1 = 0\na2 = 1\nfoo = 3", ":4: unknown key 'foo'"),
    ("a0 = 1 +\na1 = 0\na2 = 1", ":1: a0:"),
    ("a0 1\na1 = 0\na2 = 1", ":1: expected 'key = value'"),
    ("a0 = 1\na1 = 0\na2 = 1\ninterval = 0", ":4: bad interval"),
    ("a0 = 1\na1 = 0\na2 = 1\nsamples = 1", "samples must be >= 2"),
    ("a0 = 1\na1 = 0\na2 = 1\nsamples = x", "samples must be an integer"),
])
def test_equation_errors(text, match):
    with pytest.raises(FormatError, match=match):
        parse_equation_text(text)


def test_equation_round_trip(tmp_path):
    eq = RiccatiEquation(parse_expr("exp(-t) * sin(2*t)"), parse_expr("-1.5"),
                         parse_expr("t^-2"), Interval(0.25, 2.0, 17))
    path = tmp_path / "e.eq"
    write_equation(eq, path)
    back = read_equation(path)
    assert back.domain == eq.domain
    for t in back.domain.grid():
        assert back.coefficients_at(t) == eq.coefficients_at(t)
    assert format_equation(back) == format_equation(eq)


def test_matrix_round_trip(tmp_path):
    a = parse_matrix_text("alpha = cos(t)\nbeta = -sin(t)\ngamma = sin(t)\ndelta = cos(t)\ninterval = 0 1")
    path = tmp_path / "m.matrix"
    write_matrix(a, path)
    back = read_matrix(path)
    assert back.entries == a.entries and back.domain == a.domain


def test_matrix_without_interval():
    a = parse_matrix_text("alpha = 1\nbeta = 0\ngamma = 0\ndelta = 1")
    assert a.domain is None


def test_csv_round_trip_with_blowup(tmp_path):
    path = tmp_path / "x.csv"
    write_csv(path, [0.0, 0.5, 1.0], [0.1, 2.0, math.inf], blowup_at=1.0)
    text = path.read_text()
    assert text.splitlines()[0] == "t,x"
    assert "1.0,inf" in text and text.rstrip().endswith("# blow-up at t=1.0")
    traj = read_csv(path)
    assert traj.x == (0.1, 2.0, math.inf) and traj.blowup_at == 1.0


def test_csv_is_full_precision():
    assert format_csv([0.1], [1 / 3]) == "t,x\n0.1,0.3333333333333333\n"


def test_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,t\n")
    with pytest.raises(FormatError, match="header"):
        read_csv(path)
    path.write_text("t,x\n1,2,3\n")
    with pytest.raises(FormatError, match=":2: bad row"):
        read_csv(path)

"""Plain-text equation/matrix files and trajectory CSV.

Equation file::

    a0 = 2
    a1 = -3
    a2 = 1
    interval = 0 1      # optional
    samples = 201       # optional

Matrix file: ``alpha``, ``beta``, ``gamma``, ``delta`` and an optional
``interval``. ``#`` starts a comment.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

from .expr import Expr, Interval, to_text
from .parser import ParseError, parse_expr
from .riccati import RiccatiEquation
from .sl2 import GroupElement
from .solver import Trajectory

__all__ = [
    "FormatError", "read_equation", "write_equation", "parse_equation_text",
    "format_equation", "read_matrix", "write_matrix", "parse_matrix_text",
    "format_matrix", "write_csv", "read_csv", "format_csv",
]


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


def _assignments(text: str, allowed: set[str], source: str) -> dict[str, tuple[str, int]]:
    found: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise FormatError(f"expected 'key = value', got {raw.strip()!r}", lineno, source)
        if key not in allowed:
            raise FormatError(f"unknown key {key!r}", lineno, source)
        if key in found:
            raise FormatError(f"duplicate key {key!r}", lineno, source)
        found[key] = (value, lineno)
    return found


def _expr(found, key, source) -> Expr:
    if key not in found:
        raise FormatError(f"missing required key {key!r}", None, source)
    value, lineno = found[key]
    try:
        return parse_expr(value)
    except ParseError as exc:
        raise FormatError(f"{key}: {exc}", lineno, source) from None


def _interval(found, source, samples: int | None = None) -> Interval | None:
    if "interval" not in found:
        return None
    value, lineno = found["interval"]
    try:
        lo, hi = (float(x) for x in value.split())
        return Interval(lo, hi, samples or Interval().samples)
    except ValueError as exc:
        raise FormatError(f"bad interval {value!r}: {exc}", lineno, source) from None


def parse_equation_text(text: str, source: str = "<input>") -> RiccatiEquation:
    found = _assignments(text, {"a0", "a1", "a2", "interval", "samples"}, source)
    a0, a1, a2 = (_expr(found, k, source) for k in ("a0", "a1", "a2"))
    samples = None
    if "samples" in found:
        value, lineno = found["samples"]
        try:
            samples = int(value)
        except ValueError:
            raise FormatError(f"samples must be an integer, got {value!r}", lineno, source) from None
        if samples < 2:
            raise FormatError("samples must be >= 2", lineno, source)
    domain = _interval(found, source, samples)
    if domain is None:
        domain = Interval(samples=samples or Interval().samples)
    return RiccatiEquation(a0, a1, a2, domain)


def format_equation(eq: RiccatiEquation) -> str:
    d = eq.domain
    return (f"a0 = {to_text(eq.a0)}\n"
            f"a1 = {to_text(eq.a1)}\n"
            f"a2 = {to_text(eq.a2)}\n"
            f"interval = {d.t_lo!r} {d.t_hi!r}\n"
            f"samples = {d.samples}\n")


def read_equation(path) -> RiccatiEquation:
    path = Path(path)
    return parse_equation_text(path.read_text(), str(path))


def write_equation(eq: RiccatiEquation, path):
    Path(path).write_text(format_equation(eq))


def parse_matrix_text(text: str, source: str = "<input>") -> GroupElement:
    found = _assignments(text, {"alpha", "beta", "gamma", "delta", "interval"}, source)
    entries = [_expr(found, k, source) for k in ("alpha", "beta", "gamma", "delta")]
    return GroupElement(*entries, domain=_interval(found, source))


def format_matrix(a: GroupElement) -> str:
    lines = [f"{name} = {to_text(e)}"
             for name, e in zip(("alpha", "beta", "gamma", "delta"), a.entries)]
    if a.domain is not None:
        lines.append(f"interval = {a.domain.t_lo!r} {a.domain.t_hi!r}")
    return "\n".join(lines) + "\n"


def read_matrix(path) -> GroupElement:
    path = Path(path)
    return parse_matrix_text(path.read_text(), str(path))


def write_matrix(a: GroupElement, path):
    Path(path).write_text(format_matrix(a))


def _num(v: float) -> str:
    return "inf" if math.isinf(v) else repr(float(v))


def format_csv(ts: Iterable[float], xs: Iterable[float], blowup_at: float | None = None) -> str:
    rows = ["t,x"] + [f"{_num(t)},{_num(x)}" for t, x in zip(ts, xs)]
    if blowup_at is not None:
        rows.append(f"# blow-up at t={blowup_at!r}")
    return "\n".join(rows) + "\n"


def write_csv(path, ts, xs, blowup_at: float | None = None):
    Path(path).write_text(format_csv(ts, xs, blowup_at))


def read_csv(path) -> Trajectory:
    ts, xs = [], []
    blowup = None
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "t,x":
        raise FormatError("missing 't,x' header", 1, str(path))
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# blow-up at t="):
                blowup = float(line.split("=", 1)[1])
            continue
        try:
            t, x = (float(v) for v in line.split(","))
        except ValueError:
            raise FormatError(f"bad row {line!r}", lineno, str(path)) from None
        ts.append(t)
        xs.append(x)
    step = ts[1] - ts[0] if len(ts) > 1 else 0.0
    return Trajectory(tuple(ts), tuple(xs), step, blowup)

"""Command-line front end.

Exit codes: 0 success / PASS, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .expr import (DomainError, Expr, Interval, count_integrals, eval_at,
                   to_text)
from .fileformats import (FormatError, format_csv, read_equation, read_matrix,
                          write_equation, write_matrix)
from .parser import ParseError, parse_expr
from .quadrature import QuadratureConfig, QuadratureError
from .reduction import (OrderingError, coshift_by_solution, shift_by_solution,
                        three_solution_element, two_solution_element)
from .riccati import (RiccatiEquation, constant_solutions, criterion_sum,
                      find_particular_solution, grid_max, residual_max,
                      transform)
from .sl2 import det_residual
from .solver import (PoleCrossingWarning, cross_ratio, rk4_integrate,
                     solve_one_known, solve_two_known, superposition_expr)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class Check:
    name: str
    status: str
    residual: float | None = None


@dataclass
class RunReport:
    command: str
    digest: str
    tolerances: dict[str, float]
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def add(self, name: str, ok: bool, residual: float | None = None) -> bool:
        self.checks.append(Check(name, "PASS" if ok else "FAIL", residual))
        return ok

    @property
    def passed(self) -> bool:
        return all(c.status == "PASS" for c in self.checks)

    def render(self) -> str:
        lines = [f"command: {self.command}", f"inputs: sha256:{self.digest}"]
        lines.append("tolerances: " + " ".join(f"{k}={v:g}" for k, v in self.tolerances.items()))
        lines += self.notes
        for c in self.checks:
            res = "" if c.residual is None else f" (max {c.residual:.6e})"
            lines.append(f"check {c.name}: {c.status}{res}")
        lines += [f"wrote {p}" for p in self.outputs]
        return "\n".join(lines) + "\n"


def _digest(args: argparse.Namespace, files: list[str]) -> str:
    h = hashlib.sha256()
    for f in files:
        h.update(Path(f).read_bytes())
    h.update(repr(sorted((k, str(v)) for k, v in vars(args).items() if k != "func")).encode())
    return h.hexdigest()[:16]


def _split_known(values: list[str] | None) -> list[Expr]:
    """``--known`` may be repeated and/or hold a comma-separated list."""
    parts: list[str] = []
    for value in values or []:
        depth, start = 0, 0
        for i, ch in enumerate(value):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append(value[start:i])
                start = i + 1
        parts.append(value[start:])
    exprs = []
    for text in parts:
        try:
            exprs.append(parse_expr(text.strip()))
        except ParseError as exc:
            raise InputError(f"--known {text.strip()!r}: {exc}") from None
    if len(exprs) > 3:
        raise InputError("at most three known solutions are supported")
    return exprs


def _load_equation(args) -> RiccatiEquation:
    eq = read_equation(args.equation)
    d = eq.domain
    lo = d.t_lo if args.t0 is None else args.t0
    hi = d.t_hi if args.t1 is None else args.t1
    samples = d.samples if args.grid is None else args.grid
    try:
        return eq.with_domain(Interval(lo, hi, samples))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _report(args, files) -> RunReport:
    return RunReport(
        command=" ".join([args.command] + [str(f) for f in files]),
        digest=_digest(args, files),
        tolerances={"residual": args.tol_residual, "quad": args.tol_quad,
                    "agree": args.tol_agree, "det": args.tol_det},
    )


def _quad(args) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=args.tol_quad)


# -- subcommands ------------------------------------------------------------

def cmd_check(args) -> tuple[RunReport, int]:
    eq = _load_equation(args)
    rep = _report(args, [args.equation])
    fired = False
    if criterion_sum(eq, args.tol_residual):
        rep.notes.append("criterion a: PASS; particular solution x=1")
        fired = True
    else:
        rep.notes.append("criterion a: FAIL")
    if eq.is_constant():
        roots = constant_solutions(eq.frozen())
        if roots:
            rep.notes.append("constant solutions: " + ", ".join(repr(k) for k in roots))
            fired = True
        else:
            rep.notes.append("constant solutions: none")
    found = find_particular_solution(eq, args.tol_residual)
    if found is not None:
        label, x = found
        fired = True
        rep.notes.append(f"particular solution ({label}): x={to_text(x)}")
        rep.add(f"residual of x={to_text(x)}", True, residual_max(eq, x))
    if not fired:
        rep.notes.append("no criterion fired")
    return rep, EXIT_OK


def cmd_transform(args) -> tuple[RunReport, int]:
    eq = _load_equation(args)
    a = read_matrix(args.matrix)
    rep = _report(args, [args.equation, args.matrix])
    domain = eq.domain.intersect(a.domain)
    det = det_residual(a, domain)
    rep.notes.append(f"unimodularity residual: {det:.6e}")
    if det > args.tol_det:
        raise InputError(f"matrix is not unimodular: max |det - 1| = {det:.6e} > {args.tol_det:g}")
    out = transform(eq, a)
    write_equation(out, args.out)
    rep.outputs.append(str(args.out))
    return rep, EXIT_OK


def cmd_reduce(args) -> tuple[RunReport, int]:
    eq = _load_equation(args)
    known = _split_known(args.known)
    if not known:
        raise InputError("reduce needs at least one --known solution")
    rep = _report(args, [args.equation])
    ok = True
    for i, x in enumerate(known, start=1):
        r = residual_max(eq, x)
        ok &= rep.add(f"x{i}={to_text(x)} is a solution", r <= args.tol_residual, r)
    if not ok:
        rep.notes.append("refusing to reduce with unverified solutions")
        return rep, EXIT_FAIL
    d = eq.domain
    if len(known) == 1:
        variant = args.variant or "shift"
        if variant == "shift":
            elem, targets = shift_by_solution(known[0], d), ("a0",)
        elif variant == "coshift":
            elem, targets = coshift_by_solution(known[0], d), ("a2",)
        else:
            raise InputError(f"variant {variant!r} needs two known solutions")
    elif len(known) == 2:
        variant = args.variant or "composed"
        if variant in ("shift", "coshift"):
            raise InputError(f"variant {variant!r} takes one known solution")
        elem, targets = two_solution_element(known[0], known[1], variant, d), ("a0", "a2")
    else:
        variant = "three"
        ordered = sorted(known, key=lambda x: eval_at(x, d.t_lo), reverse=True)
        elem, targets = three_solution_element(*ordered, domain=d), ("a0", "a1", "a2")
    rep.notes.append(f"variant: {variant}")
    rep.add("element is unimodular", det_residual(elem, d) <= args.tol_det, det_residual(elem, d))
    reduced = transform(eq, elem)
    for name, coeff in zip(("a0", "a1", "a2"), reduced.coefficients):
        m = grid_max(coeff, reduced.domain)
        if name in targets:
            rep.add(f"reduced {name} vanishes", m <= args.tol_residual, m)
        else:
            rep.notes.append(f"reduced {name} = {to_text(coeff)} (grid max {m:.6e})")
    write_equation(reduced, args.out)
    rep.outputs.append(str(args.out))
    if args.matrix_out:
        write_matrix(elem, args.matrix_out)
        rep.outputs.append(str(args.matrix_out))
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def _closed_form(args, eq: RiccatiEquation, known: list[Expr], rep: RunReport) -> Expr | None:
    t0, x0 = eq.domain.t_lo, args.x0
    cfg = _quad(args)
    if not known:
        return None
    for i, x in enumerate(known, start=1):
        r = residual_max(eq, x)
        if not r <= args.tol_residual:
            raise InputError(f"known solution x{i}={to_text(x)} has grid residual {r:.6e}")
    if len(known) == 1:
        rep.notes.append("pipeline: one known solution, two quadratures")
        if eval_at(known[0], t0) == x0:
            return known[0]
        return solve_one_known(eq, known[0], x0, t0, cfg, args.tol_residual)
    if len(known) == 2:
        rep.notes.append("pipeline: two known solutions, one quadrature")
        return solve_two_known(eq, known[0], known[1], x0, t0, cfg, args.tol_residual)
    rep.notes.append("pipeline: three known solutions, superposition")
    x1, x2, x3 = (eval_at(x, t0) for x in known)
    k = math.inf if x0 == x2 else cross_ratio(x0, x1, x2, x3)
    rep.notes.append(f"superposition constant k={k!r}")
    return superposition_expr(*known, k)


def cmd_solve(args) -> tuple[RunReport, int]:
    eq = _load_equation(args)
    known = _split_known(args.known)
    rep = _report(args, [args.equation])
    d = eq.domain
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PoleCrossingWarning)
        closed = _closed_form(args, eq, known, rep)
    for w in caught:
        rep.notes.append(f"notice: {w.message}")

    per = max(1, math.ceil(args.steps / (d.samples - 1)))
    steps = per * (d.samples - 1)
    traj = rk4_integrate(eq, args.x0, d.t_lo, d.t_hi, steps)
    rk4_grid = list(zip(traj.t[::per], traj.x[::per]))
    if traj.blowup_at is not None:
        rep.notes.append(f"RK4 blow-up at t={traj.blowup_at!r}")
        if rk4_grid[-1][0] != traj.t[-1]:
            rk4_grid.append((traj.t[-1], traj.x[-1]))
    rk4_out = Path(args.out) if closed is None else Path(args.rk4_out or _sibling(args.out))
    rk4_out.write_text(format_csv([t for t, _ in rk4_grid], [x for _, x in rk4_grid],
                                  traj.blowup_at))
    if closed is None:
        rep.outputs.append(str(rk4_out))
        return rep, EXIT_OK

    rep.notes.append(f"closed form: x = {to_text(closed)}")
    rep.notes.append(f"quadratures in closed form: {count_integrals(closed)}")
    ts = d.grid()
    xs = []
    for t in ts:
        try:
            xs.append(eval_at(closed, t))
        except DomainError:
            xs.append(math.inf)
    Path(args.out).write_text(format_csv(ts, xs))
    rep.outputs += [str(args.out), str(rk4_out)]
    deviation = 0.0
    for (t, xr), xc in zip(rk4_grid, xs):
        if math.isfinite(xr) and math.isfinite(xc):
            deviation = max(deviation, abs(xr - xc))
    rep.add("closed form agrees with RK4", deviation <= args.tol_agree, deviation)
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def _sibling(out) -> Path:
    p = Path(out)
    return p.with_name(p.stem + "_rk4" + p.suffix)


def cmd_verify(args) -> tuple[RunReport, int]:
    eq = _load_equation(args)
    try:
        x = parse_expr(args.candidate)
    except ParseError as exc:
        raise InputError(f"--candidate: {exc}") from None
    rep = _report(args, [args.equation])
    r = residual_max(eq, x)
    ok = rep.add(f"x={to_text(x)} is a solution", r <= args.tol_residual, r)
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_sample(args) -> tuple[RunReport, int]:
    eq = _load_equation(args)
    rep = _report(args, [args.equation])
    d = eq.domain
    if args.expr is not None:
        try:
            e = parse_expr(args.expr)
        except ParseError as exc:
            raise InputError(f"--expr: {exc}") from None
        ts = d.grid()
        xs = []
        for t in ts:
            try:
                xs.append(eval_at(e, t))
            except DomainError:
                xs.append(math.inf)
        Path(args.out).write_text(format_csv(ts, xs))
    else:
        if args.x0 is None:
            raise InputError("sample needs --x0 or --expr")
        traj = rk4_integrate(eq, args.x0, d.t_lo, d.t_hi, args.steps)
        Path(args.out).write_text(format_csv(traj.t, traj.x, traj.blowup_at))
        if traj.blowup_at is not None:
            rep.notes.append(f"RK4 blow-up at t={traj.blowup_at!r}")
    rep.outputs.append(str(args.out))
    return rep, EXIT_OK


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--grid", type=int, default=None, help="number of grid samples")
    shared.add_argument("--tol-residual", type=float, default=1e-7)
    shared.add_argument("--tol-quad", type=float, default=1e-10)
    shared.add_argument("--tol-agree", type=float, default=1e-6)
    shared.add_argument("--tol-det", type=float, default=1e-9)
    shared.add_argument("--t0", type=float, default=None)
    shared.add_argument("--t1", type=float, default=None)
    shared.add_argument("--report", default=None, help="also write the report to this file")

    p = argparse.ArgumentParser(prog="riccati-gauge",
                                description="Gauge-group tools for Riccati equations")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[shared], help="run integrability criteria")
    s.add_argument("equation")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("transform", parents=[shared], help="apply a group element")
    s.add_argument("equation")
    s.add_argument("matrix")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("reduce", parents=[shared], help="reduce with known solutions")
    s.add_argument("equation")
    s.add_argument("--known", action="append")
    s.add_argument("--variant", choices=["shift", "coshift", "composed", "standard", "alternative"])
    s.add_argument("--out", required=True)
    s.add_argument("--matrix-out", default=None)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", parents=[shared], help="closed-form solve checked against RK4")
    s.add_argument("equation")
    s.add_argument("--x0", type=float, required=True)
    s.add_argument("--known", action="append")
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--out", required=True)
    s.add_argument("--rk4-out", default=None)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", parents=[shared], help="residual of a candidate solution")
    s.add_argument("equation")
    s.add_argument("--candidate", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sample", parents=[shared], help="sample RK4 or an expression to CSV")
    s.add_argument("equation")
    s.add_argument("--x0", type=float, default=None)
    s.add_argument("--expr", default=None)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep, code = args.func(args)
    except (InputError, FormatError, ParseError, OrderingError, OSError,
            DomainError, QuadratureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rep.render()
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

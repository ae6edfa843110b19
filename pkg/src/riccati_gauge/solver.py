"""Quadrature-based closed forms, the superposition rule and an RK4 oracle."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .expr import (ONE, Const, DomainError, Expr, Func, Interval,
                   antiderivative_from, as_expr, eval_at, simplify)
from .quadrature import (DEFAULT_QUADRATURE, QuadratureConfig, QuadratureError,
                         adaptive_simpson)
from .riccati import RiccatiEquation, residual_max
from .sl2 import INF, GroupElement

__all__ = [
    "Trajectory", "QuadratureConfig", "QuadratureError", "PoleCrossingWarning",
    "BLOWUP", "quadrature", "rk4_integrate", "solve_linear", "solve_one_known",
    "solve_two_known", "superposition_eval", "superposition_expr",
    "cross_ratio", "pullback_solution",
]

BLOWUP = 1e12


class PoleCrossingWarning(RuntimeWarning):
    """A closed-form solution passes through the point at infinity."""


def quadrature(f: Expr, a: float, b: float,
               cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    f = as_expr(f)
    try:
        return adaptive_simpson(f.fn, a, b, cfg.abs_tol, cfg.max_depth)
    except (ZeroDivisionError, OverflowError) as exc:
        raise DomainError(str(exc)) from exc


@dataclass(frozen=True)
class Trajectory:
    """Fixed-step samples; after a blow-up the last x is ``inf`` and sampling stops."""

    t: tuple[float, ...]
    x: tuple[float, ...]
    step: float
    blowup_at: float | None = None

    def __len__(self):
        return len(self.t)

    @property
    def final(self) -> tuple[float, float]:
        return self.t[-1], self.x[-1]


def rk4_integrate(eq: RiccatiEquation, x0: float, t0: float, t1: float,
                  steps: int) -> Trajectory:
    """Classical fixed-step RK4; truncates once |x| exceeds 1e12."""
    if not t0 < t1:
        raise ValueError("rk4_integrate needs t0 < t1")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    f0, f1, f2 = (c.fn for c in eq.coefficients)

    def rhs(t, x):
        return f0(t) + f1(t) * x + f2(t) * x * x

    h = (t1 - t0) / steps
    ts, xs = [t0], [float(x0)]
    x = float(x0)
    try:
        for i in range(steps):
            t = t0 + i * h
            k1 = rhs(t, x)
            k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2)
            k4 = rhs(t + h, x + h * k3)
            x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t_next = t0 + (i + 1) * h
            if not math.isfinite(x) or abs(x) > BLOWUP:
                ts.append(t_next)
                xs.append(INF)
                return Trajectory(tuple(ts), tuple(xs), h, blowup_at=t_next)
            ts.append(t_next)
            xs.append(x)
    except (ZeroDivisionError, ValueError) as exc:
        raise DomainError(f"coefficient evaluation failed: {exc}") from exc
    return Trajectory(tuple(ts), tuple(xs), h)


def _require_solution(eq: RiccatiEquation, x: Expr, tol: float, name: str):
    r = residual_max(eq, x)
    if not r <= tol:
        raise ValueError(f"{name} is not a solution: grid residual {r:.3e} > {tol:.1e}")


def solve_linear(a1: Expr, a0: Expr, x0: float, t0: float,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Expr:
    """x = exp(int a1) (x0 + int a0 exp(-int a1)) for dx/dt = a1 x + a0."""
    phi = antiderivative_from(simplify(as_expr(a1)), t0, cfg)
    forcing = antiderivative_from(simplify(as_expr(a0) * Func("exp", -phi)), t0, cfg)
    return simplify(Func("exp", phi) * (Const(x0) + forcing))


def _warn_sign_change(e: Expr, domain: Interval, what: str):
    previous = None
    for t in domain.grid():
        try:
            v = eval_at(e, t)
        except DomainError:
            continue
        if previous is not None and (v == 0.0 or (v > 0) != (previous > 0)):
            warnings.warn(f"{what} near t={t!r}; the solution passes through infinity",
                          PoleCrossingWarning, stacklevel=3)
            return t
        previous = v
    return None


def solve_one_known(eq: RiccatiEquation, x1: Expr, x0: float, t0: float,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                    tol: float = 1e-7) -> Expr:
    """General solution from one particular solution, by two quadratures.

    With X = 2 x1 a2 + a1 and Phi = int X,
    u = exp(-Phi) (u0 + int a2 exp(Phi)), u0 = 1/(x1(t0) - x0), x = x1 - 1/u.
    """
    x1 = as_expr(x1)
    _require_solution(eq, x1, tol, "x1")
    gap = eval_at(x1, t0) - x0
    if gap == 0.0:
        raise ValueError("x0 equals x1(t0); the solution is x1 itself")
    X = simplify(Const(2.0) * x1 * eq.a2 + eq.a1)
    phi = antiderivative_from(X, t0, cfg)
    growth = antiderivative_from(simplify(eq.a2 * Func("exp", phi)), t0, cfg)
    u = simplify(Func("exp", -phi) * (Const(1.0 / gap) + growth))
    _warn_sign_change(u, eq.domain, "u crosses zero")
    return simplify(x1 - ONE / u)


def solve_two_known(eq: RiccatiEquation, x1: Expr, x2: Expr, x0: float, t0: float,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                    tol: float = 1e-7) -> Expr:
    """General solution from two particular solutions, by one quadrature.

    xbar = (x - x1)/(x - x2) obeys dxbar/dt = a2 (x1 - x2) xbar.
    """
    x1, x2 = as_expr(x1), as_expr(x2)
    _require_solution(eq, x1, tol, "x1")
    _require_solution(eq, x2, tol, "x2")
    for t in eq.domain.grid():
        if eval_at(x1, t) == eval_at(x2, t):
            raise ValueError(f"x1 and x2 coincide at t={t!r}")
    x1_0, x2_0 = eval_at(x1, t0), eval_at(x2, t0)
    if x0 == x1_0:
        return x1
    if x0 == x2_0:
        return x2
    xbar0 = (x0 - x1_0) / (x0 - x2_0)
    rate = antiderivative_from(simplify(eq.a2 * (x1 - x2)), t0, cfg)
    xbar = simplify(Const(xbar0) * Func("exp", rate))
    _warn_sign_change(simplify(ONE - xbar), eq.domain, "xbar crosses 1")
    return simplify((x1 - x2 * xbar) / (ONE - xbar))


def cross_ratio(x: float, x1: float, x2: float, x3: float) -> float:
    """k = ((x - x1)/(x - x2)) : ((x3 - x1)/(x3 - x2)); k(x1) = 0, k(x3) = 1."""
    try:
        return ((x - x1) / (x - x2)) / ((x3 - x1) / (x3 - x2))
    except ZeroDivisionError:
        raise ZeroDivisionError("cross-ratio undefined: two of the solutions coincide") from None


def superposition_eval(x1: float, x2: float, x3: float, k: float) -> float:
    """Solution with cross-ratio ``k``; k = 0 gives x1, k = 1 gives x3, k -> inf gives x2.

    ``k = inf`` is accepted and returns x2.
    """
    if math.isinf(k):
        return x2
    den = (x3 - x2) - k * (x3 - x1)
    if den == 0.0:
        return INF
    return (x1 * (x3 - x2) - k * x2 * (x3 - x1)) / den


def superposition_expr(x1: Expr, x2: Expr, x3: Expr, k: float) -> Expr:
    """Symbolic form of ``superposition_eval``; involves no quadrature."""
    x1, x2, x3 = (as_expr(x) for x in (x1, x2, x3))
    if math.isinf(k):
        return x2
    kk = Const(k)
    return simplify((x1 * (x3 - x2) - kk * x2 * (x3 - x1)) / ((x3 - x2) - kk * (x3 - x1)))


def pullback_solution(a: GroupElement, y: Expr) -> Expr:
    """x = (delta y - beta)/(alpha - gamma y): undo the change of variable ``a``."""
    al, be, ga, de = a.entries
    y = as_expr(y)
    x = simplify((de * y - be) / (al - ga * y))
    if a.domain is not None:
        _warn_sign_change(simplify(al - ga * y), a.domain, "pole of the inverse map")
    return x

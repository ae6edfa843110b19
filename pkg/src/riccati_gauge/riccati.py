"""Riccati equations dx/dt = a0 + a1 x + a2 x^2 and the gauge action on them.

All "vanishes identically" tests are grid tests on the equation's domain with
an explicit tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .expr import (ONE, Const, DomainError, Expr, Func, Interval, as_expr,
                   differentiate, eval_at, is_constant, simplify)
from .sl2 import (GroupElement, Sl2Vector, adjoint_exprs, adjoint_matrix,
                  cocycle_exprs)

__all__ = [
    "RiccatiEquation", "ConstRiccati", "DegenerateEquationError",
    "rhs_at", "transform", "transform_constant", "casimir",
    "constant_solutions", "criterion_sum", "criterion_constant_ratio",
    "criterion_strelchenya", "residual_max", "residual_on", "grid_max",
    "guess_particular_solution", "find_particular_solution",
]


class DegenerateEquationError(ValueError):
    pass


@dataclass(frozen=True)
class RiccatiEquation:
    a0: Expr
    a1: Expr
    a2: Expr
    domain: Interval = Interval()

    def __post_init__(self):
        for name in ("a0", "a1", "a2"):
            object.__setattr__(self, name, as_expr(getattr(self, name)))

    @classmethod
    def constant(cls, a0: float, a1: float, a2: float,
                 domain: Interval = Interval()) -> RiccatiEquation:
        return cls(Const(a0), Const(a1), Const(a2), domain)

    @property
    def coefficients(self) -> tuple[Expr, Expr, Expr]:
        return (self.a0, self.a1, self.a2)

    def coefficients_at(self, t: float) -> tuple[float, float, float]:
        return tuple(eval_at(c, t) for c in self.coefficients)

    def with_domain(self, domain: Interval) -> RiccatiEquation:
        return replace(self, domain=domain)

    def is_constant(self) -> bool:
        return all(is_constant(c) for c in self.coefficients)

    def frozen(self) -> ConstRiccati:
        """Constant-coefficient view; only meaningful when ``is_constant()``."""
        a0, a1, a2 = self.coefficients_at(self.domain.t_lo)
        return ConstRiccati(Sl2Vector(a2, a1, a0))


@dataclass(frozen=True)
class ConstRiccati:
    coeffs: Sl2Vector

    @classmethod
    def of(cls, a0: float, a1: float, a2: float) -> ConstRiccati:
        return cls(Sl2Vector(a2, a1, a0))


def rhs_at(eq: RiccatiEquation, t: float, x: float) -> float:
    a0, a1, a2 = eq.coefficients_at(t)
    return a0 + a1 * x + a2 * x * x


def transform(eq: RiccatiEquation, a: GroupElement) -> RiccatiEquation:
    """Equation satisfied by ``x' = (alpha x + beta) / (gamma x + delta)``.

    New coefficients are ``Ad(A) (a2, a1, a0) + theta(A)`` with the
    cocycle ``theta(A) = dA/dt A^-1``, all built symbolically.
    """
    domain = eq.domain.intersect(a.domain)
    ad = adjoint_exprs(a)
    theta = cocycle_exprs(a)
    old = (eq.a2, eq.a1, eq.a0)
    new = [simplify(row[0] * old[0] + row[1] * old[1] + row[2] * old[2] + th)
           for row, th in zip(ad, theta)]
    a2, a1, a0 = new
    return RiccatiEquation(a0, a1, a2, domain)


def transform_constant(v: Sl2Vector, m) -> Sl2Vector:
    m = np.asarray(m, dtype=float)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det - 1.0) >= 1e-12:
        raise ValueError(f"matrix is not unimodular (det - 1 = {det - 1.0:.3e})")
    return Sl2Vector.from_array(adjoint_matrix(m) @ v.as_array())


def casimir(v: Sl2Vector) -> float:
    return v.c1 * v.c1 - 4.0 * v.c0 * v.c2


def constant_solutions(c: ConstRiccati) -> list[float]:
    """Real roots of a2 k^2 + a1 k + a0, ascending; a double root appears once."""
    a, b, cc = c.coeffs.c2, c.coeffs.c1, c.coeffs.c0
    # exact power-of-two rescaling keeps the discriminant out of under/overflow
    shift = -math.frexp(max(abs(a), abs(b), abs(cc)))[1]
    a, b, cc = (math.ldexp(v, shift) for v in (a, b, cc))
    if a == 0.0:
        if b == 0.0:
            if cc == 0.0:
                raise DegenerateEquationError("degenerate equation")
            return []
        return [-cc / b]
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        return []
    if disc == 0.0:
        return [-b / (2.0 * a)]
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    roots = [q / a, cc / q] if q != 0.0 else [0.0, -b / a]
    return sorted(k for k in roots if math.isfinite(k))  # drop roots beyond float range


# -- grid checks ------------------------------------------------------------

def grid_max(e: Expr, domain: Interval) -> float:
    return max(abs(eval_at(e, t)) for t in domain.grid())


def residual_on(eq: RiccatiEquation, x: Expr, ts: Sequence[float]) -> np.ndarray:
    x = as_expr(x)
    dx = differentiate(x)
    out = []
    for t in ts:
        xv = eval_at(x, t)
        a0, a1, a2 = eq.coefficients_at(t)
        out.append(eval_at(dx, t) - a0 - a1 * xv - a2 * xv * xv)
    return np.array(out)


def residual_max(eq: RiccatiEquation, x: Expr, domain: Interval | None = None) -> float:
    """Grid maximum of |dx/dt - a0 - a1 x - a2 x^2| with dx/dt symbolic."""
    domain = domain or eq.domain
    return float(np.max(np.abs(residual_on(eq, x, domain.grid()))))


def criterion_sum(eq: RiccatiEquation, tol: float = 1e-7) -> bool:
    """a0 + a1 + a2 vanishes on the grid, i.e. x = 1 is a solution."""
    return grid_max(simplify(eq.a0 + eq.a1 + eq.a2), eq.domain) <= tol


def criterion_constant_ratio(eq: RiccatiEquation, c1: float, c2: float,
                             tol: float = 1e-7) -> bool:
    """c1^2 a2 + c1 c2 a1 + c2^2 a0 vanishes on the grid."""
    if c1 == 0.0 and c2 == 0.0:
        raise ValueError("c1 and c2 cannot both be zero")
    combo = simplify(Const(c1 * c1) * eq.a2 + Const(c1 * c2) * eq.a1 + Const(c2 * c2) * eq.a0)
    return grid_max(combo, eq.domain) <= tol


def criterion_strelchenya(eq: RiccatiEquation, alpha: Expr, beta: Expr,
                          tol: float = 1e-7) -> bool:
    """alpha^2 a2 + alpha beta a1 + beta^2 a0 = alpha' beta - alpha beta'.

    The defect is divided by beta^2, which makes it exactly the Riccati
    residual of x = alpha / beta.
    """
    alpha, beta = as_expr(alpha), as_expr(beta)
    ts = eq.domain.grid()
    for t in ts:
        if eval_at(alpha, t) == 0.0 or eval_at(beta, t) == 0.0:
            raise DomainError(f"alpha and beta must not vanish (t={t!r})")
    da, db = differentiate(alpha), differentiate(beta)
    defect = simplify(
        (alpha * alpha * eq.a2 + alpha * beta * eq.a1 + beta * beta * eq.a0
         - (da * beta - alpha * db)) / (beta * beta)
    )
    return grid_max(defect, eq.domain) <= tol


def _candidates(eq: RiccatiEquation):
    if eq.is_constant():
        try:
            roots = constant_solutions(eq.frozen())
        except DegenerateEquationError:
            roots = []
        for k in roots:
            yield "constant solution", Const(k)
    yield "criterion a", ONE
    a0, a1, a2 = eq.coefficients
    two_a2 = Const(2.0) * a2
    da0, da2 = differentiate(a0), differentiate(a2)
    murphy = [
        ("X = 0", Const(0.0)),
        ("X = -a2'/a2", -(da2 / a2)),
        ("X = a1 - 2 sqrt(a0 a2)", a1 - Const(2.0) * Func("sqrt", a0 * a2)),
        ("X = a0 - a2 + a0'/a0 - a2'/a2", a0 - a2 + da0 / a0 - da2 / a2),
    ]
    for label, X in murphy:
        yield label, simplify((X - a1) / two_a2)


def find_particular_solution(eq: RiccatiEquation,
                             tol: float = 1e-7) -> tuple[str, Expr] | None:
    """First candidate solution with grid residual <= tol, with its origin label."""
    for label, x in _candidates(eq):
        try:
            if residual_max(eq, x) <= tol:
                return label, x
        except DomainError:
            continue
    return None


def guess_particular_solution(eq: RiccatiEquation, tol: float = 1e-7) -> Expr | None:
    found = find_particular_solution(eq, tol)
    return None if found is None else found[1]

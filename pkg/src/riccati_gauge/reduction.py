"""Group elements built from known particular solutions.

Each constructor returns a ``GroupElement`` whose action on the equation
kills one or more coefficients:

* ``shift_by_solution``     x' = x - x1                 (a0' = 0)
* ``coshift_by_solution``   x' = x1 x / (x1 - x)        (a2' = 0)
* ``two_solution_element``  both a0'' and a2'' vanish
* ``three_solution_element`` all three vanish, x''' is the cross-ratio
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import (ONE, ZERO, Const, DomainError, Expr, Func, Interval,
                   antiderivative_from, as_expr, eval_at, simplify)
from .riccati import RiccatiEquation, residual_max, transform
from .sl2 import GroupElement, compose

__all__ = [
    "KnownSolutions", "OrderingError", "VARIANTS", "shift_by_solution",
    "coshift_by_solution", "two_solution_element", "three_solution_element",
    "scale_normalize_a1", "shift_normalize_a1", "murphy_X", "diagonal",
]

VARIANTS = ("composed", "standard", "alternative")


class OrderingError(ValueError):
    """Known solutions violate the ordering or separation a construction needs."""


def _check_nonvanishing(e: Expr, domain: Interval | None, what: str):
    if domain is None:
        return
    for t in domain.grid():
        if eval_at(e, t) == 0.0:
            raise DomainError(f"{what} (vanishes at t={t!r})")


def _check_positive(e: Expr, domain: Interval | None, what: str):
    if domain is None:
        return
    for t in domain.grid():
        if not eval_at(e, t) > 0.0:
            raise OrderingError(f"{what} (fails at t={t!r})")


@dataclass(frozen=True)
class KnownSolutions:
    x1: Expr
    x2: Expr | None = None
    x3: Expr | None = None
    verified_residual: tuple[float, ...] = ()

    @property
    def solutions(self) -> tuple[Expr, ...]:
        return tuple(x for x in (self.x1, self.x2, self.x3) if x is not None)

    @classmethod
    def verify(cls, eq: RiccatiEquation, *xs: Expr, tol: float = 1e-7) -> KnownSolutions:
        """Check residuals, pairwise separation and (for three) x1 > x2 > x3."""
        if not 1 <= len(xs) <= 3:
            raise ValueError("between one and three known solutions are supported")
        xs = tuple(as_expr(x) for x in xs)
        residuals = tuple(residual_max(eq, x) for x in xs)
        for i, r in enumerate(residuals, start=1):
            if not r <= tol:
                raise ValueError(f"x{i} is not a solution: grid residual {r:.3e} > {tol:.1e}")
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                _check_nonvanishing(simplify(xs[i] - xs[j]), eq.domain,
                                    f"x{i + 1} and x{j + 1} must differ")
        if len(xs) == 3:
            _check_positive(simplify(xs[0] - xs[1]), eq.domain, "ordering x1 > x2 violated")
            _check_positive(simplify(xs[1] - xs[2]), eq.domain, "ordering x2 > x3 violated")
        return cls(*xs, *([None] * (3 - len(xs))), verified_residual=residuals)


def diagonal(scale: Expr, domain: Interval | None = None) -> GroupElement:
    """diag(scale, 1/scale)."""
    scale = as_expr(scale)
    return GroupElement(scale, ZERO, ZERO, simplify(ONE / scale), domain)


def shift_by_solution(x1: Expr, domain: Interval | None = None) -> GroupElement:
    """[[1, -x1], [0, 1]]: x' = x - x1."""
    return GroupElement(ONE, simplify(-as_expr(x1)), ZERO, ONE, domain)


def coshift_by_solution(x1: Expr, domain: Interval | None = None) -> GroupElement:
    """[[1, 0], [-1/x1, 1]]: x' = x1 x / (x1 - x)."""
    x1 = as_expr(x1)
    try:
        _check_nonvanishing(x1, domain, "coshift requires nonvanishing solution")
    except DomainError as exc:
        raise DomainError(str(exc)) from None
    return GroupElement(ONE, ZERO, simplify(-(ONE / x1)), ONE, domain)


def _composed(x1: Expr, x2: Expr, domain) -> GroupElement:
    diff = simplify(x1 - x2)
    return GroupElement(ONE, simplify(-x1), simplify(ONE / diff),
                        simplify(-(x2 / diff)), domain)


def two_solution_element(x1: Expr, x2: Expr, variant: str = "composed",
                         domain: Interval | None = None) -> GroupElement:
    """Element sending both a0 and a2 to zero given two known solutions.

    ``composed``: [[1, -x1], [1/(x1-x2), -x2/(x1-x2)]], reduced a1 = 2 x1 a2 + a1.
    ``standard``: (x1-x2)^(-1/2) [[1, -x1], [1, -x2]], reduced a1 = a2 (x1 - x2);
    needs x1 > x2.
    ``alternative``: [[x1/(x1-x2), -x1 x2/(x1-x2)], [-1/x1, 1]],
    reduced a1 = 2 a0 / x1 + a1; needs x1 nonvanishing.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    x1, x2 = as_expr(x1), as_expr(x2)
    diff = simplify(x1 - x2)
    _check_nonvanishing(diff, domain, "x1 and x2 must differ")
    if variant == "composed":
        return _composed(x1, x2, domain)
    if variant == "standard":
        _check_positive(diff, domain, "standard variant needs x1 > x2")
        root = Func("sqrt", diff)
        return GroupElement(simplify(ONE / root), simplify(-(x1 / root)),
                            simplify(ONE / root), simplify(-(x2 / root)), domain)
    _check_nonvanishing(x1, domain, "alternative variant needs x1 nonvanishing")
    return GroupElement(simplify(x1 / diff), simplify(-(x1 * x2 / diff)),
                        simplify(-(ONE / x1)), ONE, domain)


def three_solution_element(x1: Expr, x2: Expr, x3: Expr,
                           domain: Interval | None = None) -> GroupElement:
    """Element reducing the equation to dx'''/dt = 0, needs x1 > x2 > x3.

    Entries are sqrt((x2-x3)/((x1-x3)(x1-x2))) * [[1, -x1], [q, -x2 q]] with
    q = (x1-x3)/(x2-x3); the Möbius map is the cross-ratio
    (x - x1)(x2 - x3) / ((x - x2)(x1 - x3)).
    """
    x1, x2, x3 = (as_expr(x) for x in (x1, x2, x3))
    d12, d13, d23 = simplify(x1 - x2), simplify(x1 - x3), simplify(x2 - x3)
    _check_positive(d12, domain, "ordering x1 > x2 violated")
    _check_positive(d23, domain, "ordering x2 > x3 violated")
    top = Func("sqrt", simplify(d23 / (d13 * d12)))
    bottom = Func("sqrt", simplify(d13 / (d23 * d12)))
    return GroupElement(top, simplify(-(x1 * top)), bottom, simplify(-(x2 * bottom)), domain)


def scale_normalize_a1(eq: RiccatiEquation) -> tuple[GroupElement, RiccatiEquation]:
    """diag(a, 1/a) with a = exp(-1/2 int a1): the new a1 vanishes."""
    phi = antiderivative_from(eq.a1, eq.domain.t_lo)
    half = simplify(Const(0.5) * phi)
    elem = GroupElement(Func("exp", simplify(-half)), ZERO, ZERO, Func("exp", half), eq.domain)
    if eq.a1 == ZERO:
        elem = GroupElement.identity(eq.domain)
    return elem, transform(eq, elem)


def shift_normalize_a1(eq: RiccatiEquation) -> tuple[GroupElement, RiccatiEquation]:
    """[[1, a1/(2 a2)], [0, 1]]: new a1 vanishes, new a0 = a0 + b' - a1^2/(4 a2)."""
    try:
        _check_nonvanishing(eq.a2, eq.domain, "shift normalisation needs a2 nonvanishing")
    except DomainError as exc:
        raise DomainError(str(exc)) from None
    beta = simplify(eq.a1 / (Const(2.0) * eq.a2))
    elem = GroupElement(ONE, beta, ZERO, ONE, eq.domain)
    return elem, transform(eq, elem)


def murphy_X(eq: RiccatiEquation, x1: Expr) -> Expr:
    """X = 2 x1 a2 + a1, the a1 coefficient left by ``shift_by_solution``."""
    return simplify(Const(2.0) * as_expr(x1) * eq.a2 + eq.a1)

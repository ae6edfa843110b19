"""Curves of unimodular 2x2 matrices acting on the completed real line.

A ``GroupElement`` holds four expressions ``alpha, beta, gamma, delta`` in t.
Lie algebra vectors are stored in the column order ``(c2, c1, c0)``, i.e. the
coefficients of ``(L2, L1, L0)`` with ``L0 = d/dx, L1 = x d/dx, L2 = x^2 d/dx``.
The point at infinity is represented by ``math.inf``; both signed infinities
denote the same point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .expr import (ONE, ZERO, Const, Expr, Func, Interval, as_expr,
                   differentiate, eval_at, simplify)

__all__ = [
    "GroupElement", "Sl2Vector", "INF", "POLE_EPS", "M0", "M1", "M2",
    "compose", "inverse", "mobius_apply", "mobius_expr", "cocycle_theta",
    "cocycle_exprs", "adjoint_matrix", "adjoint_exprs", "adjoint_matrix_at",
    "sl2_bracket", "check_unimodular", "det_residual", "to_matrix", "from_matrix",
]

INF = math.inf
POLE_EPS = 1e-13

M0 = np.array([[0.0, 1.0], [0.0, 0.0]])
M1 = np.array([[0.5, 0.0], [0.0, -0.5]])
M2 = np.array([[0.0, 0.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class Sl2Vector:
    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.c2, self.c1, self.c0)):
            raise ValueError(f"non-finite sl(2) coordinates {self}")

    @classmethod
    def from_array(cls, arr) -> Sl2Vector:
        c2, c1, c0 = (float(x) for x in arr)
        return cls(c2, c1, c0)

    def as_array(self) -> np.ndarray:
        return np.array([self.c2, self.c1, self.c0])

    def __add__(self, other: Sl2Vector) -> Sl2Vector:
        return Sl2Vector.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: Sl2Vector) -> Sl2Vector:
        return Sl2Vector.from_array(self.as_array() - other.as_array())


L0 = Sl2Vector(0.0, 0.0, 1.0)
L1 = Sl2Vector(0.0, 1.0, 0.0)
L2 = Sl2Vector(1.0, 0.0, 0.0)


def to_matrix(v: Sl2Vector) -> np.ndarray:
    """Traceless matrix ``c0*M0 + c1*M1 + c2*M2``."""
    return v.c0 * M0 + v.c1 * M1 + v.c2 * M2


def from_matrix(m) -> Sl2Vector:
    m = np.asarray(m, dtype=float)
    return Sl2Vector(-m[1, 0], m[0, 0] - m[1, 1], m[0, 1])


@dataclass(frozen=True)
class GroupElement:
    """A curve ``t -> [[alpha, beta], [gamma, delta]]`` in SL(2, R).

    ``domain=None`` means the entries are defined for every t of interest; a
    grid check then needs an explicit interval.
    """

    alpha: Expr
    beta: Expr
    gamma: Expr
    delta: Expr
    domain: Interval | None = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, as_expr(getattr(self, name)))

    @classmethod
    def identity(cls, domain: Interval | None = None) -> GroupElement:
        return cls(ONE, ZERO, ZERO, ONE, domain)

    @classmethod
    def constant(cls, matrix, domain: Interval | None = None) -> GroupElement:
        (a, b), (c, d) = np.asarray(matrix, dtype=float)
        return cls(Const(a), Const(b), Const(c), Const(d), domain)

    @classmethod
    def from_unnormalized(cls, alpha, beta, gamma, delta,
                          domain: Interval) -> GroupElement:
        """Divide the entries by sqrt(det); det must be positive on the grid."""
        entries = [as_expr(x) for x in (alpha, beta, gamma, delta)]
        det = simplify(entries[0] * entries[3] - entries[1] * entries[2])
        for t in domain.grid():
            if not eval_at(det, t) > 0.0:
                raise ValueError(f"determinant is not positive at t={t!r}")
        root = Func("sqrt", det)
        return cls(*(simplify(x / root) for x in entries), domain=domain)

    @property
    def entries(self) -> tuple[Expr, Expr, Expr, Expr]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    @cached_property
    def derivatives(self) -> tuple[Expr, Expr, Expr, Expr]:
        return tuple(differentiate(x) for x in self.entries)

    def at(self, t: float) -> np.ndarray:
        a, b, c, d = (eval_at(x, t) for x in self.entries)
        return np.array([[a, b], [c, d]])

    def rate_at(self, t: float) -> np.ndarray:
        a, b, c, d = (eval_at(x, t) for x in self.derivatives)
        return np.array([[a, b], [c, d]])

    def restrict(self, domain: Interval | None) -> GroupElement:
        return GroupElement(*self.entries, domain=domain)


def _common_domain(d1: Interval | None, d2: Interval | None) -> Interval | None:
    if d1 is None:
        return d2
    return d1.intersect(d2)


def compose(a2: GroupElement, a1: GroupElement) -> GroupElement:
    """Matrix product ``a2 @ a1`` (apply ``a1`` first)."""
    al2, be2, ga2, de2 = a2.entries
    al1, be1, ga1, de1 = a1.entries
    return GroupElement(
        simplify(al2 * al1 + be2 * ga1),
        simplify(al2 * be1 + be2 * de1),
        simplify(ga2 * al1 + de2 * ga1),
        simplify(ga2 * be1 + de2 * de1),
        _common_domain(a2.domain, a1.domain),
    )


def inverse(a: GroupElement) -> GroupElement:
    al, be, ga, de = a.entries
    return GroupElement(de, simplify(-be), simplify(-ga), al, a.domain)


def mobius_apply(a: GroupElement, x: float, t: float) -> float:
    """``(alpha x + beta) / (gamma x + delta)`` on the one-point compactified line."""
    al, be, ga, de = a.at(t).ravel()
    if math.isinf(x):
        if abs(ga) < POLE_EPS:
            return INF
        return al / ga
    den = ga * x + de
    if abs(den) < POLE_EPS * (1.0 + abs(x)):
        return INF
    return (al * x + be) / den


def mobius_expr(a: GroupElement, x: Expr) -> Expr:
    """Symbolic image of the curve ``x(t)`` under ``a``."""
    al, be, ga, de = a.entries
    x = as_expr(x)
    return simplify((al * x + be) / (ga * x + de))


def cocycle_exprs(a: GroupElement) -> tuple[Expr, Expr, Expr]:
    """Coordinates ``(c2, c1, c0)`` of ``dA/dt A^-1`` as expressions."""
    al, be, ga, de = a.entries
    dal, dbe, dga, dde = a.derivatives
    return (
        simplify(ga * dde - de * dga),
        simplify(de * dal - al * dde + be * dga - ga * dbe),
        simplify(al * dbe - be * dal),
    )


def cocycle_theta(a: GroupElement, t: float) -> Sl2Vector:
    return Sl2Vector(*(eval_at(c, t) for c in cocycle_exprs(a)))


def adjoint_matrix(m) -> np.ndarray:
    """Adjoint action of a constant unimodular 2x2 matrix on ``(c2, c1, c0)``."""
    (al, be), (ga, de) = np.asarray(m, dtype=float)
    return np.array([
        [de * de, -de * ga, ga * ga],
        [-2.0 * be * de, al * de + be * ga, -2.0 * al * ga],
        [be * be, -al * be, al * al],
    ])


def adjoint_matrix_at(a: GroupElement, t: float) -> np.ndarray:
    return adjoint_matrix(a.at(t))


def adjoint_exprs(a: GroupElement) -> tuple[tuple[Expr, ...], ...]:
    """Symbolic 3x3 adjoint matrix, row-major."""
    al, be, ga, de = a.entries
    two = Const(2.0)
    rows = (
        (de * de, -(de * ga), ga * ga),
        (-(two * be * de), al * de + be * ga, -(two * al * ga)),
        (be * be, -(al * be), al * al),
    )
    return tuple(tuple(simplify(x) for x in row) for row in rows)


def sl2_bracket(v: Sl2Vector, w: Sl2Vector) -> Sl2Vector:
    """Bracket with [L0, L1] = L0, [L0, L2] = 2 L1, [L1, L2] = L2."""
    return Sl2Vector(
        v.c1 * w.c2 - v.c2 * w.c1,
        2.0 * (v.c0 * w.c2 - v.c2 * w.c0),
        v.c0 * w.c1 - v.c1 * w.c0,
    )


def det_residual(a: GroupElement, domain: Interval | None = None) -> float:
    """Grid maximum of ``|alpha delta - beta gamma - 1|``."""
    domain = domain or a.domain
    if domain is None:
        raise ValueError("unimodularity check needs a domain")
    worst = 0.0
    for t in domain.grid():
        m = a.at(t)
        worst = max(worst, abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] - 1.0))
    return worst


def check_unimodular(a: GroupElement, tol: float = 1e-9,
                     domain: Interval | None = None) -> bool:
    return det_residual(a, domain) <= tol

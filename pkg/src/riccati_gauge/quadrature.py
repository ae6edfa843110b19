"""Adaptive Simpson quadrature on plain callables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


class QuadratureError(ArithmeticError):
    """Raised when adaptive refinement hits the depth limit without converging."""


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    max_depth: int = 40

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")


DEFAULT_QUADRATURE = QuadratureConfig()


def _simpson(fa, fm, fb, a, b):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    max_depth: int = 40,
) -> float:
    """Integrate ``f`` over [a, b] with Richardson-corrected adaptive Simpson.

    Each bisection halves the local tolerance. A panel that reaches
    ``max_depth`` is accepted if its own correction is below ``abs_tol``
    (integrable endpoint singularities such as sqrt at 0 end up here);
    otherwise ``QuadratureError`` is raised. Reversed limits give the negated
    integral.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, abs_tol, max_depth)
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = _simpson(fa, fm, fb, a, b)
    return _refine(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, abs_tol)


def _refine(f, a, b, fa, fm, fb, whole, tol, depth, budget):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0 or lm in (a, m) or rm in (m, b):
        if abs(delta) <= budget:
            return left + right + delta / 15.0
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a!r}, {b!r}] "
            f"(|delta|={abs(delta):.3e}, tol={tol:.3e})"
        )
    return (_refine(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, budget)
            + _refine(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, budget))

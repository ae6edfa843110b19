"""Expression trees in one real variable ``t``.

Nodes are immutable. Each node compiles lazily to a plain Python closure so
repeated evaluation on sample grids does not re-dispatch over the tree.
``Integral(f, t0)`` stands for the running integral of ``f`` from ``t0`` to
``t`` and is evaluated numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, adaptive_simpson

__all__ = [
    "Expr", "Const", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Func",
    "Integral", "Interval", "DomainError", "T", "ZERO", "ONE", "FUNCTIONS",
    "as_expr", "eval_at", "differentiate", "antiderivative_from", "simplify",
    "is_constant", "count_integrals", "sample",
]

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")

# Integral nodes split [t0, t] into fixed-width pieces; full pieces are
# memoised per node, so cached and uncached evaluation agree bit for bit.
PIECE_WIDTH = 0.0625


class DomainError(ValueError):
    """An expression was evaluated outside its natural domain."""


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()
    precedence = 5

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __rpow__(self, other):
        return Pow(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __call__(self, t: float) -> float:
        return eval_at(self, t)

    @property
    def fn(self) -> Callable[[float], float]:
        """Compiled evaluator (raw: no error translation, no finiteness check)."""
        compiled = self.__dict__.get("_fn")
        if compiled is None:
            compiled = self._compile()
            object.__setattr__(self, "_fn", compiled)
        return compiled

    def _compile(self) -> Callable[[float], float]:  # pragma: no cover
        raise NotImplementedError

    def children(self) -> tuple[Expr, ...]:
        return ()

    def __str__(self):
        return to_text(self)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Const(float(value))
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    @property
    def precedence(self):
        return 3 if math.copysign(1.0, self.value) < 0 else 5

    def _compile(self):
        v = self.value
        return lambda t: v

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True, repr=False)
class Var(Expr):
    def _compile(self):
        return lambda t: t

    def __repr__(self):
        return "T"


T = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    precedence = 3

    def children(self):
        return (self.arg,)

    def _compile(self):
        f = self.arg.fn
        return lambda t: -f(t)


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr
    precedence = 1
    symbol = "+"

    def children(self):
        return (self.left, self.right)

    def _compile(self):
        f, g = self.left.fn, self.right.fn
        return lambda t: f(t) + g(t)


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr
    precedence = 1
    symbol = "-"

    def children(self):
        return (self.left, self.right)

    def _compile(self):
        f, g = self.left.fn, self.right.fn
        return lambda t: f(t) - g(t)


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr
    precedence = 2
    symbol = "*"

    def children(self):
        return (self.left, self.right)

    def _compile(self):
        f, g = self.left.fn, self.right.fn
        return lambda t: f(t) * g(t)


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr
    precedence = 2
    symbol = "/"

    def children(self):
        return (self.left, self.right)

    def _compile(self):
        f, g = self.left.fn, self.right.fn

        def div(t):
            d = g(t)
            if d == 0.0:
                raise DomainError(f"division by zero at t={t!r}")
            return f(t) / d

        return div


def _int_power(x: float, n: int) -> float:
    if n < 0:
        if x == 0.0:
            raise DomainError("zero raised to a negative power")
        return 1.0 / _int_power(x, -n)
    if n > 1024:
        return math.pow(x, n)
    r = 1.0
    for _ in range(n):
        r *= x
    return r


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr
    precedence = 4

    def children(self):
        return (self.base, self.exponent)

    def _compile(self):
        fb = self.base.fn
        if isinstance(self.exponent, Const) and self.exponent.value.is_integer():
            n = int(self.exponent.value)
            return lambda t: _int_power(fb(t), n)
        fe = self.exponent.fn

        def power(t):
            b, e = fb(t), fe(t)
            if e.is_integer():
                return _int_power(b, int(e))
            if b <= 0.0:
                raise DomainError(f"non-integer power of non-positive base {b!r} at t={t!r}")
            return math.pow(b, e)

        return power


def _checked_log(x):
    if x <= 0.0:
        raise DomainError(f"log of non-positive value {x!r}")
    return math.log(x)


def _checked_sqrt(x):
    if x < 0.0:
        raise DomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


_UNARY = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": _checked_log,
    "sqrt": _checked_sqrt,
}


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in _UNARY:
            raise ValueError(f"unknown function {self.name!r}")

    def children(self):
        return (self.arg,)

    def _compile(self):
        op, f = _UNARY[self.name], self.arg.fn
        return lambda t: op(f(t))


@dataclass(frozen=True)
class Integral(Expr):
    """Running integral of ``integrand`` from ``lower`` to ``t``."""

    integrand: Expr
    lower: float
    config: QuadratureConfig = field(default=DEFAULT_QUADRATURE, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lower", float(self.lower))
        # Pieces are pure functions of the node, so concurrent writers can only
        # store identical values; a plain dict is enough.
        object.__setattr__(self, "_pieces", {})

    def children(self):
        return (self.integrand,)

    def _piece(self, f, key):
        cached = self._pieces.get(key)
        if cached is None:
            direction, j = key
            a = self.lower + direction * j * PIECE_WIDTH
            b = self.lower + direction * (j + 1) * PIECE_WIDTH
            cached = adaptive_simpson(
                f, a, b, self.config.abs_tol * PIECE_WIDTH, self.config.max_depth
            )
            self._pieces[key] = cached
        return cached

    def _compile(self):
        f = self.integrand.fn
        lower = self.lower
        cfg = self.config

        def integral(t):
            span = t - lower
            if span == 0.0:
                return 0.0
            direction = 1 if span > 0 else -1
            n = int(abs(span) // PIECE_WIDTH)
            parts = [self._piece(f, (direction, j)) for j in range(n)]
            start = lower + direction * n * PIECE_WIDTH
            if start != t:
                parts.append(
                    adaptive_simpson(f, start, t, cfg.abs_tol * abs(t - start), cfg.max_depth)
                )
            return math.fsum(parts)

        return integral


@dataclass(frozen=True)
class Interval:
    t_lo: float = 0.0
    t_hi: float = 1.0
    samples: int = 201

    def __post_init__(self):
        if not self.t_lo < self.t_hi:
            raise ValueError(f"empty interval [{self.t_lo}, {self.t_hi}]")
        if self.samples < 2:
            raise ValueError("an interval needs at least 2 samples")

    def grid(self) -> list[float]:
        return np.linspace(self.t_lo, self.t_hi, self.samples).tolist()

    def intersect(self, other: Interval | None) -> Interval:
        if other is None:
            return self
        lo, hi = max(self.t_lo, other.t_lo), min(self.t_hi, other.t_hi)
        if not lo < hi:
            raise ValueError(f"domains [{self.t_lo}, {self.t_hi}] and "
                             f"[{other.t_lo}, {other.t_hi}] do not overlap")
        return Interval(lo, hi, max(self.samples, other.samples))

    def __contains__(self, t: float) -> bool:
        return self.t_lo <= t <= self.t_hi


def eval_at(e: Expr, t: float) -> float:
    """Evaluate ``e`` at ``t``; raises DomainError on any non-finite result."""
    try:
        value = e.fn(float(t))
    except DomainError:
        raise
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise DomainError(f"{exc} at t={t!r}") from exc
    if not math.isfinite(value):
        raise DomainError(f"non-finite value {value!r} at t={t!r}")
    return value


def sample(e: Expr, ts: Iterable[float]) -> np.ndarray:
    return np.array([eval_at(e, t) for t in ts])


def antiderivative_from(e: Expr, t0: float, config: QuadratureConfig | None = None) -> Integral:
    return Integral(as_expr(e), t0, config or DEFAULT_QUADRATURE)


def is_constant(e: Expr) -> bool:
    """True when ``e`` is structurally free of ``t`` (integrals count as varying)."""
    if isinstance(e, (Var, Integral)):
        return False
    return all(is_constant(c) for c in e.children())


def count_integrals(e: Expr) -> int:
    """Number of distinct Integral nodes (shared subtrees counted once)."""
    seen: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Integral):
            seen.add(id(node))
        stack.extend(node.children())
    return len(seen)


# -- simplification ---------------------------------------------------------

def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


def _fold(node: Expr) -> Expr:
    try:
        return Const(eval_at(node, 0.0))
    except DomainError:
        return node


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return _neg(b)
    if a == b:
        return ZERO
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    if _is(a, -1.0):
        return _neg(b)
    if _is(b, -1.0):
        return _neg(a)
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(Div(a, b))
    if _is(b, 1.0):
        return a
    if _is(a, 0.0):
        return ZERO
    return Div(a, b)


def _pow(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(Pow(a, b))
    if _is(b, 1.0):
        return a
    if _is(b, 0.0) or _is(a, 1.0):
        return ONE
    return Pow(a, b)


def _func(name: str, a: Expr) -> Expr:
    node = Func(name, a)
    return _fold(node) if isinstance(a, Const) else node


def simplify(e: Expr) -> Expr:
    """Constant folding and 0/1 identity elimination.

    Unchanged subtrees are returned as the same objects, which keeps the
    quadrature caches of shared Integral nodes alive.
    """
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Integral):
        body = simplify(e.integrand)
        if body is e.integrand or body == e.integrand:
            return e
        if _is(body, 0.0):
            return ZERO
        return Integral(body, e.lower, e.config)
    if isinstance(e, Neg):
        a = simplify(e.arg)
        out = _neg(a)
    elif isinstance(e, Func):
        a = simplify(e.arg)
        if a is e.arg and not isinstance(a, Const):
            return e
        out = _func(e.name, a)
    else:
        a, b = (simplify(c) for c in e.children())
        builder = {Add: _add, Sub: _sub, Mul: _mul, Div: _div, Pow: _pow}[type(e)]
        out = builder(a, b)
    if type(out) is type(e) and all(x is y for x, y in zip(out.children(), e.children())):
        return e
    return out


# -- differentiation --------------------------------------------------------

def _d(e: Expr) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Integral):
        return e.integrand
    if isinstance(e, Neg):
        return _neg(_d(e.arg))
    if isinstance(e, Add):
        return _add(_d(e.left), _d(e.right))
    if isinstance(e, Sub):
        return _sub(_d(e.left), _d(e.right))
    if isinstance(e, Mul):
        u, v = e.left, e.right
        return _add(_mul(_d(u), v), _mul(u, _d(v)))
    if isinstance(e, Div):
        u, v = e.left, e.right
        du, dv = _d(u), _d(v)
        if _is(dv, 0.0):
            return _div(du, v)
        return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, Const(2.0)))
    if isinstance(e, Pow):
        u, v = e.base, e.exponent
        du = _d(u)
        if is_constant(v):
            return _mul(_mul(v, _pow(u, _sub(v, ONE))), du)
        dv = _d(v)
        inner = _add(_mul(dv, _func("log", u)), _div(_mul(v, du), u))
        return _mul(e, inner)
    if isinstance(e, Func):
        u = e.arg
        du = _d(u)
        if e.name == "sin":
            outer = _func("cos", u)
        elif e.name == "cos":
            outer = _neg(_func("sin", u))
        elif e.name == "tan":
            outer = _add(ONE, _pow(_func("tan", u), Const(2.0)))
        elif e.name == "exp":
            outer = e
        elif e.name == "log":
            return _div(du, u)
        else:
            return _div(du, _mul(Const(2.0), e))
        return _mul(outer, du)
    raise TypeError(f"unknown node {type(e).__name__}")


def differentiate(e: Expr) -> Expr:
    """Exact derivative with respect to ``t``."""
    return simplify(_d(e))


# -- printing ---------------------------------------------------------------

def _wrap(e: Expr, parens: bool) -> str:
    s = to_text(e)
    return f"({s})" if parens else s


def to_text(e: Expr) -> str:
    """Render ``e`` in the parser's grammar (re-parsing gives the same values)."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, e.arg.precedence < 3)
    if isinstance(e, (Add, Sub, Mul, Div)):
        p = e.precedence
        left = _wrap(e.left, e.left.precedence < p)
        right = _wrap(e.right, e.right.precedence <= p)
        return f"{left} {e.symbol} {right}"
    if isinstance(e, Pow):
        base = _wrap(e.base, e.base.precedence < 5)
        exponent = _wrap(e.exponent, e.exponent.precedence < 3)
        return f"{base}^{exponent}"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    if isinstance(e, Integral):
        return f"integral({to_text(e.integrand)}, {e.lower!r})"
    raise TypeError(f"unknown node {type(e).__name__}")

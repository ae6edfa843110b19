"""Random expression, group-element and equation generators shared by tests."""

import math
import random

import numpy as np
from hypothesis import strategies as st

from riccati_gauge.expr import (ONE, ZERO, Add, Const, Div, Func, Mul, Neg,
                                Pow, Sub, T)
from riccati_gauge.sl2 import GroupElement, compose

# Every generated expression is finite and smooth for |t| <= 1.5.
SAFE_T = (-1.0, 1.0)


def _wrap_unary(kind, u):
    if kind == "neg":
        return Neg(u)
    if kind == "sin":
        return Func("sin", u)
    if kind == "cos":
        return Func("cos", u)
    if kind == "exp":
        return Func("exp", Func("sin", u))
    if kind == "tan":
        return Func("tan", Mul(Const(0.9), Func("sin", u)))
    if kind == "log":
        return Func("log", Add(Const(2.0), Func("sin", u)))
    if kind == "sqrt":
        return Func("sqrt", Add(ONE, Mul(u, u)))
    if kind == "square":
        return Pow(Func("sin", u), Const(2.0))
    if kind == "root":
        return Pow(Add(Const(1.5), Func("cos", u)), Const(0.5))
    raise ValueError(kind)


UNARY_KINDS = ("neg", "sin", "cos", "exp", "tan", "log", "sqrt", "square", "root")
BINARY_KINDS = ("add", "sub", "mul", "div")


def _wrap_binary(kind, u, v):
    if kind == "add":
        return Add(u, v)
    if kind == "sub":
        return Sub(u, v)
    if kind == "mul":
        return Mul(u, v)
    if kind == "div":
        return Div(u, Add(Const(1.5), Func("sin", v)))
    raise ValueError(kind)


def random_expr(rng: random.Random, depth: int = 3):
    """Seeded random smooth expression (used where exact counts matter)."""
    if depth == 0 or rng.random() < 0.2:
        return T if rng.random() < 0.6 else Const(round(rng.uniform(-2, 2), 3))
    if rng.random() < 0.5:
        return _wrap_unary(rng.choice(UNARY_KINDS), random_expr(rng, depth - 1))
    return _wrap_binary(rng.choice(BINARY_KINDS),
                        random_expr(rng, depth - 1), random_expr(rng, depth - 1))


leaves = st.one_of(st.just(T), st.floats(-2, 2, allow_nan=False).map(lambda v: Const(round(v, 3))))


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from(UNARY_KINDS), children).map(lambda p: _wrap_unary(*p)),
        st.tuples(st.sampled_from(BINARY_KINDS), children, children).map(lambda p: _wrap_binary(*p)),
    )


safe_exprs = st.recursive(leaves, _extend, max_leaves=8)


def upper(f):
    return GroupElement(ONE, f, ZERO, ONE)


def lower(g):
    return GroupElement(ONE, ZERO, g, ONE)


def diag_exp(h):
    return GroupElement(Func("exp", h), ZERO, ZERO, Func("exp", Neg(h)))


def scaled(e, c):
    return Mul(Const(c), e)


def random_element(rng: random.Random, depth: int = 2):
    """Exactly unimodular curve: product of shear and diagonal factors."""
    f, g, h = (scaled(random_expr(rng, depth), 0.5) for _ in range(3))
    factors = [upper(f), lower(g), diag_exp(h)]
    rng.shuffle(factors)
    a = factors[0]
    for b in factors[1:]:
        a = compose(a, b)
    return a


@st.composite
def elements(draw):
    f, g, h = (scaled(draw(safe_exprs), 0.5) for _ in range(3))
    order = draw(st.permutations([upper(f), lower(g), diag_exp(h)]))
    return compose(order[0], compose(order[1], order[2]))


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random constant unimodular matrix as a product of elementary factors."""
    a, b, c = rng.uniform(-scale, scale, size=3)
    s = math.exp(rng.uniform(-scale, scale))
    m = np.array([[1.0, a], [0.0, 1.0]]) @ np.array([[1.0, 0.0], [b, 1.0]])
    m = m @ np.array([[s, 0.0], [0.0, 1.0 / s]]) @ np.array([[1.0, c], [0.0, 1.0]])
    return m


def central_difference(f, t, h=1e-5):
    return (f(t + h) - f(t - h)) / (2.0 * h)

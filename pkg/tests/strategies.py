"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

import sympy as sp
from hypothesis import strategies as st

from walkerlie.jetcalc import VectorField
from walkerlie.symexpr import Expr, exp, jet, ln, param, parse
from walkerlie.symexpr import coord

SMALL = st.fractions(min_value=-4, max_value=4, max_denominator=3)
NONZERO = SMALL.filter(bool)

BASE_NAMES = ("x", "t", "a", "b", "c")
JET1 = ("a", "b", "c", "a_x", "a_t", "b_x", "b_t", "c_x", "c_t")


def leaf_names(names):
    return st.sampled_from(names)


@st.composite
def trees(draw, names=("x", "t", "a", "b", "r1"), depth=3, transcendental=False):
    """Random expression as a nested tuple; evaluated by ``to_expr`` / ``to_sympy``."""
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        if draw(st.booleans()):
            return ("num", draw(SMALL))
        return ("sym", draw(leaf_names(names)))
    ops = ["+", "-", "*", "/", "^"]
    if transcendental:
        ops += ["exp", "ln"]
    op = draw(st.sampled_from(ops))
    if op == "^":
        return ("^", draw(trees(names, depth - 1, transcendental)), draw(st.integers(0, 3)))
    if op in ("exp", "ln"):
        # linear arguments keep exp/ln atoms simple
        return (op, ("+", ("*", ("num", draw(NONZERO)), ("sym", draw(leaf_names(names)))), ("num", draw(SMALL))))
    return (op, draw(trees(names, depth - 1, transcendental)), draw(trees(names, depth - 1, transcendental)))


def to_expr(tree, frames=None) -> Expr:
    kind = tree[0]
    if kind == "num":
        return Expr.const(tree[1])
    if kind == "sym":
        return parse(tree[1])
    if kind == "^":
        return to_expr(tree[1]) ** tree[2]
    if kind == "exp":
        return exp(to_expr(tree[1]))
    if kind == "ln":
        return ln(to_expr(tree[1]))
    l, r = to_expr(tree[1]), to_expr(tree[2])
    return {"+": l + r, "-": l - r, "*": l * r}[kind] if kind != "/" else l / r


def to_sympy(tree):
    kind = tree[0]
    if kind == "num":
        return sp.Rational(tree[1].numerator, tree[1].denominator)
    if kind == "sym":
        return sp.Symbol(tree[1])
    if kind == "^":
        return to_sympy(tree[1]) ** tree[2]
    if kind == "exp":
        return sp.exp(to_sympy(tree[1]))
    if kind == "ln":
        return sp.log(to_sympy(tree[1]))
    l, r = to_sympy(tree[1]), to_sympy(tree[2])
    return {"+": l + r, "-": l - r, "*": l * r, "/": l / r}[kind]


def from_sympy(e, extra=None) -> Expr:
    """Read a sympy expression back through the kernel's own grammar."""
    text = str(e).replace("**", "^").replace("log(", "ln(")
    return parse(text, functions=extra)


@st.composite
def polynomials(draw, names=BASE_NAMES, degree=2, terms=4):
    out = Expr.const(0)
    for _ in range(draw(st.integers(0, terms))):
        mono = Expr.const(draw(NONZERO))
        for _ in range(draw(st.integers(0, degree))):
            mono = mono * parse(draw(st.sampled_from(names)))
        out = out + mono
    return out


@st.composite
def point_fields(draw, degree=1, terms=3):
    return VectorField(*(draw(polynomials(BASE_NAMES, degree, terms)) for _ in range(5)))


@st.composite
def rational_vectors(draw, n=7):
    v = [draw(SMALL) for _ in range(n)]
    if not any(v):
        v[draw(st.integers(0, n - 1))] = Fraction(1)
    return v


__all__ = [
    "BASE_NAMES", "JET1", "NONZERO", "SMALL", "coord", "from_sympy", "jet", "param",
    "point_fields", "polynomials", "rational_vectors", "to_expr", "to_sympy", "trees",
]

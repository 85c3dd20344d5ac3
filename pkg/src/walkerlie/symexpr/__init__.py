"""Exact symbolic expression kernel."""

from .expr import (
    COORD, EXP, JET, LN, ONE, PARAM, X4, XT, ZERO,
    Atom, Expr, coord, exp, jet, laurent_terms, ln, mono_expr, param, primitive, symbol,
)
from .parser import ParseError, parse

__all__ = [
    "COORD", "EXP", "JET", "LN", "ONE", "PARAM", "X4", "XT", "ZERO",
    "Atom", "Expr", "ParseError", "coord", "exp", "jet", "laurent_terms", "ln",
    "mono_expr", "param", "parse", "primitive", "symbol", "differentiate", "substitute", "is_zero",
]


def differentiate(e: Expr, v: Atom) -> Expr:
    return e.diff(v)


def substitute(e: Expr, bindings, simultaneous: bool = False) -> Expr:
    return e.subs(bindings, simultaneous=simultaneous)


def is_zero(e: Expr) -> bool:
    return e.is_zero()

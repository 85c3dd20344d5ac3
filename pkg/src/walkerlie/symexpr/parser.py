"""Precedence-climbing parser for the ASCII expression grammar.

Identifiers ``[A-Za-z][A-Za-z0-9_]*``; integer literals (``7/3`` is ordinary
division); binary ``+ - * / ^`` with ``^`` right-associative and restricted
to integer exponents; unary ``+``/``-``; calls ``ln(...)`` and ``exp(...)``.
Dependent variables and their jets use underscore notation: ``a_xt``,
``f_ww``, ``a_13`` (frames with multi-letter coordinates use 1-based digits).
"""

from __future__ import annotations

import re
from typing import Mapping

from .expr import DEFAULT_FRAMES, Expr, exp, jet, ln, symbol

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")

# binding power and associativity of binary operators
_BINARY = {
    "+": (10, "left"),
    "-": (10, "left"),
    "*": (20, "left"),
    "/": (20, "left"),
    "^": (40, "right"),
}
_UNARY_POWER = 30
_FUNCTIONS = {"ln": ln, "exp": exp}


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))
        self.pos = pos


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _resolve(name: str, frames: Mapping, pos: int, text: str):
    if name in frames:
        return jet(name, (), frames[name])
    if "_" in name:
        dep, _, suffix = name.partition("_")
        if dep in frames:
            frame = frames[dep]
            counts = [0] * len(frame)
            letters = all(len(v) == 1 for v in frame)
            for ch in suffix:
                if letters and ch in frame:
                    counts[frame.index(ch)] += 1
                elif not letters and ch.isdigit() and 1 <= int(ch) <= len(frame):
                    counts[int(ch) - 1] += 1
                else:
                    raise ParseError(f"bad derivative suffix {suffix!r} for {dep}", pos, text)
            return jet(dep, counts, frame)
    return symbol(name)


class _Parser:
    def __init__(self, text: str, frames: Mapping):
        self.text = text
        self.frames = frames
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value or tok[0] == "end":
            raise ParseError(f"expected {value!r}", tok[2], self.text)
        return tok

    def parse(self) -> Expr:
        e = self.expression(0)
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return e

    def expression(self, min_power: int) -> Expr:
        lhs = self.unary()
        while True:
            kind, op, pos = self.peek()
            if kind != "op" or op not in _BINARY:
                return lhs
            power, assoc = _BINARY[op]
            if power < min_power:
                return lhs
            self.take()
            if op == "^":
                rhs = self.expression(power if assoc == "right" else power + 1)
                lhs = self._power(lhs, rhs, pos)
                continue
            rhs = self.expression(power + 1)
            if op == "+":
                lhs = lhs + rhs
            elif op == "-":
                lhs = lhs - rhs
            elif op == "*":
                lhs = lhs * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", pos, self.text)
                lhs = lhs / rhs

    def _power(self, base: Expr, exponent: Expr, pos: int) -> Expr:
        if not exponent.is_constant() or exponent.as_rational().denominator != 1:
            raise ParseError("exponent must be an integer", pos, self.text)
        n = exponent.as_rational().numerator
        if n < 0 and base.is_zero():
            raise ParseError("division by zero", pos, self.text)
        return base ** n

    def unary(self) -> Expr:
        kind, op, pos = self.peek()
        if kind == "op" and op in "+-":
            self.take()
            operand = self.expression(_UNARY_POWER)
            return -operand if op == "-" else operand
        return self.primary()

    def primary(self) -> Expr:
        kind, value, pos = self.take()
        if kind == "num":
            return Expr.const(int(value))
        if kind == "ident":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                fn = _FUNCTIONS.get(value)
                if fn is None:
                    raise ParseError(f"unknown function {value!r}", pos, self.text)
                self.take()
                arg = self.expression(0)
                self.expect(")")
                try:
                    return fn(arg)
                except ValueError as exc:
                    raise ParseError(str(exc), pos, self.text) from None
            return Expr.of(_resolve(value, self.frames, pos, self.text))
        if kind == "op" and value == "(":
            e = self.expression(0)
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected {value!r}", pos, self.text)


def parse(text: str, functions: Mapping | None = None) -> Expr:
    """Parse ``text`` into a canonical :class:`Expr`.

    ``functions`` maps extra dependent-variable names to their frames, e.g.
    ``{"f": ("t",)}`` makes ``f`` an arbitrary function of ``t`` with jets
    ``f_t``, ``f_tt``; it overrides the defaults (``a, b, c`` over ``(x, t)``,
    ``f, h, k`` over ``(w,)``).
    """
    frames = dict(DEFAULT_FRAMES)
    if functions:
        frames.update({k: tuple(v) for k, v in functions.items()})
    return _Parser(text, frames).parse()


__all__ = ["ParseError", "parse"]

"""One-parameter groups of affine point symmetries and their action on solutions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .jetcalc import BASE, VectorField
from .liealg import S, generators
from .symexpr import JET, ONE, ZERO, Expr, coord, param, parse

X, T = coord("x"), coord("t")
NAMES = ("x", "t", "a", "b", "c")


@dataclass(frozen=True)
class AffineFlow:
    """``(x, t, a, b, c) -> map`` with every component an expression in those and ``s``."""

    map: tuple
    s: object = S

    def at(self, value) -> "AffineFlow":
        return AffineFlow(tuple(e.subs({self.s: Expr.of(value)}) for e in self.map), self.s)

    def __call__(self, point) -> tuple:
        binds = dict(zip(BASE, (Expr.of(p) for p in point)))
        return tuple(e.subs(binds, simultaneous=True) for e in self.map)

    def then(self, other: "AffineFlow") -> "AffineFlow":
        """Apply ``self`` first, then ``other`` (parameters must be distinct symbols)."""
        return AffineFlow(other(self.map), self.s)

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.map) + ")"


def affine_matrix(vf: VectorField) -> list:
    """Homogeneous 6x6 matrix of an affine field acting on ``(x, t, a, b, c, 1)``."""
    rows = []
    for coeff in vf.coeffs:
        if not coeff.is_polynomial():
            raise ValueError(f"coefficient {coeff} is not affine")
        row = [Fraction(0)] * 6
        for m, c in coeff.num.items():
            if not m:
                row[5] = Fraction(c)
                continue
            if len(m) != 1 or m[0][1] != 1 or m[0][0] not in BASE:
                raise ValueError(f"coefficient {coeff} is not affine in (x, t, a, b, c)")
            row[BASE.index(m[0][0])] = Fraction(c)
        rows.append(row)
    rows.append([Fraction(0)] * 6)
    return rows


def exponentiate(vf: VectorField, s=S) -> AffineFlow:
    """Closed-form flow of an affine field by the exact matrix exponential."""
    E = linalg.expm(affine_matrix(vf), s)
    coords = [Expr.of(a) for a in BASE] + [ONE]
    out = []
    for r in range(5):
        acc = ZERO
        for c in range(6):
            if not E[r][c].is_zero():
                acc = acc + E[r][c] * coords[c]
        out.append(acc)
    return AffineFlow(tuple(out), s)


def group(i: int, s=S) -> AffineFlow:
    """Flow ``g_i(s)`` of the basis generator ``X_i``."""
    return exponentiate(generators()[i - 1], s)


@dataclass(frozen=True)
class SolutionTriple:
    a: Expr
    b: Expr
    c: Expr
    params: tuple = ()

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if isinstance(v, str):
                object.__setattr__(self, name, parse(v))
            elif not isinstance(v, Expr):
                object.__setattr__(self, name, Expr.of(v))
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def exprs(self) -> tuple:
        return (self.a, self.b, self.c)

    def __eq__(self, other) -> bool:
        return isinstance(other, SolutionTriple) and self.exprs == other.exprs

    def __hash__(self) -> int:
        return hash(self.exprs)

    def as_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "params": list(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "SolutionTriple":
        return cls(parse(data["a"]), parse(data["b"]), parse(data["c"]), tuple(data.get("params", ())))


def act_on_solution(flow: AffineFlow, sol: SolutionTriple) -> SolutionTriple:
    """Transport the graph of ``sol`` by the flow.

    The new triple at ``(x, t)`` is the fiber image of the old triple at the
    base point pulled back by the flow, i.e. the base map at ``-s``.  The
    flow must still carry its parameter symbol.
    """
    for e in sol.exprs:
        if any(a.kind == JET for a in e.free_atoms()):
            raise ValueError("solutions with unspecified functions cannot be transported")
    base_x, base_t = flow.map[0], flow.map[1]
    for e in (base_x, base_t):
        if any(e.depends_on(a) for a in BASE[2:]):
            raise ValueError("base map depends on the fiber; not a projectable flow")
    if not any(e.depends_on(flow.s) for e in flow.map):
        raise ValueError("flow has no free parameter; use transport() for numeric values")
    back = {flow.s: -Expr.of(flow.s)}
    x0, t0 = base_x.subs(back, simultaneous=True), base_t.subs(back, simultaneous=True)
    pull = {X: x0, T: t0}
    old = [e.subs(pull, simultaneous=True) for e in sol.exprs]
    binds = {X: x0, T: t0, BASE[2]: old[0], BASE[3]: old[1], BASE[4]: old[2]}
    new = [flow.map[k].subs(binds, simultaneous=True) for k in (2, 3, 4)]
    return SolutionTriple(*new, params=sol.params)


# group parameter kept apart from any symbol a solution may carry
_FREE = param("s_")


def transport(i: int, sol: SolutionTriple, value) -> SolutionTriple:
    """``g_i(value)`` applied to ``sol``; ``value`` may be rational or an expression."""
    moved = act_on_solution(group(i, _FREE), sol)
    binds = {_FREE: parse(value) if isinstance(value, str) else Expr.of(value)}
    return SolutionTriple(*(e.subs(binds) for e in moved.exprs), params=sol.params)


def orbit(sol: SolutionTriple, word) -> SolutionTriple:
    """Apply ``g_i(s)`` for each ``(i, s)`` in ``word``, left to right."""
    for i, value in word:
        sol = transport(i, sol, value)
    return sol


def parse_word(text: str) -> list:
    """``"5:1,7:1/2"`` -> ``[(5, 1), (7, 1/2)]``; a value may also be an expression."""
    word = []
    for item in filter(None, (p.strip() for p in text.split(","))):
        gen, _, value = item.partition(":")
        i = int(gen)
        if not 1 <= i <= 7:
            raise ValueError(f"generator index {i} out of range")
        word.append((i, parse(value) if value else Expr.of(param("s"))))
    return word

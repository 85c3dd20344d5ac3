"""Jet-space calculus: total derivatives, characteristics and the second prolongation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .symexpr import JET, ZERO, Expr, coord, jet, parse

MAX_ORDER = 3
DEPENDENTS = ("a", "b", "c")
X, T = coord("x"), coord("t")
BASE = (X, T) + tuple(jet(d) for d in DEPENDENTS)
SLOT_NAMES = ("xi1", "xi2", "phi1", "phi2", "phi3")
# multi-indices (i, j) = (x-count, t-count) of the prolonged slots
FIRST = ((1, 0), (0, 1))
SECOND = ((2, 0), (1, 1), (0, 2))


def u(dep: str, i: int = 0, j: int = 0):
    """Jet atom of ``dep`` differentiated ``i`` times in x and ``j`` times in t."""
    return jet(dep, (i, j))


def total_derivative(e: Expr, direction) -> Expr:
    """``D_v e``: explicit derivative plus the chain rule through every jet symbol.

    ``direction`` is a coordinate atom or name.  Jets whose frame does not
    contain the coordinate are treated as constants.
    """
    v = coord(direction) if isinstance(direction, str) else direction
    out = e.diff(v)
    for a in sorted(e.free_atoms(), key=lambda a: a.key):
        if a.kind != JET or v.name not in a.frame:
            continue
        counts = list(a.counts)
        counts[a.frame.index(v.name)] += 1
        if sum(counts) > MAX_ORDER:
            raise ValueError(f"jet order overflow: D_{v.name} {a.name} exceeds order {MAX_ORDER}")
        out = out + Expr.of(jet(a.dependent, counts, a.frame)) * e.diff(a)
    return out


def _as_expr(value) -> Expr:
    if isinstance(value, str):
        return parse(value)
    return Expr.of(value)


@dataclass(frozen=True)
class VectorField:
    """Point vector field ``xi1 d_x + xi2 d_t + phi1 d_a + phi2 d_b + phi3 d_c``."""

    xi1: Expr = ZERO
    xi2: Expr = ZERO
    phi1: Expr = ZERO
    phi2: Expr = ZERO
    phi3: Expr = ZERO

    def __post_init__(self):
        for name in SLOT_NAMES:
            e = _as_expr(getattr(self, name))
            object.__setattr__(self, name, e)
            for a in e.free_atoms():
                if a.kind == JET and a.order > 0:
                    raise ValueError(f"{name} depends on derivative {a.name}; point fields only")

    @classmethod
    def from_coeffs(cls, coeffs) -> "VectorField":
        return cls(*coeffs)

    @property
    def coeffs(self) -> tuple:
        return (self.xi1, self.xi2, self.phi1, self.phi2, self.phi3)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(*(p + q for p, q in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(*(p - q for p, q in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "VectorField":
        return VectorField(*(-p for p in self.coeffs))

    def scale(self, c) -> "VectorField":
        c = Expr.of(Fraction(c)) if isinstance(c, (int, Fraction)) else c
        return VectorField(*(c * p for p in self.coeffs))

    def __rmul__(self, c) -> "VectorField":
        return self.scale(c)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs)

    def apply(self, e: Expr) -> Expr:
        """The field as a derivation on functions of (x, t, a, b, c)."""
        out = ZERO
        for coeff, atom in zip(self.coeffs, BASE):
            if not coeff.is_zero():
                out = out + coeff * e.diff(atom)
        return out

    def __str__(self) -> str:
        parts = []
        for coeff, atom in zip(self.coeffs, BASE):
            if not coeff.is_zero():
                parts.append(f"({coeff})*d_{atom.name}")
        return " + ".join(parts) if parts else "0"


def characteristic(vf: VectorField, dependent) -> Expr:
    """``Q = phi - xi1 u_x - xi2 u_t`` for the dependent variable (name or index 1..3)."""
    dep = DEPENDENTS[dependent - 1] if isinstance(dependent, int) else dependent
    phi = vf.coeffs[2 + DEPENDENTS.index(dep)]
    return phi - vf.xi1 * Expr.of(u(dep, 1, 0)) - vf.xi2 * Expr.of(u(dep, 0, 1))


@dataclass(frozen=True)
class ProlongedField:
    base: VectorField
    coeffs: dict = field(default_factory=dict)  # (dep, (i, j)) -> Expr

    def coefficient(self, dep: str, i: int, j: int) -> Expr:
        return self.coeffs[(dep, (i, j))]


def prolong2(vf: VectorField) -> ProlongedField:
    """Second prolongation through the characteristics.

    ``phi^J = D_J Q + xi1 u_{J,x} + xi2 u_{J,t}`` for every multi-index J of
    order 1 and 2.
    """
    coeffs = {}
    for dep in DEPENDENTS:
        q = characteristic(vf, dep)
        dq = {(0, 0): q}
        dq[(1, 0)] = total_derivative(q, X)
        dq[(0, 1)] = total_derivative(q, T)
        dq[(2, 0)] = total_derivative(dq[(1, 0)], X)
        dq[(1, 1)] = total_derivative(dq[(1, 0)], T)
        dq[(0, 2)] = total_derivative(dq[(0, 1)], T)
        for i, j in FIRST + SECOND:
            coeffs[(dep, (i, j))] = (dq[(i, j)] + vf.xi1 * Expr.of(u(dep, i + 1, j))
                                     + vf.xi2 * Expr.of(u(dep, i, j + 1)))
    return ProlongedField(vf, coeffs)


def apply_prolonged(pf: ProlongedField, e: Expr) -> Expr:
    """``Pr^(2) X`` applied to a function on the second jet space."""
    out = pf.base.apply(e)
    free = e.free_atoms()
    for (dep, (i, j)), coeff in pf.coeffs.items():
        a = u(dep, i, j)
        if a in free and not coeff.is_zero():
            out = out + coeff * e.diff(a)
    return out


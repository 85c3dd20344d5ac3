"""Similarity reductions of the Einstein-Walker system by one-dimensional subalgebras.

Each case supplies an invariant ``w(x, t)`` and prefactors ``A, B, C`` with
``a = A f(w)``, ``b = B h(w)``, ``c = C k(w)``.  Substituting the lift into the
system and dividing out the remaining x/t dependence leaves ODEs in ``w``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .detsolve import WALKER_SYSTEM
from .jetcalc import BASE, VectorField, total_derivative
from .liealg import generators
from .reference_data import load
from .symexpr import EXP, JET, Expr, coord, jet, parse, primitive

CASES = ("x3", "1", "2", "3", "4", "5", "6", "7")
W = coord("w")
X, T = coord("x"), coord("t")
NEW = ("f", "h", "k")
MAX_JET = 3


class ReductionError(ValueError):
    pass


def case_key(case) -> str:
    key = str(case).lower()
    if key not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {', '.join(CASES)}")
    return key


def case_data(case) -> dict:
    return load("reductions")["cases"][case_key(case)]


def generator_field(coeffs) -> VectorField:
    out = VectorField()
    for c, g in zip(coeffs, generators()):
        if c:
            out = out + g.scale(Fraction(c))
    return out


@dataclass(frozen=True)
class InvariantAnsatz:
    case: str
    generator: VectorField
    w: Expr
    prefactors: tuple  # A, B, C in (x, t)

    @property
    def invariants(self) -> tuple:
        """``(f, h, k) = (a/A, b/B, c/C)`` as functions on (x, t, a, b, c)."""
        return tuple(Expr.of(d) / p for d, p in zip(BASE[2:], self.prefactors))

    @property
    def lift(self) -> tuple:
        return tuple(p * Expr.of(jet(n)) for p, n in zip(self.prefactors, NEW))


def ansatz(case) -> InvariantAnsatz:
    data = case_data(case)
    lift = [parse(data["lift"][d]) for d in "abc"]
    pre = tuple(e / Expr.of(jet(n)) for e, n in zip(lift, NEW))
    for p in pre:
        if any(a.kind == JET for a in p.free_atoms()):
            raise ValueError(f"lift for case {case} is not of product form")
    return InvariantAnsatz(case_key(case), generator_field(data["generator"]), parse(data["w"]), pre)


def verify_invariants(ans: InvariantAnsatz) -> bool:
    X_ = ans.generator
    return all(X_.apply(e).is_zero() for e in (ans.w,) + ans.invariants)


# --------------------------------------------------------------------------
# reduction
# --------------------------------------------------------------------------

@dataclass
class ReducedSystem:
    case: str
    equations: tuple
    sources: tuple = ()  # index of the original equation each one came from
    eliminated: str = ""

    def __str__(self) -> str:
        return "\n".join(prime_str(e) for e in self.equations)


def prime_str(e: Expr) -> str:
    """Text with ``f_ww`` written as ``f''``."""
    return re.sub(r"\b([fhk])_(w+)\b", lambda m: m.group(1) + "'" * len(m.group(2)), str(e))


def _chain(e: Expr, v, w: Expr) -> Expr:
    # D_v of an expression in (x, t) and jets over w(x, t)
    dw = w.diff(v)
    out = e.diff(v)
    if not dw.is_zero():
        out = out + dw * total_derivative(e, W)
    return out


def _lifted_jets(ans: InvariantAnsatz) -> dict:
    binds = {}
    for dep, e in zip("abc", ans.lift):
        d = {(0, 0): e}
        d[(1, 0)] = _chain(e, X, ans.w)
        d[(0, 1)] = _chain(e, T, ans.w)
        d[(2, 0)] = _chain(d[(1, 0)], X, ans.w)
        d[(1, 1)] = _chain(d[(1, 0)], T, ans.w)
        d[(0, 2)] = _chain(d[(0, 1)], T, ans.w)
        for counts, val in d.items():
            binds[jet(dep, counts)] = val
    return binds


def _solve_for_coordinate(w: Expr):
    """``(v, value)`` with ``v = value(w, other)`` when ``w`` is linear in ``v``."""
    for v in (T, X):
        dw = w.diff(v)
        if dw.is_zero() or dw.depends_on(v):
            continue
        if (dw * Expr.of(v) - w).is_zero():
            return v, Expr.of(W) / dw
    raise ReductionError(f"cannot solve w = {w} for a coordinate")


def _split(e: Expr, other) -> Expr:
    """Strip the factor depending on ``other``; all groups must be proportional."""
    groups: dict = {}
    for m, c in e.num.items():
        outer, inner = [], []
        for a, n in m:
            if a is other or (a.kind == EXP and other in a.free):
                if W in a.free:
                    raise ReductionError(f"atom {a} mixes w with {other}")
                outer.append((a, n))
            elif other in a.free:
                raise ReductionError(f"atom {a} depends on {other}")
            else:
                inner.append((a, n))
        groups.setdefault(tuple(outer), {})[tuple(sorted(inner, key=lambda p: p[0].id))] = c
    polys = [Expr.from_poly(p) for _, p in sorted(groups.items(), key=lambda kv: str(kv[0]))]
    first = polys[0]
    for p in polys[1:]:
        q = p / first
        if not q.is_constant():
            raise ReductionError(f"residual dependence on {other} cannot be factored out")
    return first


def normalize_equation(e: Expr) -> Expr:
    """Integer content 1, positive leading coefficient, common powers of w removed."""
    return primitive(e, strip=(W,))


def reduce_system(ans: InvariantAnsatz, system=WALKER_SYSTEM) -> ReducedSystem:
    if not verify_invariants(ans):
        raise ReductionError(f"case {ans.case}: the supplied functions are not invariants")
    binds = _lifted_jets(ans)
    v, value = _solve_for_coordinate(ans.w)
    other = X if v is T else T
    eqs, sources = [], []
    for idx, text in enumerate(system):
        eq = parse(text) if isinstance(text, str) else text
        r = eq.subs(binds).subs({v: value}).numerator()
        if r.is_zero():
            continue
        red = normalize_equation(_split(r, other))
        for a in red.free_atoms():
            if a is X or a is T or (a.kind == EXP):
                raise ReductionError(f"reduced equation still contains {a}")
        if red not in eqs:
            eqs.append(red)
            sources.append(idx)
    return ReducedSystem(ans.case, tuple(eqs), tuple(sources), v.name)


def reduced(case) -> ReducedSystem:
    return reduce_system(ansatz(case))


# --------------------------------------------------------------------------
# solutions
# --------------------------------------------------------------------------

def _to_w(e: Expr, var: str) -> Expr:
    """Rename the display variable to ``w`` in coordinates and jet frames."""
    if var == "w":
        return e
    binds = {coord(var): Expr.of(W)}
    for a in e.free_atoms():
        if a.kind == JET and a.frame == (var,):
            binds[a] = Expr.of(jet(a.dependent, a.counts, ("w",)))
    return e.subs(binds, simultaneous=True)


def displayed_equation(text: str, var: str) -> Expr:
    return _to_w(parse(text, functions={n: (var,) for n in NEW}), var)


@dataclass
class ReducedSolution:
    name: str
    values: tuple  # f, h, k as expressions in w
    params: tuple = ()
    arbitrary: tuple = ()
    third_order: bool = False  # definition uses a third derivative

    @property
    def trivial(self) -> bool:
        return all(v.is_zero() for v in self.values)


def _derivative(e: Expr, v, n: int) -> Expr:
    for _ in range(n):
        e = total_derivative(e, v)
    return e


def build_solution(name: str, spec: dict, var: str) -> ReducedSolution:
    """Evaluate the let-bindings of a displayed solution in order.

    Later bindings may mention earlier names and their derivatives, e.g.
    ``f = -4*k*k_xx/k_xxx``.
    """
    frames = {n: (var,) for n in NEW}
    v = coord(var)
    env: dict = {}
    third = False
    for n, text in spec.get("bind", []):
        e = parse(text, functions=frames)
        binds = {}
        for a in e.free_atoms():
            if a.kind == JET and a.dependent in env:
                if a.order >= 3:
                    third = True
                binds[a] = _derivative(env[a.dependent], v, a.order)
        env[n] = e.subs(binds) if binds else e
    arbitrary = tuple(spec.get("arbitrary", ()))
    for n in NEW:
        if n not in env:
            if n not in arbitrary:
                raise ValueError(f"solution {name} leaves {n} unspecified")
            env[n] = Expr.of(jet(n, (0,), (var,)))
    values = tuple(_to_w(env[n], var) for n in NEW)
    return ReducedSolution(name, values, tuple(spec.get("params", ())), arbitrary, third)


def case_solutions(case) -> dict:
    data = case_data(case)
    return {typ: build_solution(typ, spec, data["var"]) for typ, spec in data.get("solutions", {}).items()}


def solution_bindings(values, order: int = 2) -> dict:
    binds = {}
    for n, e in zip(NEW, values):
        d = e
        for k in range(order + 1):
            binds[jet(n, (k,), ("w",))] = d
            if k < order:
                d = total_derivative(d, W)
    return binds


def _order(eqs) -> int:
    return max((a.order for e in eqs for a in e.free_atoms() if a.kind == JET), default=0)


def reduced_residuals(red: ReducedSystem, values) -> list:
    values = values.values if isinstance(values, ReducedSolution) else tuple(values)
    if any(a.kind == JET and a.order > 0 for v in values for a in v.free_atoms()):
        raise ValueError("solution values must not contain derivatives of arbitrary functions")
    binds = solution_bindings(values, _order(red.equations))
    return [e.subs(binds, simultaneous=True) for e in red.equations]


def verify_reduced_solution(case, values, red: ReducedSystem | None = None) -> bool:
    red = red or reduced(case)
    return all(r.is_zero() for r in reduced_residuals(red, values))


def lift_solution(case, values):
    """Apply the lift ``a = A f(w)`` etc. and return an (x, t) SolutionTriple."""
    from .flows import SolutionTriple

    params = values.params if isinstance(values, ReducedSolution) else ()
    values = values.values if isinstance(values, ReducedSolution) else tuple(values)
    ans = ansatz(case)
    binds = {W: ans.w}
    for val in values:
        for a in val.free_atoms():
            if a.kind == JET and a.frame == ("w",):
                if not ans.w.free_atoms() <= {X, T} or len(ans.w.num) != 1 or ans.w.denominator() != 1:
                    raise ValueError("arbitrary functions can only be lifted when w is a coordinate")
                (m, _), = ans.w.num.items()
                if len(m) != 1 or m[0][1] != 1:
                    raise ValueError("arbitrary functions can only be lifted when w is a coordinate")
                binds[a] = Expr.of(jet(a.dependent, a.counts, (m[0][0].name,)))
    out = [p * val.subs(binds, simultaneous=True) for p, val in zip(ans.prefactors, values)]
    return SolutionTriple(*out, params=params)


# --------------------------------------------------------------------------
# comparison
# --------------------------------------------------------------------------

EXACT, EQUIVALENT, DISCREPANCY = "exact-match", "solution-equivalent", "discrepancy"


@dataclass
class Comparison:
    case: str
    displayed: list
    buckets: list
    reasons: list = field(default_factory=list)

    def counts(self) -> dict:
        return {b: self.buckets.count(b) for b in (EXACT, EQUIVALENT, DISCREPANCY)}


def _combination(computed, target: Expr):
    cols = [dict(e.num) for e in computed]
    return linalg.solve(cols, dict(target.num))


def compare_reduced(red: ReducedSystem, case=None, solutions: dict | None = None, displayed=None) -> Comparison:
    """Classify each displayed equation of ``case`` against the computed system.

    exact-match: equal to a computed equation up to a rational factor.
    solution-equivalent: a rational combination of computed equations, or
    vanishing on every nontrivial displayed solution that satisfies the
    computed system (at least one is required).
    discrepancy: neither.

    ``displayed`` overrides the displayed equations (expressions in w).
    """
    case = case_key(case if case is not None else red.case)
    data = case_data(case)
    if displayed is None:
        displayed = [displayed_equation(t, data["var"]) for t in data["reduced"]]
    displayed = [normalize_equation(p) for p in displayed]
    if solutions is None:
        solutions = case_solutions(case)
    good = [s for s in solutions.values()
            if not s.trivial and not _has_derivative_jets(s) and verify_reduced_solution(case, s, red)]
    buckets, reasons = [], []
    for p in displayed:
        if p in red.equations:
            buckets.append(EXACT)
            reasons.append(f"equation {red.equations.index(p) + 1}")
            continue
        y = _combination(red.equations, p)
        if y is not None:
            buckets.append(EQUIVALENT)
            terms = [f"{c}*E{j + 1}" for j, c in enumerate(y) if c]
            reasons.append("combination " + " + ".join(terms))
            continue
        if good:
            probe = ReducedSystem(case, (p,))
            if all(all(r.is_zero() for r in reduced_residuals(probe, s)) for s in good):
                buckets.append(EQUIVALENT)
                reasons.append("vanishes on " + ", ".join(s.name for s in good))
                continue
        buckets.append(DISCREPANCY)
        reasons.append("not implied")
    return Comparison(case, displayed, buckets, reasons)


def _has_derivative_jets(sol: ReducedSolution) -> bool:
    return any(a.kind == JET and a.order > 0 for v in sol.values for a in v.free_atoms())


def report(case) -> dict:
    """Reduction, comparison and solution checks for one case."""
    from .walker import residual_system

    case = case_key(case)
    data = case_data(case)
    ans = ansatz(case)
    red = reduce_system(ans)
    sols = case_solutions(case)
    cmp = compare_reduced(red, case, sols)
    rows = []
    for typ, s in sols.items():
        res = reduced_residuals(red, s)
        lifted = lift_solution(case, s)
        lres = residual_system(lifted)
        rows.append({
            "type": typ,
            "f": prime_str(s.values[0]), "h": prime_str(s.values[1]), "k": prime_str(s.values[2]),
            "third_derivative": s.third_order,
            "reduced_zero": all(r.is_zero() for r in res),
            "reduced_residuals": [prime_str(r) for r in res if not r.is_zero()],
            "lifted": lifted.as_dict(),
            "lifted_zero": all(r.is_zero() for r in lres),
            "lifted_residuals": [str(r) for r in lres if not r.is_zero()],
        })
    return {
        "case": case,
        "generator": data["generator"],
        "w": str(ans.w),
        "invariants": [str(e) for e in ans.invariants],
        "invariants_ok": verify_invariants(ans),
        "eliminated": red.eliminated,
        "computed": [prime_str(e) for e in red.equations],
        "displayed": [{"equation": prime_str(p), "bucket": b, "reason": r}
                  for p, b, r in zip(cmp.displayed, cmp.buckets, cmp.reasons)],
        "buckets": cmp.counts(),
        "solutions": rows,
    }

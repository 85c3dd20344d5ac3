"""Determining equations of the Einstein-Walker system under a polynomial ansatz.

The infinitesimals are expanded as polynomials of bounded total degree in
``(x, t, a, b, c)`` with unknown rational coefficients.  Since the invariance
condition is linear in the infinitesimals, the determining matrix is built one
column at a time: each column is the prolonged action of a single monomial
field, reduced on shell and expanded into Laurent monomials.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from . import linalg
from .jetcalc import BASE, SLOT_NAMES, VectorField, apply_prolonged, prolong2, total_derivative, u
from .symexpr import ZERO, Expr, laurent_terms, parse
from .symexpr.expr import mono_str

WALKER_SYSTEM = (
    "a_xx - b_tt",
    "b_xt + c_xx",
    "a_xt + c_tt",
    "a_x*c_t + a_t*b_t - a_t*c_x - c_t^2 + 2*c*a_xt + b*a_tt - a*c_xt",
    "a_t*b_x - c_x*c_t + c*a_xx - a*c_xx - c*c_xt - b*c_tt",
    "a_x*b_x - b_x*c_t + b_t*c_x - c_x^2 + a*b_xx + 2*c*b_xt - b*c_xt",
)

# (equation index, solved derivative); the last three divide by b, c, a
RANKING = (
    (0, ("a", 2, 0)),
    (1, ("c", 2, 0)),
    (2, ("c", 0, 2)),
    (3, ("a", 0, 2)),
    (4, ("c", 1, 1)),
    (5, ("b", 2, 0)),
)

JOBS_ENV = "ARTIFACT_JOBS"


@dataclass(frozen=True)
class PdeSystem:
    equations: tuple
    independent: tuple = ("x", "t")
    dependents: tuple = ("a", "b", "c")

    def __post_init__(self):
        eqs = tuple(parse(e) if isinstance(e, str) else e for e in self.equations)
        object.__setattr__(self, "equations", eqs)


def walker_system() -> PdeSystem:
    return PdeSystem(WALKER_SYSTEM)


@dataclass
class OnShellRules:
    base: dict
    prolonged: dict
    conditions: list = field(default_factory=list)  # compatibility conditions met while prolonging

    @property
    def rules(self) -> dict:
        return {**self.base, **self.prolonged}

    def reduce(self, e: Expr) -> Expr:
        return _reduce(e, self.rules)


def _reduce(e: Expr, rules: dict, limit: int = 20) -> Expr:
    for _ in range(limit):
        hit = {a: rules[a] for a in e.free_atoms() if a in rules}
        if not hit:
            return e
        e = e.subs(hit)
    raise ValueError("on-shell substitution does not terminate")


def _fixpoint(rules: dict) -> dict:
    # reduce every right side by the other rules until none mentions a lead
    out = dict(rules)
    for _ in range(len(out) + 2):
        changed = False
        for lead, rhs in out.items():
            hit = {a: out[a] for a in rhs.free_atoms() if a in out and a is not lead}
            if lead in rhs.free_atoms():
                raise ValueError(f"rule for {lead} is self-referential")
            if hit:
                out[lead] = rhs.subs(hit)
                changed = True
        if not changed:
            return out
    raise ValueError("on-shell rules are cyclic")


def onshell_rules(system: PdeSystem, ranking=RANKING) -> OnShellRules:
    """Solve each equation for its ranked leading derivative, then prolong once."""
    base = {}
    for index, (dep, i, j) in ranking:
        eq = system.equations[index]
        lead = u(dep, i, j)
        coeff = eq.diff(lead)
        if coeff.is_zero():
            raise ValueError(f"equation {index + 1} does not contain {lead}")
        rest = eq - coeff * Expr.of(lead)
        if rest.depends_on(lead) or coeff.depends_on(lead):
            raise ValueError(f"equation {index + 1} is not linear in {lead}")
        base[lead] = -rest / coeff
    base = _fixpoint(base)
    prolonged: dict = {}
    conditions = []
    for lead, rhs in base.items():
        for v in system.independent:
            counts = list(lead.counts)
            counts[lead.frame.index(v)] += 1
            new_lead = u(lead.dependent, *counts)
            if new_lead in prolonged:
                continue
            r = _reduce(total_derivative(rhs, v), {**base, **prolonged})
            if r.depends_on(new_lead):
                # the image mentions its own lead through earlier images
                coeff = r.diff(new_lead)
                rest = r - coeff * Expr.of(new_lead)
                if coeff.depends_on(new_lead) or rest.depends_on(new_lead):
                    raise ValueError(f"prolonged rule for {new_lead} is not linear")
                if (coeff - 1).is_zero():
                    conditions.append(rest)
                    continue
                r = rest / (1 - coeff)
            for k, other in prolonged.items():
                if other.depends_on(new_lead):
                    prolonged[k] = other.subs({new_lead: r})
            prolonged[new_lead] = r
    rules = OnShellRules(base, prolonged, conditions)
    _check_terminal(rules.rules)
    return rules


def _check_terminal(rules: dict):
    leads = rules.keys()
    for lead, rhs in rules.items():
        if rhs.free_atoms() & leads:
            raise ValueError(f"rule for {lead} is not fully reduced")


# --------------------------------------------------------------------------
# ansatz
# --------------------------------------------------------------------------

def monomials(degree: int) -> list:
    """Exponent vectors over (x, t, a, b, c) of total degree <= ``degree``."""
    out = []
    for d in range(degree + 1):
        exps = []
        for combo in combinations_with_replacement(range(5), d):
            e = [0] * 5
            for k in combo:
                e[k] += 1
            exps.append(tuple(e))
        out.extend(sorted(exps, reverse=True))
    return out


def monomial_expr(exps) -> Expr:
    e = Expr.const(1)
    for atom, n in zip(BASE, exps):
        if n:
            e = e * Expr.of(atom) ** n
    return e


def unknown_name(slot: int, exps) -> str:
    return f"{SLOT_NAMES[slot]}[{mono_str(tuple((a, n) for a, n in zip(BASE, exps) if n))}]"


def column_field(slot: int, exps) -> VectorField:
    coeffs = [ZERO] * 5
    coeffs[slot] = monomial_expr(exps)
    return VectorField(*coeffs)


@dataclass
class AnsatzSystem:
    degree: int
    unknowns: list = field(default_factory=list)  # (slot, exponents)
    rows: list = field(default_factory=list)      # sparse dicts column -> Fraction
    row_keys: list = field(default_factory=list)  # (equation index, monomial text)
    raw_rows: int = 0

    @property
    def ncols(self) -> int:
        return len(self.unknowns)


def ansatz(degree: int) -> AnsatzSystem:
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    unknowns = [(slot, e) for slot in range(5) for e in monomials(degree)]
    return AnsatzSystem(degree, unknowns)


def _column(args):
    system, rules, slot, exps = args
    pf = prolong2(column_field(slot, exps))
    out = {}
    for mu, eq in enumerate(system.equations):
        r = _reduce(apply_prolonged(pf, eq), rules)
        for m, c in laurent_terms(r).items():
            key = (mu, m)
            out[key] = out.get(key, 0) + c
    return out


def _jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def determining_equations(system: PdeSystem, ans: AnsatzSystem, jobs: int | None = None) -> AnsatzSystem:
    """Fill ``ans`` with the determining matrix (rows deduplicated up to scaling)."""
    rules = onshell_rules(system).rules
    tasks = [(system, rules, slot, e) for slot, e in ans.unknowns]
    jobs = _jobs() if jobs is None else jobs
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            columns = list(pool.map(_column, tasks, chunksize=4))
    else:
        columns = [_column(t) for t in tasks]
    table: dict = {}
    for col, entries in enumerate(columns):
        for key, c in entries.items():
            table.setdefault(key, {})[col] = Fraction(c)
    keyed = sorted(table.items(), key=lambda kv: (kv[0][0], mono_str(kv[0][1])))
    seen = {}
    for (mu, m), row in keyed:
        lead = min(row)
        scale = row[lead]
        norm = tuple(sorted((j, v / scale) for j, v in row.items()))
        if norm not in seen:
            seen[norm] = (mu, mono_str(m))
    ans.rows = [dict(n) for n in seen]
    ans.row_keys = list(seen.values())
    ans.raw_rows = len(keyed)
    return ans


@dataclass
class SymmetryBasis:
    fields: list
    dimension: int


def solve_nullspace(ans: AnsatzSystem) -> SymmetryBasis:
    fields = []
    for v in linalg.nullspace(ans.rows, ans.ncols):
        coeffs = [ZERO] * 5
        for (slot, e), c in zip(ans.unknowns, v):
            if c:
                coeffs[slot] = coeffs[slot] + monomial_expr(e) * c
        fields.append(VectorField(*coeffs))
    return SymmetryBasis(fields, len(fields))


def symmetries(degree: int, system: PdeSystem | None = None, jobs: int | None = None):
    system = system or walker_system()
    ans = determining_equations(system, ansatz(degree), jobs)
    return ans, solve_nullspace(ans)


def residuals(system: PdeSystem, vf: VectorField, rules: dict | None = None) -> list:
    """On-shell invariance residuals, one per equation, denominators cleared."""
    rules = onshell_rules(system).rules if rules is None else rules
    pf = prolong2(vf)
    out = []
    for eq in system.equations:
        r = _reduce(apply_prolonged(pf, eq), rules)
        out.append(r.numerator())
    return out


def verify_symmetry(system: PdeSystem, vf: VectorField) -> bool:
    return all(r.is_zero() for r in residuals(system, vf))


# --------------------------------------------------------------------------
# span membership
# --------------------------------------------------------------------------

def field_vector(vf: VectorField) -> dict:
    """Sparse coordinates of a polynomial field: (slot, monomial) -> coefficient."""
    out = {}
    for slot, coeff in enumerate(vf.coeffs):
        if not coeff.is_polynomial():
            raise ValueError(f"{SLOT_NAMES[slot]} is not polynomial")
        for m, c in coeff.num.items():
            out[(slot, m)] = c
    return out


def span_coordinates(basis, vf: VectorField):
    """Rational coordinates of ``vf`` in the span of ``basis``, or None."""
    return linalg.solve([field_vector(b) for b in basis], field_vector(vf))


def in_span(basis, vf: VectorField) -> bool:
    return span_coordinates(basis, vf) is not None


def report(ans: AnsatzSystem, basis: SymmetryBasis) -> dict:
    return {
        "degree": ans.degree,
        "unknowns": [unknown_name(s, e) for s, e in ans.unknowns],
        "rows_collected": ans.raw_rows,
        "rows_distinct": len(ans.rows),
        "rank": ans.ncols - basis.dimension,
        "dimension": basis.dimension,
        "basis": [{n: str(c) for n, c in zip(SLOT_NAMES, f.coeffs)} for f in basis.fields],
    }


def report_json(ans: AnsatzSystem, basis: SymmetryBasis) -> str:
    return json.dumps(report(ans, basis), indent=2)

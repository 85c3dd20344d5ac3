"""Four-dimensional Walker metrics: Ricci tensor, Einstein equations, residuals.

The metric in coordinates ``(x1, x2, x3, x4)`` is

    g = 2(dx1 dx3 + dx2 dx4) + a dx3^2 + b dx4^2 + 2c dx3 dx4

and the restricted setting identifies ``x1 = x``, ``x2 = t`` with ``a, b, c``
independent of ``x3, x4``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .detsolve import WALKER_SYSTEM, PdeSystem
from .jetcalc import total_derivative
from .symexpr import JET, ONE, X4, XT, ZERO, Expr, coord, jet, parse, primitive
from .symexpr.expr import Atom

RESTRICTED_COORDS = ("x", "t", "x3", "x4")
GENERAL_COORDS = X4


@dataclass
class WalkerMetric:
    a: Expr
    b: Expr
    c: Expr
    coords: tuple = RESTRICTED_COORDS

    def __post_init__(self):
        for n in "abc":
            v = getattr(self, n)
            setattr(self, n, parse(v) if isinstance(v, str) else Expr.of(v))

    @property
    def g(self) -> list:
        a, b, c = self.a, self.b, self.c
        return [
            [ZERO, ZERO, ONE, ZERO],
            [ZERO, ZERO, ZERO, ONE],
            [ONE, ZERO, a, c],
            [ZERO, ONE, c, b],
        ]

    @property
    def ginv(self) -> list:
        # inverse of the block form [[0, I], [I, B]] is [[-B, I], [I, 0]]
        a, b, c = self.a, self.b, self.c
        return [
            [-a, -c, ONE, ZERO],
            [-c, -b, ZERO, ONE],
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ONE, ZERO, ZERO],
        ]


def symbolic_metric(restricted: bool = True) -> WalkerMetric:
    """Metric whose a, b, c are unspecified functions (jet symbols)."""
    if restricted:
        return WalkerMetric(*(Expr.of(jet(d, (0, 0), XT)) for d in "abc"), coords=RESTRICTED_COORDS)
    return WalkerMetric(*(Expr.of(jet(d, (0,) * 4, X4)) for d in "abc"), coords=GENERAL_COORDS)


@dataclass
class CurvatureData:
    christoffel: list  # christoffel[k][i][j] = Gamma^k_ij
    ricci: list
    einstein_factor: object = None  # Expr, or None when rho is not a multiple of g
    einstein: bool = False
    deviation: list = field(default_factory=list)  # rho - lambda g


def _d(e: Expr, v: Atom) -> Expr:
    return total_derivative(e, v)


def ricci(metric: WalkerMetric) -> CurvatureData:
    """Levi-Civita Christoffel symbols and Ricci tensor ``rho_ij = R^k_kij``."""
    n = 4
    xs = [coord(v) for v in metric.coords]
    g, gi = metric.g, metric.ginv
    dg = [[[_d(g[i][j], xs[k]) for k in range(n)] for j in range(n)] for i in range(n)]
    gamma = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                acc = ZERO
                for l in range(n):
                    if gi[k][l].is_zero():
                        continue
                    term = dg[j][l][i] + dg[i][l][j] - dg[i][j][l]
                    if not term.is_zero():
                        acc = acc + gi[k][l] * term
                acc = acc / 2
                gamma[k][i][j] = gamma[k][j][i] = acc
    dgamma = [[[[_d(gamma[k][i][j], xs[m]) for m in range(n)] for j in range(n)] for i in range(n)]
              for k in range(n)]
    rho = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = ZERO
            for k in range(n):
                acc = acc + dgamma[k][i][j][k] - dgamma[k][k][j][i]
                for m in range(n):
                    acc = acc + gamma[k][k][m] * gamma[m][i][j] - gamma[k][i][m] * gamma[m][k][j]
            rho[i][j] = acc
    lam = rho[0][2]  # g_13 = 1
    dev = [[rho[i][j] - lam * g[i][j] for j in range(n)] for i in range(n)]
    einstein = all(e.is_zero() for row in dev for e in row)
    return CurvatureData(gamma, rho, lam if einstein else None, einstein, dev)


def derive_einstein_system(restricted: bool = True) -> PdeSystem:
    """Equations ``rho_ij = lambda g_ij`` with ``lambda`` eliminated row by row.

    Row ``i`` reads ``lambda`` off its null partner (``rho_13`` for rows 1 and 3,
    ``rho_24`` for rows 2 and 4); the equation ``rho_13 = rho_24`` comes first.
    Distinct nonzero components are returned up to rational scaling.
    """
    data = ricci(symbolic_metric(restricted))
    rho, g = data.ricci, symbolic_metric(restricted).g
    dual = (2, 3, 0, 1)
    cands = [rho[0][2] - rho[1][3]]
    for i in range(4):
        lam = rho[i][dual[i]]
        cands += [rho[i][j] - lam * g[i][j] for j in range(i, 4)]
    eqs = []
    seen = set()
    for e in cands:
        if e.is_zero():
            continue
        p = primitive(e)
        if p in seen or (-p) in seen:
            continue
        seen.add(p)
        eqs.append(p)
    indep = ("x", "t") if restricted else GENERAL_COORDS
    return PdeSystem(tuple(eqs), independent=indep)


def proportional(e1: Expr, e2: Expr):
    """Rational ``q`` with ``e1 == q * e2``, or None."""
    if e2.is_zero():
        return None if not e1.is_zero() else 1
    q = e1 / e2
    return q.as_rational() if q.is_constant() else None


def linear_rules(eqs) -> dict:
    """Rewrite rules from the equations that are linear with constant coefficients."""
    rules: dict = {}
    for e in eqs:
        atoms = sorted(e.free_atoms(), key=lambda a: a.key)
        if not atoms or not all(e.diff(a).is_constant() for a in atoms):
            continue
        e = e.subs({a: r for a, r in rules.items() if e.depends_on(a)})
        for a in sorted(e.free_atoms(), key=lambda a: a.key):
            if any(r.depends_on(a) for r in rules.values()):
                continue
            c = e.diff(a)
            rhs = -(e - c * Expr.of(a)) / c
            rules = {k: v.subs({a: rhs}) if v.depends_on(a) else v for k, v in rules.items()}
            rules[a] = rhs
            break
    return rules


def match_systems(computed, reference) -> list:
    """Pair each reference equation with a computed one.

    Entries are ``(index, scale, kind)`` with kind ``"scaling"`` when the two
    agree up to the rational ``scale`` and ``"linear"`` when they agree up to
    scale modulo the constant-coefficient linear equations of ``reference``;
    None when no computed equation fits.
    """
    rules = linear_rules(reference)
    out = []
    for ref in reference:
        hit = None
        for k, e in enumerate(computed):
            q = proportional(e, ref)
            if q:
                hit = (k, q, "scaling")
                break
        if hit is None:
            for k, e in enumerate(computed):
                for m, c in ref.num.items():
                    if m not in e.num:
                        continue
                    q = Fraction(e.num[m]) / Fraction(c)
                    diff = e - ref * q
                    if diff.subs({a: r for a, r in rules.items() if diff.depends_on(a)}).is_zero():
                        hit = (k, q, "linear")
                        break
                if hit:
                    break
        out.append(hit)
    return out


def systems_equivalent(computed, reference) -> bool:
    hits = match_systems(computed, reference)
    return all(hits) and len({h[0] for h in hits}) == len(computed)


# --------------------------------------------------------------------------
# residuals
# --------------------------------------------------------------------------

_SYSTEM = None


def _walker_system():
    global _SYSTEM
    if _SYSTEM is None:
        _SYSTEM = PdeSystem(WALKER_SYSTEM)
    return _SYSTEM


def jet_bindings(exprs, order: int = 2, coords=XT) -> dict:
    """Map every jet of a, b, c up to ``order`` to the derivative of the given expressions."""
    binds = {}
    xs = [coord(v) for v in coords]
    for dep, e in zip("abc", exprs):
        table = {(0,) * len(xs): e}
        frontier = [(0,) * len(xs)]
        for _ in range(order):
            nxt = []
            for counts in frontier:
                for k, v in enumerate(xs):
                    c2 = list(counts)
                    c2[k] += 1
                    c2 = tuple(c2)
                    if c2 not in table:
                        table[c2] = total_derivative(table[counts], v)
                        nxt.append(c2)
            frontier = nxt
        for counts, val in table.items():
            binds[jet(dep, counts, tuple(coords))] = val
    return binds


def residual_system(sol) -> list:
    """The six equations evaluated on ``sol`` (any object with ``exprs`` or a triple)."""
    exprs = sol.exprs if hasattr(sol, "exprs") else tuple(sol)
    binds = jet_bindings(exprs)
    return [eq.subs(binds) for eq in _walker_system().equations]


def einstein_check(sol) -> CurvatureData:
    exprs = sol.exprs if hasattr(sol, "exprs") else tuple(sol)
    return ricci(WalkerMetric(*exprs, coords=RESTRICTED_COORDS))


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------

@dataclass
class CatalogEntry:
    name: str
    solution: object  # SolutionTriple
    expected: str  # "pass" or "known-discrepancy"
    label: str
    has_free_function: bool = False


def catalog() -> list:
    """Every solution displayed in the analysis, lifted to (x, t)."""
    from .flows import SolutionTriple
    from .reduce import CASES, case_solutions, lift_solution

    entries = [CatalogEntry(
        "seed_example",
        SolutionTriple("r1*x + r2", "(r3^2/r1)*x - (r2*r3^2/r1^2)*ln(r1*x + r2)", "r3*x + r4",
                       ("r1", "r2", "r3", "r4")),
        "pass", "example")]
    for case in CASES:
        for typ, red in case_solutions(case).items():
            name = f"x3_{typ}" if case == "x3" else f"case{case}_{typ}"
            lifted = lift_solution(case, red)
            free = any(a.kind == JET for e in lifted.exprs for a in e.free_atoms())
            entries.append(CatalogEntry(name, lifted, KNOWN.get(name, "pass"), f"case {case}", free))
    return entries


# entries found not to satisfy the equations; see verify_catalog for residuals
KNOWN: dict = {}


def verify_entry(entry: CatalogEntry, ricci_check: bool = True) -> dict:
    res = residual_system(entry.solution)
    ok = all(r.is_zero() for r in res)
    out = {
        "name": entry.name,
        "expected": entry.expected,
        "residual_zero": ok,
        "residuals": [str(r) for r in res] if not ok else [],
    }
    if ricci_check:
        data = einstein_check(entry.solution)
        out["einstein"] = data.einstein
        out["lambda"] = str(data.einstein_factor) if data.einstein else None
    out["status"] = "pass" if ok else "fail"
    out["as_expected"] = (out["status"] == "pass") == (entry.expected == "pass")
    return out


def verify_catalog(ricci_check: bool = True) -> list:
    return [verify_entry(e, ricci_check) for e in catalog()]

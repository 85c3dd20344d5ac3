"""Acceptance criteria 1-10, one PASS/FAIL line each.

Every comparison is exact: expressions are compared by canonical form and
coefficients as Fractions.  No numeric tolerance appears anywhere.
"""

import random
import time
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings

import conftest
from strategies import JET1, NONZERO, point_fields, polynomials, to_expr, trees
from walkerlie import detsolve, flows, liealg, reduce, walker
from walkerlie.detsolve import WALKER_SYSTEM
from walkerlie.jetcalc import BASE, prolong2, total_derivative
from walkerlie.liealg import S
from walkerlie.reference_data import load
from walkerlie.symexpr import X4, ZERO, Expr, param, parse

TOLERANCE = "exact"
N_RANDOM = 500


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} [{TOLERANCE}] {detail}"
    conftest.CRITERIA[n] = line
    print(line)
    return ok


def _vec(text):
    e = parse(text)
    return [e.diff(param(f"X{i}")).as_rational() for i in range(1, 8)]


# ---------------------------------------------------------------------------

def test_criterion_01_symmetry_recovery():
    t0 = time.perf_counter()
    _, basis = detsolve.symmetries(1)
    members = [detsolve.in_span(basis.fields, g) for g in liealg.generators()]
    secs = time.perf_counter() - t0
    ok = basis.dimension == 7 and all(members) and secs < 120
    assert record(1, ok, f"degree 1 nullspace dim={basis.dimension}, members={sum(members)}/7, {secs:.1f}s")


def test_criterion_02_commutators():
    alg = liealg.algebra()
    gold = load("algebra")["commutators"]
    hits = sum(alg.structure[i][j] == _vec(gold[i][j]) for i in range(7) for j in range(7))
    x45 = liealg.field_str(alg.structure[3][4])
    center = all(not any(alg.structure[6][j]) and not any(alg.structure[j][6]) for j in range(7))
    ok = hits == 49 and x45 == "X3 - X6 + 2*X7" and center
    assert record(2, ok, f"{hits}/49 entries, [X4,X5] = {x45}, X7 central={center}")


def test_criterion_03_adjoint():
    alg = liealg.algebra()
    gold = load("algebra")["adjoint"]
    s2 = param("s2")
    match = law = 0
    for i in range(1, 8):
        M = liealg.adjoint_matrix(alg, i)
        g = gold[str(i)]
        if g == "identity":
            g = [["1" if r == c else "0" for c in range(7)] for r in range(7)]
        match += M == [[parse(e) for e in row] for row in g]
        M2 = [[e.subs({S: Expr.of(s2)}) for e in row] for row in M]
        Ms = [[e.subs({S: Expr.of(S) + Expr.of(s2)}, simultaneous=True) for e in row] for row in M]
        prod = [[sum((M[r][k] * M2[k][c] for k in range(7)), ZERO) for c in range(7)] for r in range(7)]
        law += prod == Ms
    ok = match == 7 and law == 7
    assert record(3, ok, f"matrices matched {match}/7 (M7 identity), group law {law}/7")


def test_criterion_04_flows():
    gold = load("flows")["groups"]
    gens = liealg.generators()
    s2 = param("s2")
    maps = vel = law = 0
    for i in range(1, 8):
        g = flows.group(i)
        maps += g.map == tuple(parse(e) for e in gold[str(i)])
        vel += tuple(e.diff(S).subs({S: ZERO}) for e in g.map) == gens[i - 1].coeffs
        vel_ok = g.at(0).map == tuple(Expr.of(a) for a in BASE)
        vel -= not vel_ok
        total = tuple(e.subs({S: Expr.of(S) + Expr.of(s2)}, simultaneous=True) for e in g.map)
        law += g.then(flows.group(i, s2)).map == total
    ok = maps == vel == law == 7
    assert record(4, ok, f"maps {maps}/7, d/ds at 0 {vel}/7, group law {law}/7")


def test_criterion_05_transport():
    ex = load("flows")["example"]
    sol = flows.SolutionTriple(ex["a"], ex["b"], ex["c"], ex["params"])
    zero = 0
    for i in range(1, 8):
        moved = flows.transport(i, sol, parse("s"))
        zero += all(r.is_zero() for r in walker.residual_system(moved))
    g5 = flows.transport(5, sol, parse("s")).exprs == tuple(parse(ex["g5"][n]) for n in "abc")
    ok = zero == 7 and g5
    assert record(5, ok, f"zero residual for {zero}/7 flows, g5 display equal={g5}")


def test_criterion_06_einstein_oracle():
    ref = [parse(e) for e in WALKER_SYSTEM]
    hits = walker.match_systems(walker.derive_einstein_system(True).equations, ref)
    restricted = bool(hits) and all(h and h[2] == "scaling" for h in hits) \
        and sorted(h[0] for h in hits) == list(range(6))
    gref = [parse(e, functions={d: X4 for d in "abc"}) for e in load("systems")["general"]]
    ghits = walker.match_systems(walker.derive_einstein_system(False).equations, gref)
    general = bool(ghits) and all(h and h[2] == "scaling" for h in ghits) \
        and sorted(h[0] for h in ghits) == list(range(6))
    ok = restricted and general
    assert record(6, ok, f"restricted 6/6 by scaling={restricted}, general 6/6 by scaling={general}")


def test_criterion_07_reductions():
    bad = []
    exact_cases = []
    for case in reduce.CASES:
        cmp = reduce.compare_reduced(reduce.reduced(case), case)
        if reduce.DISCREPANCY in cmp.buckets:
            bad.append(case)
        if all(b == reduce.EXACT for b in cmp.buckets):
            exact_cases.append(case)
    ok = not bad and {"x3", "1"} <= set(exact_cases)
    assert record(7, ok, f"8 cases, discrepancies in {bad or 'none'}, all-exact cases {exact_cases}")


REQUIRED = ["x3_type1", "x3_type2", "case1_type1", "case1_type2",
            "case2_type1", "case2_type2", "case4_type1", "case4_type2", "case4_type3",
            "case5_type1", "case5_type2", "case5_type3"]


def test_criterion_08_invariant_solutions():
    rows = {r["name"]: r for r in walker.verify_catalog()}
    reduced_ok = all(reduce.verify_reduced_solution(case, sol)
                     for case in reduce.CASES for sol in reduce.case_solutions(case).values())
    classified = all(r["status"] in ("pass", "fail") for r in rows.values())
    required = all(rows[n]["status"] == "pass" for n in REQUIRED)
    failed = [n for n, r in rows.items() if r["status"] != "pass"]
    for n in failed:
        print(f"  known discrepancy {n}: residuals {rows[n]['residuals']}")
    ok = classified and required and reduced_ok
    assert record(8, ok, f"{len(rows)} entries classified, {len(rows) - len(failed)} exact, "
                         f"known discrepancies {failed or 'none'}")


def _random_vector(rng):
    # half the entries zero so that every one of the 21 cases is reached
    while True:
        v = [Fraction(rng.choice([n for n in range(-9, 10) if n]), rng.randint(1, 5))
             if rng.random() >= 0.5 else Fraction(0) for _ in range(7)]
        if any(v):
            return v


def test_criterion_09_optimal_system():
    alg = liealg.algebra()
    rng = random.Random(7)
    cases, replayed, positive, locked = set(), 0, 0, []
    for _ in range(N_RANDOM):
        v = _random_vector(rng)
        nf = liealg.normalize(v, alg)
        cases.add(nf.case)
        out = liealg.replay(alg, v, nf.witness, nf.scale)
        replayed += out == list(nf.vector) and liealg.match_case(out)[0] == nf.case
        if nf.scale > 0:
            positive += 1
        else:
            locked.append(liealg.field_str(v))
    idem = 0
    for case in range(1, 22):
        params = [Fraction(rng.randint(-7, 7) or 1, rng.randint(1, 4)) for _ in range(3)]
        rep = liealg.representative(case, params)
        nf = liealg.normalize(rep, alg)
        idem += nf.case == case and nf.vector == rep and nf.scale == 1
    for v in locked:
        print(f"  negative scale needed for {v}")
    ok = len(cases) == 21 and replayed == N_RANDOM and positive == N_RANDOM and idem == 21
    assert record(9, ok, f"{N_RANDOM} vectors over {len(cases)}/21 cases, replayed {replayed}, "
                         f"positive scale {positive}/{N_RANDOM}, idempotent {idem}/21")


# ---------------------------------------------------------------------------
# criterion 10: each property counts the instances it actually checked

PROPS = settings(max_examples=N_RANDOM, deadline=None, database=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
COUNTS = {}


def _tick(name):
    COUNTS[name] = COUNTS.get(name, 0) + 1


@PROPS
@given(trees())
def _canonical_uniqueness(tree):
    try:
        e = to_expr(tree)
    except ZeroDivisionError:
        assume(False)
    x, t = parse("x"), parse("t")
    for f in ((e * (x + t)) / (x + t), (e + x) - x, -(-e)):
        assert f == e and hash(f) == hash(e)
    assert e + parse("r1*t") != e
    _tick("canonical uniqueness")


@PROPS
@given(polynomials(JET1 + ("x", "t"), degree=3, terms=4))
def _dx_dt_commute(e):
    assert total_derivative(total_derivative(e, "x"), "t") == total_derivative(total_derivative(e, "t"), "x")
    _tick("D_x/D_t commutation")


@PROPS
@given(point_fields(degree=1, terms=2), point_fields(degree=1, terms=2), NONZERO, NONZERO)
def _prolongation_linear(X, Y, p, q):
    lhs = prolong2(X.scale(p) + Y.scale(q))
    px, py = prolong2(X), prolong2(Y)
    for key, coeff in lhs.coeffs.items():
        assert coeff == px.coeffs[key] * Expr.const(p) + py.coeffs[key] * Expr.const(q)
    _tick("prolongation linearity")


@PROPS
@given(polynomials(("x", "t"), degree=3, terms=3), polynomials(("x", "t"), degree=3, terms=3),
       polynomials(("x", "t"), degree=3, terms=3))
def _rho_symmetric(a, b, c):
    rho = walker.ricci(walker.WalkerMetric(a, b, c)).ricci
    assert all(rho[i][j] == rho[j][i] for i in range(4) for j in range(i + 1, 4))
    _tick("rho symmetry")


@PROPS
@given(trees(transcendental=True))
def _parse_print(tree):
    try:
        e = to_expr(tree)
    except (ZeroDivisionError, ValueError):
        assume(False)
    assert parse(str(e)) == e
    _tick("parse/print round trip")


def test_criterion_10_property_suites():
    COUNTS.clear()
    t0 = time.perf_counter()
    for prop in (_canonical_uniqueness, _dx_dt_commute, _prolongation_linear, _rho_symmetric, _parse_print):
        prop()
    secs = time.perf_counter() - t0
    ok = len(COUNTS) == 5 and min(COUNTS.values()) >= N_RANDOM and secs < 300
    detail = ", ".join(f"{k} {v}" for k, v in COUNTS.items())
    assert record(10, ok, f"{detail} instances, {secs:.1f}s")

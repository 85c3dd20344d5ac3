import pytest

from walkerlie import flows, walker
from walkerlie.jetcalc import BASE
from walkerlie.liealg import S, generators
from walkerlie.reference_data import load
from walkerlie.symexpr import ZERO, Expr, coord, param, parse

X, T = coord("x"), coord("t")
GOLD = load("flows")


def _example():
    ex = GOLD["example"]
    return flows.SolutionTriple(ex["a"], ex["b"], ex["c"], ex["params"])


@pytest.mark.parametrize("i", range(1, 8))
def test_flow_against_reference(i):
    assert flows.group(i).map == tuple(parse(e) for e in GOLD["groups"][str(i)])


@pytest.mark.parametrize("i", range(1, 8))
def test_flow_derivative_recovers_generator(i):
    g = flows.group(i)
    vel = tuple(e.diff(S).subs({S: ZERO}) for e in g.map)
    assert vel == generators()[i - 1].coeffs
    assert g.at(0).map == tuple(Expr.of(a) for a in BASE)


@pytest.mark.parametrize("i", range(1, 8))
def test_flow_group_law(i):
    s2 = param("s2")
    g1 = flows.group(i, S)
    g2 = flows.group(i, s2)
    both = g1.then(g2)
    total = flows.group(i, S).map
    total = tuple(e.subs({S: Expr.of(S) + Expr.of(s2)}, simultaneous=True) for e in total)
    assert both.map == total


@pytest.mark.parametrize("i", range(1, 8))
def test_transport_against_reference_template(i):
    sol = _example()
    tpl = GOLD["transport"][str(i)]
    args = {X: parse(tpl["args"][0]), T: parse(tpl["args"][1])}
    F, H, K = (e.subs(args, simultaneous=True) for e in sol.exprs)
    binds = {param("F"): F, param("H"): H, param("K"): K}
    want = tuple(parse(tpl[n]).subs(binds) for n in "fhk")
    assert flows.transport(i, sol, parse("s")).exprs == want


def test_g5_display():
    got = flows.transport(5, _example(), parse("s"))
    disp = GOLD["example"]["g5"]
    assert got.exprs == tuple(parse(disp[n]) for n in "abc")


@pytest.mark.parametrize("i", range(1, 8))
def test_transport_preserves_example(i):
    moved = flows.transport(i, _example(), parse("s"))
    assert all(r.is_zero() for r in walker.residual_system(moved))


def test_transport_preserves_catalog():
    for entry in walker.catalog():
        if entry.has_free_function:
            continue
        for i in range(1, 8):
            moved = flows.transport(i, entry.solution, parse("s"))
            assert all(r.is_zero() for r in walker.residual_system(moved)), (entry.name, i)


def test_orbit_composes_translations():
    sol = _example()
    assert flows.orbit(sol, [(1, 1), (1, 2)]) == flows.orbit(sol, [(1, 3)])
    assert flows.orbit(sol, []) == sol


def test_orbit_word():
    word = flows.parse_word("3:1,6:1,7:1")
    moved = flows.orbit(_example(), word)
    assert all(r.is_zero() for r in walker.residual_system(moved))
    with pytest.raises(ValueError):
        flows.parse_word("9:1")


def test_act_requires_parameter():
    with pytest.raises(ValueError):
        flows.act_on_solution(flows.group(1).at(1), _example())


def test_free_functions_rejected():
    sol = flows.SolutionTriple(parse("a_x"), ZERO, ZERO)
    with pytest.raises(ValueError):
        flows.transport(1, sol, 1)


def test_affine_matrix_rejects_nonaffine():
    from walkerlie.jetcalc import VectorField

    with pytest.raises(ValueError):
        flows.affine_matrix(VectorField("x^2", 0, 0, 0, 0))


def test_solution_dict_round_trip():
    sol = _example()
    assert flows.SolutionTriple.from_dict(sol.as_dict()) == sol

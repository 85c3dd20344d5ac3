import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from strategies import rational_vectors
from walkerlie import detsolve
from walkerlie.liealg import (
    EXP_S, S, Step, act, adjoint_matrix, adjoint_series, algebra, commutator, field_str,
    generators, match_case, normalize, replay, representative, step_matrix,
)
from walkerlie.reference_data import load
from walkerlie.symexpr import ZERO, Expr, param, parse


@pytest.fixture(scope="module")
def alg():
    return algebra()


def _vector(text):
    e = parse(text)
    return [e.diff(param(f"X{i}")).as_rational() for i in range(1, 8)]


def test_commutators_against_reference(alg):
    gold = load("algebra")["commutators"]
    for i in range(7):
        for j in range(7):
            assert [Fraction(v) for v in alg.structure[i][j]] == _vector(gold[i][j])


def test_structure_constants_by_direct_bracket(alg):
    gens = generators()
    for i in range(7):
        for j in range(7):
            lhs = commutator(gens[i], gens[j])
            rhs = alg.field(alg.structure[i][j])
            assert lhs == rhs


def test_jacobi(alg):
    for i in range(7):
        for j in range(7):
            for k in range(7):
                e = [[0] * 7 for _ in range(3)]
                e[0][i] = e[1][j] = e[2][k] = 1
                x, y, z = e
                total = [Fraction(0)] * 7
                for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                    v = alg.bracket(a, alg.bracket(b, c))
                    total = [p + q for p, q in zip(total, v)]
                assert not any(total)


@pytest.mark.parametrize("i", range(1, 8))
def test_adjoint_against_reference(alg, i):
    gold = load("algebra")["adjoint"][str(i)]
    M = adjoint_matrix(alg, i)
    if gold == "identity":
        gold = [["1" if r == c else "0" for c in range(7)] for r in range(7)]
    assert M == [[parse(e) for e in row] for row in gold]


def _at_zero(e):
    return e.subs({S: ZERO})


@pytest.mark.parametrize("i", range(1, 8))
def test_adjoint_taylor_coefficients_from_vector_fields(alg, i):
    """n-th s-derivative at 0 of row j equals (-1)^n ad_{X_i}^n X_j, computed on fields."""
    gens = generators()
    M = adjoint_matrix(alg, i)
    for j in range(7):
        Y = gens[j]
        deriv = M[j]
        for n in range(6):
            coords = detsolve.span_coordinates(gens, Y.scale((-1) ** n))
            assert [_at_zero(e) for e in deriv] == [Expr.const(c) for c in coords]
            Y = commutator(gens[i - 1], Y)
            deriv = [e.diff(S) for e in deriv]


@pytest.mark.parametrize("i", range(1, 8))
def test_adjoint_group_law(alg, i):
    s2 = param("s2")
    M = adjoint_matrix(alg, i)
    M2 = [[e.subs({S: Expr.of(s2)}) for e in row] for row in M]
    Msum = [[e.subs({S: Expr.of(S) + Expr.of(s2)}, simultaneous=True) for e in row] for row in M]
    prod = [[sum((M[r][k] * M2[k][c] for k in range(7)), ZERO) for c in range(7)] for r in range(7)]
    assert prod == Msum


@pytest.mark.parametrize("i", range(1, 8))
def test_series_route_agrees_with_matrix(alg, i):
    M = adjoint_matrix(alg, i)
    for j in range(7):
        y = [0] * 7
        y[j] = 1
        assert adjoint_series(alg, i, y) == M[j]


def test_series_example(alg):
    assert adjoint_series(alg, 4, [0, 0, 0, 0, 1, 0, 0]) == [parse(e) for e in ("0", "0", "-s", "-s^2", "1", "s", "-2*s")]


def test_field_str():
    assert field_str([1, 0, 0, 0, 0, -1, 2]) == "X1 - X6 + 2*X7"
    assert field_str([0] * 7) == "0"


@pytest.mark.parametrize("vec,case,params", [
    ([0, 0, 0, 0, 0, 0, 1], 1, []),
    ([1, 2, 0, 0, 0, 0, 3], 2, [3]),
    ([0, 0, 1, 0, 2, 3, 4], 11, [2, 3, 4]),
])
def test_normalize_examples(alg, vec, case, params):
    nf = normalize(vec, alg)
    assert nf.case == case
    assert [Fraction(p) for p in nf.params] == params
    assert replay(alg, vec, nf.witness, nf.scale) == [Fraction(v) for v in nf.vector]


@pytest.mark.parametrize("case", range(1, 22))
def test_representatives_are_fixed_points(alg, case):
    rng = random.Random(case)
    params = [Fraction(rng.randint(-7, 7), rng.randint(1, 4)) for _ in range(3)]
    vec = representative(case, params)
    nf = normalize(vec, alg)
    assert nf.case == case
    assert nf.vector == vec and nf.scale == 1


@settings(max_examples=300, deadline=None)
@given(rational_vectors())
def test_normalize_replays(vec):
    alg = algebra()
    nf = normalize(vec, alg)
    assert 1 <= nf.case <= 21
    out = replay(alg, vec, nf.witness, nf.scale)
    assert out == [Fraction(v) for v in nf.vector]
    assert match_case(out)[0] == nf.case
    again = normalize(nf.vector, alg)
    assert (again.case, again.vector) == (nf.case, nf.vector)


def test_negative_multiple_of_center_is_sign_locked(alg):
    # every adjoint map fixes X7, so -X7 is never a positive multiple of X7
    for i in range(1, 8):
        M = adjoint_matrix(alg, i)
        assert act(M, [Expr.const(v) for v in (0, 0, 0, 0, 0, 0, -1)])[6] == Expr.const(-1)
    nf = normalize([0, 0, 0, 0, 0, 0, -1], alg)
    assert nf.case == 1 and nf.scale == -1


def test_positive_scale_preferred(alg):
    # a3 < 0 with a4 != 0: a translation along X5 flips the sign of a3 first
    nf = normalize([1, 1, -1, 1, 0, 0, 0], alg)
    assert nf.scale > 0


def test_step_matrix_exp_kind(alg):
    st = Step(3, "exp", Fraction(2))
    M = step_matrix(alg, st)
    assert M[0][0] == Expr.const(2) and M[3][3] == Expr.const(Fraction(1, 2))
    assert str(st.parameter) == "ln(2)"
    assert EXP_S.kind == 4


def test_zero_rejected(alg):
    with pytest.raises(ValueError):
        normalize([0] * 7, alg)


def test_opposite_sign_translation_does_not_normalize(alg):
    # a1*X1 + a2*X2 + a7*X7: only s = -a2/a1 along X4 clears the X2 component
    v = [Fraction(2), Fraction(3), 0, 0, 0, 0, Fraction(5)]
    good = replay(alg, v, [Step(4, "s", Fraction(-3, 2))])
    bad = replay(alg, v, [Step(4, "s", Fraction(3, 2))])
    assert good[1] == 0
    assert bad[1] == 6 and match_case(bad) is None

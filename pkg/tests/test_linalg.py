from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import SMALL, from_sympy
from walkerlie import linalg
from walkerlie.symexpr import ZERO, Expr, exp, param

S = param("s")


def _dense_to_sparse(rows):
    return [{j: Fraction(v) for j, v in enumerate(r) if v} for r in rows]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_nullspace_matches_sympy(m, n, data):
    rows = [[data.draw(st.integers(-2, 2)) for _ in range(n)] for _ in range(m)]
    ns = linalg.nullspace(_dense_to_sparse(rows), n)
    M = sp.Matrix(rows)
    assert len(ns) == len(M.nullspace())
    for v in ns:
        assert all(sum(Fraction(r[j]) * v[j] for j in range(n)) == 0 for r in rows)
    assert linalg.rank(_dense_to_sparse(rows)) == M.rank()


def test_rref_is_reduced():
    basis, pivots = linalg.rref(_dense_to_sparse([[2, 4, 6], [1, 2, 4], [0, 0, 1]]))
    assert pivots == [0, 2]
    assert basis[0] == {0: 1, 1: 2}


def test_solve():
    cols = [{"u": Fraction(1), "v": Fraction(1)}, {"v": Fraction(1)}]
    assert linalg.solve(cols, {"u": Fraction(2), "v": Fraction(5)}) == [2, 3]
    assert linalg.solve(cols, {"w": Fraction(1)}) is None


def test_charpoly_and_roots():
    A = [[Fraction(2), Fraction(3)], [Fraction(0), Fraction(-1)]]
    assert linalg.charpoly(A) == [1, -1, -2]
    assert linalg.rational_roots(linalg.charpoly(A)) == {2: 1, -1: 1}
    with pytest.raises(ValueError):
        linalg.rational_roots([1, 0, -2])


def test_inverse():
    A = [[Fraction(v) for v in r] for r in ((2, 1), (1, 1))]
    assert linalg.matmul(A, linalg.inverse(A)) == linalg.identity(2)


def _expm_sympy(A):
    E = (sp.Matrix(A) * sp.Symbol("s")).exp()
    return [[from_sympy(sp.simplify(E[i, j])) for j in range(E.cols)] for i in range(E.rows)]


@pytest.mark.parametrize("A", [
    [[0, 1], [0, 0]],
    [[1, 1], [0, 1]],
    [[2, 3], [0, -1]],
    [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
    [[1, 0, 2], [0, -1, 0], [0, 0, 1]],
])
def test_expm_matches_sympy(A):
    F = [[Fraction(v) for v in r] for r in A]
    assert linalg.expm(F, S) == _expm_sympy(A)


@settings(max_examples=60, deadline=None)
@given(st.lists(SMALL, min_size=3, max_size=3), st.lists(SMALL, min_size=3, max_size=3))
def test_expm_solves_the_ode(diag, upper):
    """E(0) = I and dE/ds = A E for triangular rational matrices."""
    A = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        A[i][i] = diag[i]
    A[0][1], A[0][2], A[1][2] = upper
    E = linalg.expm(A, S)
    E0 = [[e.subs({S: ZERO}) for e in row] for row in E]
    assert E0 == [[Expr.const(1 if i == j else 0) for j in range(3)] for i in range(3)]
    dE = [[e.diff(S) for e in row] for row in E]
    AE = linalg.expr_matmul([[Expr.const(v) for v in row] for row in A], E)
    assert dE == AE


def test_interpolant_values():
    c = linalg.exp_interpolant({Fraction(0): 2}, S)
    assert c == [Expr.const(1), Expr.of(S)]
    c = linalg.exp_interpolant({Fraction(1): 1, Fraction(-1): 1}, S)
    assert c[0] == (exp(Expr.of(S)) + exp(-Expr.of(S))) / 2

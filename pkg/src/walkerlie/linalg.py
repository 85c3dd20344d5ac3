"""Exact linear algebra over the rationals.

Sparse rows are dicts ``column -> Fraction``.  Dense matrices are lists of
lists of Fractions.  The matrix exponential works for any rational matrix
whose characteristic polynomial splits over the rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .symexpr import ONE, ZERO, Expr, exp, param


def _clean(row: dict) -> dict:
    return {j: Fraction(v) for j, v in row.items() if v}


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form of sparse rows.

    Returns ``(basis, pivots)`` where ``basis[i]`` has a 1 in column
    ``pivots[i]`` and zeros in every other pivot column.  Pivots are chosen
    as the smallest available column, so the output depends only on the row
    space, not on row order.
    """
    pending = [_clean(r) for r in rows]
    pending = [r for r in pending if r]
    basis: dict = {}  # pivot column -> row
    for row in pending:
        row = dict(row)
        # reduce against existing pivots, smallest first
        while row:
            hits = [p for p in row if p in basis]
            if not hits:
                break
            for p in hits:
                if p not in row:
                    continue
                f = row[p]
                for j, v in basis[p].items():
                    nv = row.get(j, 0) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {j: v * inv for j, v in row.items()}
        # eliminate p from earlier basis rows
        for q, other in basis.items():
            f = other.get(p)
            if f:
                for j, v in row.items():
                    nv = other.get(j, 0) - f * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        basis[p] = row
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int) -> list:
    """Basis of ``{v : row . v = 0}``, one vector per free column (dense lists)."""
    basis, pivots = rref(rows, ncols)
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(basis, pivots):
            if free in row:
                v[p] = -row[free]
        out.append(v)
    return out


def solve(columns, target):
    """Rational ``y`` with ``sum(y[i] * columns[i]) == target`` or None.

    ``columns`` and ``target`` are sparse dicts keyed by arbitrary hashables.
    When the columns are dependent the solution with free entries 0 is returned.
    """
    keys = sorted({k for c in columns for k in c} | set(target), key=repr)
    n = len(columns)
    # rows of the augmented system, one per key
    rows = []
    for k in keys:
        row = {i: Fraction(c[k]) for i, c in enumerate(columns) if c.get(k)}
        if target.get(k):
            row[n] = Fraction(target[k])
        if row:
            rows.append(row)
    basis, pivots = rref(rows)
    if n in pivots:
        return None
    y = [Fraction(0)] * n
    for row, p in zip(basis, pivots):
        y[p] = row.get(n, Fraction(0))
    return y


# --------------------------------------------------------------------------
# dense helpers
# --------------------------------------------------------------------------

def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list:
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m) if A[i][k] and B[k][j]), Fraction(0))
             for j in range(p)] for i in range(n)]


def expr_matmul(A, B) -> list:
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = ZERO
            for k in range(m):
                if not A[i][k].is_zero() and not B[k][j].is_zero():
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def inverse(A) -> list:
    n = len(A)
    rows = [{**{j: A[i][j] for j in range(n) if A[i][j]}, n + i: Fraction(1)} for i in range(n)]
    basis, pivots = rref(rows)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("singular matrix")
    return [[basis[i].get(n + j, Fraction(0)) for j in range(n)] for i in range(n)]


def charpoly(A) -> list:
    """Coefficients ``[1, c1, ..., cn]`` of ``det(zI - A)`` (Faddeev-LeVerrier)."""
    n = len(A)
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    I = identity(n)
    for k in range(1, n + 1):
        M = [[M[i][j] + coeffs[-1] * I[i][j] for j in range(n)] for i in range(n)]
        AM = matmul(A, M)
        ck = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(ck)
        M = AM
    return coeffs


def _divisors(n: int) -> list:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(coeffs) -> dict:
    """Roots with multiplicities of a monic rational polynomial.

    Raises ValueError when the polynomial does not split over the rationals.
    """
    poly = [Fraction(c) for c in coeffs]
    roots: dict = {}
    while len(poly) > 1 and poly[-1] == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        poly.pop()
    while len(poly) > 1:
        scale = lcm(*(c.denominator for c in poly))
        ints = [int(c * scale) for c in poly]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        found = None
        for p in _divisors(ints[-1]):
            for q in _divisors(ints[0]):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if _horner(poly, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise ValueError("spectrum is not rational")
        roots[found] = roots.get(found, 0) + 1
        poly = _deflate(poly, found)
    return roots


def _horner(poly, z):
    acc = Fraction(0)
    for c in poly:
        acc = acc * z + c
    return acc


def _deflate(poly, r):
    out = [poly[0]]
    for c in poly[1:-1]:
        out.append(c + out[-1] * r)
    return out


def _falling(j: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= j - i
    return out


def exp_interpolant(roots: dict, s) -> list:
    """Coefficients ``c_j(s)`` with ``sum c_j z^j = e^(s z)`` modulo ``prod (z - lam)^m``.

    ``roots`` maps each eigenvalue to its multiplicity.  The conditions match
    the Taylor coefficients ``s^k e^(lam s) / k!`` at every root (confluent
    Vandermonde system).
    """
    s = Expr.of(s)
    n = sum(roots.values())
    conditions = [(lam, k) for lam in sorted(roots) for k in range(roots[lam])]
    V = []
    rhs = []
    for lam, k in conditions:
        fact = 1
        for i in range(2, k + 1):
            fact *= i
        V.append([Fraction(_falling(j, k)) * lam ** (j - k) / fact if j >= k else Fraction(0)
                  for j in range(n)])
        rhs.append((s ** k) * (exp(s * lam) if lam else ONE) / fact)
    Vinv = inverse(V)
    return [sum((rhs[c] * Vinv[j][c] for c in range(n) if Vinv[j][c]), ZERO) for j in range(n)]


def expm(A, s=None) -> list:
    """Exact ``exp(s*A)`` as a matrix of expressions in the parameter ``s``.

    Raises ValueError when the spectrum of ``A`` is not rational.
    """
    s = Expr.of(param("s") if s is None else s)
    n = len(A)
    coeffs = exp_interpolant(rational_roots(charpoly(A)), s)
    M = [[ZERO] * n for _ in range(n)]
    P = identity(n)
    for cj in coeffs:
        for r in range(n):
            for c in range(n):
                if P[r][c]:
                    M[r][c] = M[r][c] + cj * P[r][c]
        P = matmul(P, A)
    return M

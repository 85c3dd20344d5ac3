"""Multivariate gcd cancellation, delegated to sympy's sparse polynomial rings."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .expr import EXP, _mono_from

_RINGS: dict = {}


def _ring(n: int):
    r = _RINGS.get(n)
    if r is None:
        r = ring(",".join(f"v{i}" for i in range(n)) if n > 1 else "v0", QQ)[0]
        _RINGS[n] = r
    return r


def cancel(num: dict, den: dict) -> tuple[dict, dict]:
    """Divide ``num`` and ``den`` by their gcd.

    ``den`` must carry no negative ``Exp`` powers.  Each ``Exp`` atom is mapped
    to a fresh variable ``Y`` with ``Exp = Y**scale``, after shifting the
    numerator so that every power is a nonnegative integer.
    """
    atoms = sorted({a for p in (num, den) for m in p for a, _ in m}, key=lambda a: a.id)
    index = {a: i for i, a in enumerate(atoms)}
    scale = {}
    shift = {}
    for a in atoms:
        if a.kind != EXP:
            continue
        powers = [Fraction(e) for p in (num, den) for m in p for b, e in m if b is a]
        scale[a] = lcm(*(q.denominator for q in powers))
        shift[a] = min([Fraction(e) for m in num for b, e in m if b is a] + [Fraction(0)])

    def encode(p: dict, shifted: bool) -> dict:
        out = {}
        for m, c in p.items():
            vec = [0] * len(atoms)
            present = dict(m)
            for a in atoms:
                e = present.get(a, 0)
                if a.kind == EXP:
                    e = Fraction(e) - (shift[a] if shifted else 0)
                    e = int(e * scale[a])
                vec[index[a]] = e
            c = Fraction(c)
            out[tuple(vec)] = QQ(c.numerator, c.denominator)
        return out

    def decode(poly, shifted: bool) -> dict:
        out = {}
        for vec, c in poly.items():
            pairs = []
            for a, e in zip(atoms, vec):
                if a.kind == EXP:
                    e = Fraction(e, scale[a]) + (shift[a] if shifted else 0)
                if e:
                    pairs.append((a, e))
            q = Fraction(int(c.numerator), int(c.denominator))
            out[_mono_from(pairs)] = q.numerator if q.denominator == 1 else q
        return out

    R = _ring(max(len(atoms), 1))
    P = R.from_dict(encode(num, True))
    Q = R.from_dict(encode(den, False))
    g, cp, cq = P.cofactors(Q)
    if g.is_ground:
        return num, den
    return decode(cp, True), decode(cq, False)

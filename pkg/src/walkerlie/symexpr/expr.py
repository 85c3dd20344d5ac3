"""Canonical exact rational functions over symbolic atoms.

An :class:`Expr` is a pair ``num/den`` of sparse polynomials with rational
coefficients.  Polynomials are plain dicts mapping a monomial to its
coefficient; a monomial is a tuple of ``(Atom, exponent)`` pairs sorted by the
atom's intern id.  Exponents are positive integers except for ``Exp`` atoms,
which carry an arbitrary nonzero rational power: the atom ``Exp(m)`` raised to
``p`` stands for ``exp(p*m)``.  Because ``exp`` is a unit, exponential factors
are always kept in the numerator and the denominator is normalized so that no
exponential monomial divides it.

Canonical form (see ``_canon``):

* ``gcd(num, den) = 1`` in the Laurent ring over the exponential atoms;
* ``den`` has leading coefficient 1 in graded-lex order with the atom order
  Coordinate < JetSymbol < Parameter < Ln < Exp.

Two expressions are equal as rational functions iff their canonical forms are
structurally identical, treating ``ln``/``exp`` atoms as algebraically
independent transcendentals.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Mapping, Union

COORD, JET, PARAM, LN, EXP = range(5)
KIND_NAMES = ("Coordinate", "JetSymbol", "Parameter", "Ln", "Exp")

COORD_ORDER = ("x", "t", "w", "x1", "x2", "x3", "x4")
COORDINATES = frozenset(COORD_ORDER)
DEPENDENT_ORDER = ("a", "b", "c", "f", "h", "k")
XT = ("x", "t")
X4 = ("x1", "x2", "x3", "x4")
DEFAULT_FRAMES = {
    "a": XT, "b": XT, "c": XT,
    "f": ("w",), "h": ("w",), "k": ("w",),
}

Number = Union[int, Fraction]


class Atom:
    """Interned symbolic atom.  Compare with ``is``; order with ``key``."""

    __slots__ = ("id", "kind", "payload", "key", "free", "_name")

    def __reduce__(self):
        return (_intern, (self.kind, self.payload))

    def __repr__(self) -> str:
        return f"Atom({KIND_NAMES[self.kind]}, {self.name})"

    def __str__(self) -> str:
        return self.name

    def __lt__(self, other: "Atom") -> bool:
        return self.key < other.key

    @property
    def name(self) -> str:
        if self._name is None:
            if self.kind == LN:
                self._name = f"ln({self.payload})"
            else:
                self._name = f"exp({self.payload})"
        return self._name

    # jet helpers -------------------------------------------------------
    @property
    def dependent(self) -> str:
        return self.payload[0]

    @property
    def frame(self) -> tuple:
        return self.payload[1]

    @property
    def counts(self) -> tuple:
        return self.payload[2]

    @property
    def order(self) -> int:
        return sum(self.payload[2])


_TABLE: dict = {}
_LOCK = threading.Lock()


def _jet_name(dep: str, frame: tuple, counts: tuple) -> str:
    if not any(counts):
        return dep
    if all(len(v) == 1 for v in frame):
        suffix = "".join(v * n for v, n in zip(frame, counts))
    else:
        suffix = "".join(str(i + 1) * n for i, n in enumerate(counts))
    return f"{dep}_{suffix}"


def _rank(seq: tuple, item) -> int:
    return seq.index(item) if item in seq else len(seq)


def _intern(kind: int, payload) -> Atom:
    table_key = (kind, payload)
    atom = _TABLE.get(table_key)
    if atom is not None:
        return atom
    with _LOCK:
        atom = _TABLE.get(table_key)
        if atom is not None:
            return atom
        atom = Atom()
        atom.id = len(_TABLE)
        atom.kind = kind
        atom.payload = payload
        atom._name = None
        if kind == COORD:
            atom.key = (COORD, _rank(COORD_ORDER, payload), payload)
            atom._name = payload
        elif kind == PARAM:
            atom.key = (PARAM, payload)
            atom._name = payload
        elif kind == JET:
            dep, frame, counts = payload
            atom.key = (JET, _rank(DEPENDENT_ORDER, dep), dep, len(frame), frame, counts)
            atom._name = _jet_name(dep, frame, counts)
        else:
            atom.key = (kind, payload.sort_key())
        free = {atom}
        if kind in (LN, EXP):
            free |= payload.free_atoms()
        atom.free = frozenset(free)
        _TABLE[table_key] = atom
        return atom


def coord(name: str) -> Atom:
    return _intern(COORD, name)


def param(name: str) -> Atom:
    return _intern(PARAM, name)


def jet(dep: str, counts: Iterable[int] = (), frame: tuple | None = None) -> Atom:
    """Jet symbol for ``dep`` differentiated ``counts[i]`` times along ``frame[i]``."""
    if frame is None:
        frame = DEFAULT_FRAMES[dep]
    counts = tuple(int(n) for n in counts) or (0,) * len(frame)
    if len(counts) != len(frame) or min(counts) < 0:
        raise ValueError(f"bad multi-index {counts} for frame {frame}")
    return _intern(JET, (dep, tuple(frame), counts))


def symbol(name: str) -> Atom:
    """Coordinate for reserved coordinate names, parameter otherwise."""
    return coord(name) if name in COORDINATES else param(name)


# --------------------------------------------------------------------------
# sparse polynomial helpers
# --------------------------------------------------------------------------

_ONE_MONO: tuple = ()
_ONE = {_ONE_MONO: 1}


def _q(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        a, e = m1[i]
        b, f = m2[j]
        if a is b:
            s = e + f
            if s:
                out.append((a, _q(s)))
            i += 1
            j += 1
        elif a.id < b.id:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    if i < n1:
        out.extend(m1[i:])
    if j < n2:
        out.extend(m2[j:])
    return tuple(out)


def _mono_lcm(m1: tuple, m2: tuple) -> tuple:
    acc = dict(m1)
    for a, e in m2:
        if e > acc.get(a, 0):
            acc[a] = e
    return tuple(sorted(acc.items(), key=lambda p: p[0].id))


def _mono_inv(m: tuple) -> tuple:
    return tuple((a, -e) for a, e in m)


def _mono_from(pairs) -> tuple:
    acc: dict = {}
    for a, e in pairs:
        acc[a] = acc.get(a, 0) + e
    return tuple(sorted(((a, _q(e)) for a, e in acc.items() if e), key=lambda p: p[0].id))


def _padd(p: dict, q: dict) -> dict:
    if len(p) < len(q):
        p, q = q, p
    r = dict(p)
    for m, c in q.items():
        v = r.get(m)
        if v is None:
            r[m] = c
        else:
            s = v + c
            if s:
                r[m] = s
            else:
                del r[m]
    return r


def _pneg(p: dict) -> dict:
    return {m: -c for m, c in p.items()}


def _pscale(p: dict, c) -> dict:
    c = _q(c)
    if c == 1:
        return p
    return {m: _q(v * c) for m, v in p.items()}


def _pmul_mono(p: dict, mono: tuple, c=1) -> dict:
    if not mono and c == 1:
        return p
    return {_mono_mul(m, mono): _q(v * c) for m, v in p.items()}


def _pmul(p: dict, q: dict) -> dict:
    if len(p) == 1:
        (m, c), = p.items()
        return _pmul_mono(q, m, c)
    if len(q) == 1:
        (m, c), = q.items()
        return _pmul_mono(p, m, c)
    r: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            c = c1 * c2
            v = r.get(m)
            if v is None:
                r[m] = c
            else:
                s = v + c
                if s:
                    r[m] = s
                else:
                    del r[m]
    return {m: _q(c) for m, c in r.items()}


def _mono_degree(m: tuple):
    return sum(e for _, e in m)


def _mono_cmp(m1: tuple, m2: tuple) -> int:
    """Graded lexicographic comparison under the atom order."""
    d1, d2 = _mono_degree(m1), _mono_degree(m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    s1 = sorted(m1, key=lambda p: p[0].key)
    s2 = sorted(m2, key=lambda p: p[0].key)
    i = j = 0
    while i < len(s1) and j < len(s2):
        (a, e), (b, f) = s1[i], s2[j]
        if a is b:
            if e != f:
                return -1 if e < f else 1
            i += 1
            j += 1
        elif a.key < b.key:
            return 1 if e > 0 else -1
        else:
            return -1 if f > 0 else 1
    if i < len(s1):
        return 1 if s1[i][1] > 0 else -1
    if j < len(s2):
        return -1 if s2[j][1] > 0 else 1
    return 0


_mono_sort_key = cmp_to_key(_mono_cmp)


def _lead_mono(p: dict) -> tuple:
    it = iter(p)
    best = next(it)
    for m in it:
        if _mono_cmp(m, best) > 0:
            best = m
    return best


def _exp_content(p: dict) -> tuple:
    """Per-``Exp``-atom minimum power over the terms of ``p`` (absent = 0)."""
    seen = {a for m in p for a, _ in m if a.kind == EXP}
    if not seen:
        return ()
    mins = {}
    for a in seen:
        mins[a] = min(dict(m).get(a, 0) for m in p)
    return _mono_from((a, e) for a, e in mins.items() if e)


def _plain_content(p: dict) -> dict:
    """Minimum exponent of each non-``Exp`` atom present in every term."""
    it = iter(p)
    content = {a: e for a, e in next(it) if a.kind != EXP}
    for m in it:
        if not content:
            break
        present = dict(m)
        for a in list(content):
            e = present.get(a)
            if e is None:
                del content[a]
            elif e < content[a]:
                content[a] = e
    return content


def _canon(num: dict, den: dict) -> "Expr":
    if not num:
        return ZERO
    if not den:
        raise ZeroDivisionError("division by zero expression")
    if len(den) == 1:
        (m, c), = den.items()
        if not m:
            return Expr(num if c == 1 else _pscale(num, Fraction(1) / c), _ONE)
    shift = _exp_content(den)
    if shift:
        inv = _mono_inv(shift)
        num = _pmul_mono(num, inv)
        den = _pmul_mono(den, inv)
    cn = _plain_content(num)
    if cn:
        cd = _plain_content(den)
        common = [(a, min(e, cd[a])) for a, e in cn.items() if a in cd]
        if common:
            g = _mono_inv(_mono_from(common))
            num = _pmul_mono(num, g)
            den = _pmul_mono(den, g)
    if len(den) == 1:
        (m, c), = den.items()
        if c != 1:
            num = _pscale(num, Fraction(1) / c)
        return Expr(num, {m: 1})
    from ._gcd import cancel

    num, den = cancel(num, den)
    lc = den[_lead_mono(den)]
    if lc != 1:
        inv = Fraction(1) / lc
        num = _pscale(num, inv)
        den = _pscale(den, inv)
    return Expr(num, den)


def _to_expr(value) -> "Expr":
    if isinstance(value, Expr):
        return value
    if isinstance(value, Atom):
        return Expr({((value, 1),): 1}, _ONE)
    if isinstance(value, bool):
        raise TypeError("bool is not a valid expression")
    if isinstance(value, int):
        return Expr({_ONE_MONO: value}, _ONE) if value else ZERO
    if isinstance(value, Fraction):
        return Expr({_ONE_MONO: _q(value)}, _ONE) if value else ZERO
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


class Expr:
    """Immutable canonical rational function."""

    __slots__ = ("num", "den", "_hash", "_free", "_key")

    def __init__(self, num: dict, den: dict):
        self.num = num
        self.den = den
        self._hash = None
        self._free = None
        self._key = None

    # -- construction ------------------------------------------------------
    @staticmethod
    def const(value: Number) -> "Expr":
        return _to_expr(Fraction(value))

    @staticmethod
    def of(value) -> "Expr":
        return _to_expr(value)

    @staticmethod
    def from_poly(poly: dict) -> "Expr":
        """Expression of a polynomial dict (no ``Exp`` atoms required in lowest terms)."""
        poly = {m: c for m, c in poly.items() if c}
        return Expr(poly, _ONE) if poly else ZERO

    def __reduce__(self):
        return (_rebuild, (_portable(self.num), _portable(self.den)))

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == _ONE

    def is_constant(self) -> bool:
        return self.den == _ONE and (not self.num or (len(self.num) == 1 and _ONE_MONO in self.num))

    def as_rational(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a rational constant: {self}")
        return Fraction(self.num.get(_ONE_MONO, 0))

    # -- structure -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Expr):
            try:
                other = _to_expr(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def atoms(self) -> frozenset:
        """Atoms appearing at top level in numerator or denominator."""
        return frozenset(a for p in (self.num, self.den) for m in p for a, _ in m)

    def free_atoms(self) -> frozenset:
        """All atoms, including those nested inside ``ln``/``exp`` arguments."""
        if self._free is None:
            out: set = set()
            for a in self.atoms():
                out |= a.free
            self._free = frozenset(out)
        return self._free

    def depends_on(self, atom: Atom) -> bool:
        return atom in self.free_atoms()

    def sort_key(self) -> tuple:
        if self._key is None:
            def pkey(p):
                terms = sorted(p.items(), key=lambda mc: _mono_sort_key(mc[0]), reverse=True)
                return tuple((tuple((a.key, e) for a, e in sorted(m, key=lambda ae: ae[0].key)), c)
                             for m, c in terms)
            self._key = (pkey(self.num), pkey(self.den))
        return self._key

    def numerator(self) -> "Expr":
        return Expr(self.num, _ONE) if self.num else ZERO

    def denominator(self) -> "Expr":
        return Expr(self.den, _ONE)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "Expr":
        try:
            other = _to_expr(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        d1, d2 = self.den, other.den
        if d1 is d2 or d1 == d2:
            if d1 == _ONE:
                return Expr.from_poly(_padd(self.num, other.num))
            return _canon(_padd(self.num, other.num), d1)
        if len(d1) == 1 and len(d2) == 1:
            (m1, _), = d1.items()
            (m2, _), = d2.items()
            lcm_m = _mono_lcm(m1, m2)
            n = _padd(_pmul_mono(self.num, _mono_mul(lcm_m, _mono_inv(m1))),
                      _pmul_mono(other.num, _mono_mul(lcm_m, _mono_inv(m2))))
            return _canon(n, {lcm_m: 1})
        n = _padd(_pmul(self.num, d2), _pmul(other.num, d1))
        return _canon(n, _pmul(d1, d2))

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(_pneg(self.num), self.den) if self.num else self

    def __pos__(self) -> "Expr":
        return self

    def __sub__(self, other) -> "Expr":
        try:
            other = _to_expr(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        return _to_expr(other) + (-self)

    def __mul__(self, other) -> "Expr":
        try:
            other = _to_expr(other)
        except TypeError:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.den == _ONE and other.den == _ONE:
            return Expr.from_poly(_pmul(self.num, other.num))
        return _canon(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        try:
            other = _to_expr(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by canonical zero")
        if not self.num:
            return ZERO
        return _canon(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other) -> "Expr":
        return _to_expr(other) / self

    def __pow__(self, n) -> "Expr":
        if isinstance(n, Fraction) and n.denominator == 1:
            n = n.numerator
        if not isinstance(n, int) or isinstance(n, bool):
            raise TypeError("only integer exponents are supported")
        if n < 0:
            return ONE / (self ** -n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus and substitution -------------------------------------------
    def diff(self, v: Atom) -> "Expr":
        """Exact partial derivative, all other atoms independent."""
        if v.kind not in (COORD, JET, PARAM):
            raise ValueError("can only differentiate with respect to coordinates, jets or parameters")
        if v not in self.free_atoms():
            return ZERO
        dn = _pdiff(self.num, v)
        if self.den == _ONE:
            return dn
        dd = _pdiff(self.den, v)
        den = Expr(self.den, _ONE)
        if not dd.num:
            return dn / den
        return (dn * den - Expr(self.num, _ONE) * dd) / (den * den)

    def subs(self, bindings: Mapping, simultaneous: bool = False) -> "Expr":
        """Simultaneous substitution of atoms by expressions.

        Bindings whose replacement mentions a bound atom are rejected as
        cyclic unless ``simultaneous`` is set, in which case every
        replacement is read in the original coordinates (one pass).
        """
        binds = {a: _to_expr(v) for a, v in bindings.items()}
        if not simultaneous:
            for a, v in binds.items():
                bad = v.free_atoms() & binds.keys()
                if bad:
                    raise ValueError(f"cyclic binding: replacement for {a} mentions {sorted(map(str, bad))}")
        return _subs(self, binds, {})

    # -- printing --------------------------------------------------------------
    def __str__(self) -> str:
        if self.den == _ONE:
            return _poly_str(self.num)
        n = _poly_str(self.num)
        return f"({n})/({_poly_str(self.den)})"

    def __repr__(self) -> str:
        return f"Expr({self})"


def _rebuild(num_terms, den_terms) -> Expr:
    num = {_mono_from(m): c for m, c in num_terms}
    den = {_mono_from(m): c for m, c in den_terms}
    return Expr(num, den)


def _portable(p: dict) -> list:
    return [(list(m), c) for m, c in p.items()]


ZERO = Expr({}, _ONE)
ONE = Expr({_ONE_MONO: 1}, _ONE)


def _pdiff(p: dict, v: Atom) -> Expr:
    direct: dict = {}
    chain: dict = {}
    for m, c in p.items():
        for idx, (a, e) in enumerate(m):
            if a is v:
                nm = m[:idx] + ((a, e - 1),) + m[idx + 1:] if e != 1 else m[:idx] + m[idx + 1:]
                direct[nm] = direct.get(nm, 0) + c * e
            elif a.kind >= LN and v in a.free:
                bucket = chain.setdefault(a, {})
                if a.kind == LN:
                    nm = m[:idx] + ((a, e - 1),) + m[idx + 1:] if e != 1 else m[:idx] + m[idx + 1:]
                else:
                    nm = m
                bucket[nm] = bucket.get(nm, 0) + c * e
    result = Expr.from_poly({m: _q(c) for m, c in direct.items()})
    for a, poly in chain.items():
        inner = a.payload.diff(v)
        if a.kind == LN:
            inner = inner / a.payload
        result = result + Expr.from_poly({m: _q(c) for m, c in poly.items()}) * inner
    return result


def _subs(e: Expr, binds: dict, cache: dict) -> Expr:
    keys = binds.keys()
    if not (e.free_atoms() & keys):
        return e
    n = _psubs(e.num, binds, cache)
    if e.den == _ONE:
        return n
    return n / _psubs(e.den, binds, cache)


def _atom_power(a: Atom, ex, binds: dict, cache: dict) -> Expr | None:
    """Value of ``a**ex`` under the bindings, or None when unaffected."""
    ck = (a, ex)
    if ck in cache:
        return cache[ck]
    if a in binds:
        if a.kind == EXP and not (isinstance(ex, int) or ex.denominator == 1):
            raise ValueError(f"cannot substitute for {a} raised to fractional power {ex}")
        val = binds[a] ** int(ex)
    elif a.kind == LN and (a.free & binds.keys()):
        val = ln(_subs(a.payload, binds, cache)) ** ex
    elif a.kind == EXP and (a.free & binds.keys()):
        val = exp(_subs(a.payload, binds, cache) * ex)
    else:
        val = None
    cache[ck] = val
    return val


def _psubs(p: dict, binds: dict, cache: dict) -> Expr:
    groups: dict = {}
    for m, c in p.items():
        kept = []
        changed = []
        for a, ex in m:
            if _atom_power(a, ex, binds, cache) is None:
                kept.append((a, ex))
            else:
                changed.append((a, ex))
        bucket = groups.setdefault(tuple(changed), {})
        km = tuple(kept)
        bucket[km] = bucket.get(km, 0) + c
    total = ZERO
    for changed, poly in groups.items():
        term = Expr.from_poly(poly)
        for a, ex in changed:
            term = term * cache[(a, ex)]
        total = total + term
    return total


# --------------------------------------------------------------------------
# ln / exp
# --------------------------------------------------------------------------

def ln(e) -> Expr:
    """Natural logarithm as an opaque atom; no rewrites are applied."""
    e = _to_expr(e)
    if e.is_zero():
        raise ValueError("ln of zero")
    return _to_expr(_intern(LN, e))


def exp(e) -> Expr:
    """Exponential; sums in the argument split into a product of ``Exp`` atom powers."""
    e = _to_expr(e)
    if e.is_zero():
        return ONE
    den = e.den
    pairs = []
    for m, c in e.num.items():
        payload = _canon({m: 1}, den)
        # payload numerator is a single monomial; move its coefficient into the power
        (pm, pc), = payload.num.items()
        if pc != 1:
            payload = Expr({pm: 1}, payload.den)
        pairs.append((_intern(EXP, payload), _q(Fraction(c) * pc)))
    return Expr({_mono_from(pairs): 1}, _ONE)


def exp_exponent(a: Atom, power) -> Expr:
    return a.payload * power


# --------------------------------------------------------------------------
# printing
# --------------------------------------------------------------------------

def _coeff_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_str(m: tuple) -> str:
    parts = []
    exp_arg = ZERO
    for a, e in sorted(m, key=lambda p: p[0].key):
        if a.kind == EXP:
            exp_arg = exp_arg + a.payload * e
        elif e == 1:
            parts.append(a.name)
        else:
            parts.append(f"{a.name}^{e}")
    if exp_arg.num:
        parts.append(f"exp({exp_arg})")
    return "*".join(parts)


def _poly_str(p: dict) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda mc: _mono_sort_key(mc[0]), reverse=True)
    out = []
    for i, (m, c) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        ms = _mono_str(m)
        if not ms:
            body = _coeff_str(a)
        elif a == 1:
            body = ms
        else:
            body = f"{_coeff_str(a)}*{ms}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def laurent_terms(e: Expr) -> dict:
    """Terms of ``e`` as a Laurent polynomial; requires a monomial denominator."""
    if len(e.den) != 1:
        raise ValueError(f"denominator is not a monomial: {e}")
    (dm, _), = e.den.items()
    if not dm:
        return dict(e.num)
    inv = _mono_inv(dm)
    return {_mono_mul(m, inv): c for m, c in e.num.items()}


def mono_expr(m: tuple, c=1) -> Expr:
    """Expression of a (possibly Laurent) monomial times a coefficient."""
    pos = tuple((a, e) for a, e in m if e > 0 or a.kind == EXP)
    neg = tuple((a, -e) for a, e in m if e < 0 and a.kind != EXP)
    if not neg:
        return Expr.from_poly({pos: _q(c)})
    return _canon({pos: _q(c)}, {neg: 1})


def mono_str(m: tuple) -> str:
    """Stable text form of a (possibly Laurent) monomial."""
    return str(mono_expr(m)) if m else "1"


def primitive(e: Expr, strip=()) -> Expr:
    """Numerator of ``e`` with coprime integer coefficients and positive leading term.

    Common powers of the atoms in ``strip`` and every common ``Exp`` factor
    are divided out as well.
    """
    if e.is_zero():
        return ZERO
    p = e.num
    shift = dict(_exp_content(p))
    for a in strip:
        lo = min(dict(m).get(a, 0) for m in p)
        if lo:
            shift[a] = lo
    if shift:
        p = _pmul_mono(p, _mono_inv(_mono_from(shift.items())))
    from math import gcd, lcm
    fr = [Fraction(c) for c in p.values()]
    den = lcm(*(c.denominator for c in fr))
    num = gcd(*(c.numerator for c in fr))
    scale = Fraction(den, num)
    if p[_lead_mono(p)] < 0:
        scale = -scale
    return Expr.from_poly({m: _q(Fraction(c) * scale) for m, c in p.items()})

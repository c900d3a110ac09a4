"""Exact univariate real-root machinery.

Univariate polynomials are handled internally as dense tuples of Python
integers, lowest degree first.  Every public function also accepts a
:class:`~vsqe.poly.Polynomial` in the main variable.  Sign queries tolerate
positive scaling, so Sturm sequences are built from pseudo-remainders with
positive multipliers and kept primitive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping, Sequence, Union

from .formula import And, Atom, FalseF, Formula, Or, TrueF, Not
from .poly import Polynomial, eval_params, to_dense

Dense = tuple[int, ...]
UPoly = Union[Polynomial, Sequence[int]]


class RealAlgError(ValueError):
    pass


class ZeroPolynomial(RealAlgError):
    pass


class NotARoot(RealAlgError):
    pass


# -- dense integer polynomial helpers -------------------------------------

def _strip(f: Sequence[int]) -> Dense:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def _dense(f: UPoly, x: str = "x") -> Dense:
    if isinstance(f, Polynomial):
        return to_dense(f, x)
    return _strip(f)


def _sgn(v: int | Fraction) -> int:
    return (v > 0) - (v < 0)


def _deriv(f: Dense) -> Dense:
    return tuple(i * c for i, c in enumerate(f))[1:]


def _content_sign_preserving(f: Dense) -> Dense:
    g = 0
    for c in f:
        g = gcd(g, c)
    if g > 1:
        return tuple(c // g for c in f)
    return f


def _value_sign(f: Dense, r: Fraction) -> int:
    """Sign of f(r), using integer arithmetic only."""
    if not f:
        return 0
    a, b = r.numerator, r.denominator
    acc = 0
    bp = 1
    # Horner on the homogenised form b^d f(a/b)
    for c in reversed(f):
        acc = acc * a + c * bp
        bp *= b
    return _sgn(acc)


def _prem(a: Dense, b: Dense) -> Dense:
    """Pseudo-remainder of a by b, scaled by a positive constant."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return a
    lc = b[-1]
    r = list(a)
    for k in range(da - db, -1, -1):
        coef = r[db + k]
        r = [lc * c for c in r]
        if coef:
            for i in range(db + 1):
                r[i + k] -= coef * b[i]
        r.pop()
    # each of the (da-db+1) steps multiplied by lc; fix the sign if odd
    if lc < 0 and (da - db + 1) % 2 == 1:
        r = [-c for c in r]
    return _content_sign_preserving(_strip(r))


def _gcd(a: Dense, b: Dense) -> Dense:
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _prem(a, b)
    if not a:
        return a
    a = _content_sign_preserving(a)
    if a[-1] < 0:
        a = tuple(-c for c in a)
    return a


def _divexact(f: Dense, g: Dense) -> Dense:
    """Quotient f / g over Q, returned as a primitive integer polynomial."""
    q = [Fraction(0)] * (len(f) - len(g) + 1)
    r = [Fraction(c) for c in f]
    lc = g[-1]
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(g) - 1] / lc
        q[k] = c
        for i, gc in enumerate(g):
            r[k + i] -= c * gc
    den = 1
    for c in q:
        den = den * c.denominator // gcd(den, c.denominator)
    out = _strip(int(c * den) for c in q)
    out = _content_sign_preserving(out)
    return out


def _mul(a: Dense, b: Dense) -> Dense:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


@lru_cache(maxsize=65536)
def squarefree_part(f: Dense) -> Dense:
    f = _strip(f)
    if len(f) <= 2:
        return _content_sign_preserving(f)
    g = _gcd(f, _deriv(f))
    if len(g) <= 1:
        return _content_sign_preserving(f)
    return _divexact(f, g)


@lru_cache(maxsize=65536)
def sturm_sequence(f: Dense) -> tuple[Dense, ...]:
    """Sturm sequence of the squarefree polynomial f (positive rescalings)."""
    seq = [f, _content_sign_preserving(_deriv(f))]
    while seq[-1]:
        r = _prem(seq[-2], seq[-1])
        seq.append(tuple(-c for c in r))
    seq.pop()
    return tuple(s for s in seq if s)


def _variations(signs: Sequence[int]) -> int:
    prev = 0
    v = 0
    for s in signs:
        if s:
            if prev and s != prev:
                v += 1
            prev = s
    return v


def _var_at(seq: Sequence[Dense], r: Fraction) -> int:
    return _variations([_value_sign(s, r) for s in seq])


def _var_at_inf(seq: Sequence[Dense], positive: bool) -> int:
    signs = []
    for s in seq:
        lc = _sgn(s[-1])
        if not positive and (len(s) - 1) % 2:
            lc = -lc
        signs.append(lc)
    return _variations(signs)


def count_roots(f: UPoly, lo: Fraction | None = None, hi: Fraction | None = None,
                x: str = "x") -> int:
    """Number of distinct real roots of f in ]lo, hi] (None means infinite)."""
    d = squarefree_part(_dense(f, x))
    if len(d) <= 1:
        if not d:
            raise ZeroPolynomial("zero polynomial has infinitely many roots")
        return 0
    seq = sturm_sequence(d)
    vlo = _var_at_inf(seq, False) if lo is None else _var_at(seq, Fraction(lo))
    vhi = _var_at_inf(seq, True) if hi is None else _var_at(seq, Fraction(hi))
    return vlo - vhi


def cauchy_bound(f: UPoly, x: str = "x") -> Fraction:
    d = _dense(f, x)
    if not d:
        raise ZeroPolynomial("no root bound for the zero polynomial")
    lc = abs(d[-1])
    return 1 + Fraction(max((abs(c) for c in d[:-1]), default=0), lc)


# -- algebraic numbers -----------------------------------------------------

@dataclass(frozen=True)
class IsolatingInterval:
    lo: Fraction
    hi: Fraction
    f: Dense

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise RealAlgError(f"empty interval ]{self.lo}, {self.hi}[")


@dataclass(frozen=True)
class AlgebraicNumber:
    """The unique root of ``sqfree`` inside the open interval."""

    interval: IsolatingInterval
    sqfree: Dense = field(compare=False)

    @property
    def lo(self) -> Fraction:
        return self.interval.lo

    @property
    def hi(self) -> Fraction:
        return self.interval.hi

    def refine(self) -> AlgebraicNumber:
        """Halve the interval; if the midpoint is the root, shrink around it."""
        lo, hi = self.lo, self.hi
        mid = (lo + hi) / 2
        sm = _value_sign(self.sqfree, mid)
        if sm == 0:
            q = (hi - lo) / 4
            lo, hi = mid - q, mid + q
        elif _value_sign(self.sqfree, lo) != sm:
            hi = mid
        else:
            lo = mid
        return AlgebraicNumber(IsolatingInterval(lo, hi, self.interval.f), self.sqfree)

    def exact(self) -> Fraction | None:
        """The root itself when it is rational and sits at the interval midpoint."""
        mid = (self.lo + self.hi) / 2
        return mid if _value_sign(self.sqfree, mid) == 0 else None

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __repr__(self) -> str:
        return f"AlgebraicNumber(]{self.lo}, {self.hi}[ ~ {self.approx():.6g})"


def _isolate(d: Dense) -> list[AlgebraicNumber]:
    s = squarefree_part(d)
    if len(s) <= 1:
        return []
    seq = sturm_sequence(s)
    b = cauchy_bound(s)
    while _value_sign(s, b) == 0 or _value_sign(s, -b) == 0:
        b += 1
    out: list[AlgebraicNumber] = []
    stack = [(-b, b, _var_at(seq, -b), _var_at(seq, b))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        c = vlo - vhi
        if c == 0:
            continue
        if c == 1:
            out.append(AlgebraicNumber(IsolatingInterval(lo, hi, d), s))
            continue
        mid = (lo + hi) / 2
        if _value_sign(s, mid) == 0:
            delta = (hi - lo) / 4
            while True:
                a, z = mid - delta, mid + delta
                va, vz = _var_at(seq, a), _var_at(seq, z)
                if _value_sign(s, a) and _value_sign(s, z) and va - vz == 1:
                    break
                delta /= 2
            out.append(AlgebraicNumber(IsolatingInterval(a, z, d), s))
            stack.append((lo, a, vlo, va))
            stack.append((z, hi, vz, vhi))
        else:
            vm = _var_at(seq, mid)
            stack.append((lo, mid, vlo, vm))
            stack.append((mid, hi, vm, vhi))
    out.sort(key=lambda r: r.lo)
    return out


@lru_cache(maxsize=16384)
def _isolate_cached(d: Dense) -> tuple[AlgebraicNumber, ...]:
    return tuple(_isolate(d))


def isolate_roots(f: UPoly, x: str = "x") -> list[AlgebraicNumber]:
    """Distinct real roots of f in ascending order with disjoint isolating intervals."""
    d = _dense(f, x)
    if not d:
        raise ZeroPolynomial("cannot isolate the roots of the zero polynomial")
    return list(_isolate_cached(d))


def _sign_at_algebraic(g: Dense, xi: AlgebraicNumber) -> int:
    if not g:
        return 0
    if len(g) == 1:
        return _sgn(g[0])
    h = _gcd(xi.sqfree, g)
    if len(h) > 1:
        hs = sturm_sequence(squarefree_part(h))
        if _var_at(hs, xi.lo) - _var_at(hs, xi.hi) > 0:
            return 0
    gs = squarefree_part(g)
    seq = sturm_sequence(gs)
    cur = xi
    while True:
        ex = cur.exact()
        if ex is not None:
            return _value_sign(g, ex)
        c = _var_at(seq, cur.lo) - _var_at(seq, cur.hi)
        if _value_sign(gs, cur.hi) == 0:
            c -= 1
        if c == 0:
            return _value_sign(g, (cur.lo + cur.hi) / 2)
        cur = cur.refine()


@lru_cache(maxsize=262144)
def _sign_cached(g: Dense, xi: AlgebraicNumber) -> int:
    return _sign_at_algebraic(g, xi)


def sign_at_algebraic(g: UPoly, xi: AlgebraicNumber, x: str = "x") -> int:
    """Exact sign of g at the algebraic number xi."""
    return _sign_cached(_dense(g, x), xi)


def thom_code_at(f: UPoly, xi: AlgebraicNumber, n: int, x: str = "x") -> tuple[int, ...]:
    """Signs of f', ..., f^(n) at a root xi of f."""
    d = _dense(f, x)
    if sign_at_algebraic(d, xi) != 0:
        raise NotARoot(f"{xi!r} is not a root")
    out = []
    for _ in range(n):
        d = _deriv(d)
        out.append(sign_at_algebraic(d, xi))
    return tuple(out)


def roots_with_code(f: UPoly, s: Sequence[int], x: str = "x") -> list[AlgebraicNumber]:
    """All roots of f whose Thom code (length len(s)) equals s."""
    d = _dense(f, x)
    if not d:
        return []
    s = tuple(s)
    return [r for r in isolate_roots(d) if thom_code_at(d, r, len(s)) == s]


def find_root_by_code(f: UPoly, s: Sequence[int], x: str = "x") -> AlgebraicNumber | None:
    d = _dense(f, x)
    if not d or not any(s):
        return None
    s = tuple(s)
    for r in isolate_roots(d):
        if thom_code_at(d, r, len(s)) == s:
            return r
    return None


# -- decision oracle -------------------------------------------------------

def _instantiate_atoms(phi: Formula, alpha: Mapping[str, Fraction | int], x: str
                       ) -> dict[Polynomial, Dense]:
    out: dict[Polynomial, Dense] = {}
    for a in _iter_atoms(phi):
        if a.poly not in out:
            g, _den = eval_params(a.poly, alpha, x)
            out[a.poly] = to_dense(g, x)
    return out


def _iter_atoms(phi: Formula):
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            yield f
        elif isinstance(f, (And, Or)):
            stack.extend(f.args)
        elif isinstance(f, Not):
            stack.append(f.arg)
        elif isinstance(f, (TrueF, FalseF)):
            pass
        else:
            raise RealAlgError(f"quantified subformula not allowed here: {f}")


def _truth(phi: Formula, sign_of) -> bool:
    if isinstance(phi, Atom):
        return phi.rel.holds(sign_of(phi.poly))
    if isinstance(phi, And):
        return all(_truth(a, sign_of) for a in phi.args)
    if isinstance(phi, Or):
        return any(_truth(a, sign_of) for a in phi.args)
    if isinstance(phi, Not):
        return not _truth(phi.arg, sign_of)
    return isinstance(phi, TrueF)


def sample_points(polys: Sequence[Dense]) -> list[Fraction | AlgebraicNumber]:
    """Roots of the given polynomials, points between them, and points beyond."""
    nonconst = [p for p in polys if len(p) > 1]
    if not nonconst:
        return [Fraction(0)]
    prod: Dense = (1,)
    seen = set()
    bound = Fraction(0)
    for p in nonconst:
        s = squarefree_part(p)
        if s in seen:
            continue
        seen.add(s)
        prod = _mul(prod, s)
        bound = max(bound, cauchy_bound(s))
    roots = isolate_roots(prod)
    pts: list[Fraction | AlgebraicNumber] = [-(bound + 1)]
    for i, r in enumerate(roots):
        if i:
            pts.append((roots[i - 1].hi + r.lo) / 2)
        pts.append(r)
    pts.append(bound + 1)
    return pts


def decide_exists_1d(phi: Formula, alpha: Mapping[str, Fraction | int] | None = None,
                     x: str = "x") -> bool:
    """Exact truth of ``exists x. phi`` after instantiating the parameters by alpha."""
    polys = _instantiate_atoms(phi, alpha or {}, x)
    candidates = list(polys.values())
    # A conjunct p = 0 with nonconstant p confines all witnesses to its roots.
    if isinstance(phi, And):
        for a in phi.args:
            if isinstance(a, Atom) and a.rel.name == "EQ" and len(polys[a.poly]) > 1:
                points: list = isolate_roots(polys[a.poly])
                break
        else:
            points = sample_points(candidates)
    elif isinstance(phi, Atom) and phi.rel.name == "EQ" and len(polys[phi.poly]) > 1:
        points = isolate_roots(polys[phi.poly])
    else:
        points = sample_points(candidates)
    for pt in points:
        if isinstance(pt, AlgebraicNumber):
            def sign_of(p, pt=pt):
                return sign_at_algebraic(polys[p], pt)
        else:
            def sign_of(p, pt=pt):
                return _value_sign(polys[p], pt)
        if _truth(phi, sign_of):
            return True
    return False

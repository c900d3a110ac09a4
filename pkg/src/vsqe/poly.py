"""Sparse multivariate polynomials with integer coefficients.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by
:func:`var_key`, exponents strictly positive.  A :class:`Polynomial` maps
monomials to nonzero Python integers and is immutable and hashable, so it can
be used as a dictionary key throughout the elimination machinery.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

Monomial = tuple[tuple[str, int], ...]
Coeff = Union[int, "Polynomial"]

_NAME = re.compile(r"^([A-Za-z_]*?)(\d*)$")


class PolynomialError(ValueError):
    pass


class LengthTooSmall(PolynomialError):
    pass


class UnassignedParameter(PolynomialError):
    pass


def var_key(name: str) -> tuple[str, int, str]:
    """Sort key for variable names; numeric suffixes compare numerically."""
    m = _NAME.match(name)
    if m and m.group(2):
        return (m.group(1), int(m.group(2)), name)
    return (name, -1, name)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items(), key=lambda ve: var_key(ve[0])))


class Polynomial:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, int] = {}
        for m, c in items:
            if c:
                clean[m] = clean.get(m, 0) + c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash: int | None = None

    @classmethod
    def var(cls, name: str) -> Polynomial:
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c: int) -> Polynomial:
        return cls({(): int(c)})

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> Polynomial:
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- basic protocol -------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.infix()!r})"

    def __str__(self) -> str:
        return self.infix()

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _lift(other: Coeff) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Coeff) -> Polynomial:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Coeff) -> Polynomial:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Coeff) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Coeff) -> Polynomial:
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return Polynomial._raw({m: c * other for m, c in self._terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise PolynomialError("negative exponent")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, c: int) -> Polynomial:
        out = {}
        for m, a in self._terms.items():
            q, r = divmod(a, c)
            if r:
                raise PolynomialError(f"{self} not divisible by {c}")
            out[m] = q
        return Polynomial._raw(out)

    # -- structure ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant(self) -> int:
        """Value of a constant polynomial."""
        if not self.is_constant():
            raise PolynomialError(f"{self} is not constant")
        return self._terms.get((), 0)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, var: str) -> int:
        """Degree in ``var``; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        return max((dict(m).get(var, 0) for m in self._terms), default=0)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e for _, e in m) for m in self._terms)

    def coeffs(self, var: str, length: int | None = None) -> list[Polynomial]:
        """Coefficients in ``var``, highest power first, left-padded with zeros."""
        d = self.degree(var)
        if length is None:
            length = max(d, 0) + 1
        if length < d + 1:
            raise LengthTooSmall(f"need at least {d + 1} coefficients, got {length}")
        buckets: list[dict[Monomial, int]] = [{} for _ in range(length)]
        for m, c in self._terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == var:
                    e = k
                else:
                    rest.append((v, k))
            buckets[length - 1 - e][tuple(rest)] = c
        return [Polynomial._raw(b) for b in buckets]

    def derive(self, var: str, k: int = 1) -> Polynomial:
        if k < 0:
            raise PolynomialError("negative derivative order")
        if k == 0:
            return self
        out: dict[Monomial, int] = {}
        for m, c in self._terms.items():
            e = dict(m).get(var, 0)
            if e < k:
                continue
            factor = 1
            for j in range(k):
                factor *= e - j
            nm = tuple((v, x - k) if v == var else (v, x) for v, x in m)
            nm = tuple((v, x) for v, x in nm if x)
            out[nm] = out.get(nm, 0) + c * factor
        return Polynomial._raw({m: c for m, c in out.items() if c})

    def subs(self, values: Mapping[str, Coeff]) -> Polynomial:
        """Substitute polynomials (or integers) for variables."""
        if not values or not (self.variables & values.keys()):
            return self
        lifted = {v: self._lift(p) for v, p in values.items()}
        powers: dict[tuple[str, int], Polynomial] = {}
        acc = ZERO
        for m, c in self._terms.items():
            kept = []
            term = Polynomial.const(c)
            for v, e in m:
                if v in lifted:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = lifted[v] ** e
                    term = term * powers[key]
                else:
                    kept.append((v, e))
            if kept:
                term = term * Polynomial._raw({tuple(kept): 1})
            acc = acc + term
        return acc

    def eval(self, values: Mapping[str, Fraction | int]) -> Fraction:
        """Exact value at a full assignment of the variables."""
        total = Fraction(0)
        for m, c in self._terms.items():
            t = Fraction(c)
            for v, e in m:
                try:
                    t *= Fraction(values[v]) ** e
                except KeyError:
                    raise UnassignedParameter(f"variable {v!r} is not assigned") from None
            total += t
        return total

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    def primitive(self) -> Polynomial:
        g = self.content()
        if g in (0, 1):
            return self
        return Polynomial._raw({m: c // g for m, c in self._terms.items()})

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in descending lexicographic order (variables ordered by var_key)."""
        order = sorted(self.variables, key=var_key)
        def key(item: tuple[Monomial, int]) -> tuple[int, ...]:
            d = dict(item[0])
            return tuple(d.get(v, 0) for v in order)
        return sorted(self._terms.items(), key=key, reverse=True)

    def leading_coefficient(self) -> int:
        if not self._terms:
            return 0
        return self.sorted_terms()[0][1]

    def infix(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


ZERO = Polynomial()
ONE = Polynomial.const(1)


def var(name: str) -> Polynomial:
    return Polynomial.var(name)


def const(c: int) -> Polynomial:
    return Polynomial.const(c)


def derive(p: Polynomial, k: int = 1, x: str = "x") -> Polynomial:
    """k-th derivative with respect to the main variable ``x``."""
    return p.derive(x, k)


def coeffs_x(p: Polynomial, n: int | None = None, x: str = "x") -> list[Polynomial]:
    """Coefficients ``[b_n, ..., b_0]`` of ``p`` in ``x``, padded to ``n + 1`` entries."""
    return p.coeffs(x, None if n is None else n + 1)


def eval_params(p: Polynomial, alpha: Mapping[str, Fraction | int],
                x: str = "x") -> tuple[Polynomial, int]:
    """Instantiate every parameter of ``p``; returns ``(g, d)`` with ``p<alpha> = g / d``.

    ``g`` is univariate in ``x`` with integer coefficients and ``d > 0``.
    """
    missing = p.variables - {x} - alpha.keys()
    if missing:
        raise UnassignedParameter(f"unassigned parameters: {sorted(missing, key=var_key)}")
    coeffs: dict[int, Fraction] = {}
    for m, c in p.terms.items():
        t = Fraction(c)
        e = 0
        for v, k in m:
            if v == x:
                e = k
            else:
                t *= Fraction(alpha[v]) ** k
        coeffs[e] = coeffs.get(e, Fraction(0)) + t
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    terms = {}
    for e, c in coeffs.items():
        if c:
            terms[((x, e),) if e else ()] = int(c * den)
    return Polynomial._raw(terms), den


def eval_point(f: Polynomial, xi: Fraction | int, x: str = "x") -> Fraction:
    """Exact value of a univariate polynomial at a rational point."""
    extra = f.variables - {x}
    if extra:
        raise UnassignedParameter(f"not univariate in {x}: {sorted(extra)}")
    return f.eval({x: Fraction(xi)})


def to_dense(f: Polynomial, x: str = "x") -> tuple[int, ...]:
    """Integer coefficients of a univariate polynomial, lowest degree first."""
    extra = f.variables - {x}
    if extra:
        raise UnassignedParameter(f"not univariate in {x}: {sorted(extra)}")
    d = f.degree(x)
    out = [0] * (d + 1)
    for m, c in f.terms.items():
        out[m[0][1] if m else 0] = c
    return tuple(out)


def from_dense(coeffs: Iterable[int], x: str = "x") -> Polynomial:
    return Polynomial({((x, i),) if i else (): c for i, c in enumerate(coeffs)})

"""Sign sequences, parametric roots and their guards.

A parametric root ``(p, s)`` names, for each parameter point, the unique real
root of the instantiated ``p`` whose derivatives ``p', ..., p^(n)`` carry the
signs ``s``.  The guard is the existential sentence asserting that such a root
exists.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .formula import EQ, GT, LT, And, Atom, Exists, Formula, Relation
from .poly import Polynomial, eval_params
from .realalg import _dense, _value_sign, find_root_by_code, decide_exists_1d

SignSequence = tuple[int, ...]


class ThomError(ValueError):
    pass


class ZeroSignSequence(ThomError):
    """The all-zero sequence is the code of no root."""


class GuardFailsAtPoint(ThomError):
    pass


_SIGMA = {-1: LT, 0: EQ, 1: GT}


def sigma(si: int) -> Relation:
    return _SIGMA[si]


def _check_nonzero(s: Sequence[int]) -> None:
    if not any(s):
        raise ZeroSignSequence(f"sign sequence {tuple(s)} is zero")


def all_candidate_codes(n: int) -> list[SignSequence]:
    """All nonzero sign sequences of length n, in lexicographic order (-1 < 0 < 1)."""
    if n < 1:
        raise ValueError("code length must be positive")
    return [s for s in itertools.product((-1, 0, 1), repeat=n) if any(s)]


def sgnr_comb(s: Sequence[int]) -> int:
    """Sign of p just right of the root coded by s."""
    _check_nonzero(s)
    return next(si for si in s if si)


def sgnl_comb(s: Sequence[int]) -> int:
    """Sign of p just left of the root coded by s."""
    _check_nonzero(s)
    k, sk = next((i, si) for i, si in enumerate(s, 1) if si)
    return sk if k % 2 == 0 else -sk


def guard_body(p: Polynomial, s: Sequence[int], x: str = "x") -> Formula:
    """The matrix ``p = 0 and p^(i) sigma(s_i) 0`` of the guard sentence."""
    _check_nonzero(s)
    conj = [Atom(p, EQ)]
    d = p
    for si in s:
        d = d.derive(x)
        conj.append(Atom(d, sigma(si)))
    return And(tuple(conj))


def guard_tarski(p: Polynomial, s: Sequence[int], x: str = "x") -> Formula:
    return Exists(x, guard_body(p, s, x))


@dataclass(frozen=True)
class ParametricRoot:
    p: Polynomial
    s: SignSequence
    x: str = "x"

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", tuple(self.s))
        _check_nonzero(self.s)
        if self.p.degree(self.x) > len(self.s):
            raise ThomError(f"degree of {self.p} exceeds code length {len(self.s)}")

    @property
    def n(self) -> int:
        return len(self.s)

    def __str__(self) -> str:
        return f"({self.p}, {self.s})"


@dataclass(frozen=True)
class Guard:
    tarski: Formula
    qf: Formula | None = field(default=None, compare=False)


def guard_of(pr: ParametricRoot) -> Guard:
    return Guard(guard_tarski(pr.p, pr.s, pr.x))


def guard_holds(p: Polynomial, s: Sequence[int], alpha: Mapping[str, Fraction | int],
                x: str = "x") -> bool:
    """Exact truth of the guard sentence at a parameter point."""
    return decide_exists_1d(guard_body(p, s, x), alpha, x)


def sgn_lr_numeric(p: Polynomial, s: Sequence[int], alpha: Mapping[str, Fraction | int],
                   x: str = "x") -> tuple[int, int]:
    """Signs of p<alpha> at the endpoints of an isolating interval of the coded root."""
    if not guard_holds(p, s, alpha, x):
        raise GuardFailsAtPoint(f"guard of ({p}, {tuple(s)}) fails at {dict(alpha)}")
    f, _ = eval_params(p, alpha, x)
    xi = find_root_by_code(f, s, x)
    assert xi is not None
    # isolating intervals come from the squarefree part: no other root inside,
    # endpoints are not roots
    d = _dense(f, x)
    return _value_sign(d, xi.lo), _value_sign(d, xi.hi)


# -- witness search -----------------------------------------------------------

GRID = tuple(range(-5, 6))


def _random_rational(rng: random.Random, bound: int = 50) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _from_roots(rng: random.Random, n: int) -> list[int]:
    """Integer coefficients (highest first, length n+1) of c * prod(x - r_i)."""
    deg = rng.randint(0, n)
    coeffs = [rng.choice((-2, -1, 1, 2))]
    for _ in range(deg):
        r = rng.randint(-3, 3)
        nxt = coeffs + [0]
        for i, c in enumerate(coeffs):
            nxt[i + 1] -= r * c
        coeffs = nxt
    return [0] * (n - deg) + coeffs


def candidate_points(params: Sequence[str], rng: random.Random, budget: int = 10000,
                     structured_degree: int | None = None) -> Iterator[dict[str, Fraction]]:
    """Parameter points from the integer grid, random rationals and, when
    ``structured_degree`` is given, coefficient vectors of polynomials with
    small integer roots (params are then read as coefficients, highest first)."""
    for i in range(budget):
        mode = i % 3
        if mode == 2 and structured_degree is not None:
            vals = _from_roots(rng, structured_degree)
            yield {v: Fraction(c) for v, c in zip(params, vals)}
        elif mode == 1:
            yield {v: _random_rational(rng) for v in params}
        else:
            yield {v: Fraction(rng.choice(GRID)) for v in params}


def find_guard_witness(p: Polynomial, s: Sequence[int], params: Sequence[str],
                       rng: random.Random, budget: int = 10000,
                       x: str = "x") -> dict[str, Fraction] | None:
    """Search for a parameter point satisfying the guard; None if the budget runs out.

    ``params`` are taken to be the coefficients of p (highest first) for the
    structured part of the search when their count is deg_x(p) + 1.
    """
    structured = len(s) if len(params) == len(s) + 1 else None
    for alpha in candidate_points(params, rng, budget, structured):
        if guard_holds(p, s, alpha, x):
            return alpha
    return None


def generic_poly(n: int, prefix: str = "u", x: str = "x") -> Polynomial:
    """sum_i prefix_i * x^i for i = 0..n."""
    xv = Polynomial.var(x)
    out = Polynomial()
    for i in range(n + 1):
        out = out + Polynomial.var(f"{prefix}{i}") * xv ** i
    return out

"""Virtual substitution of test points into atoms and positive formulas.

Three kinds of test point are substituted for the main variable: a Thom-coded
parametric root, a root plus a positive infinitesimal, and minus infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .formula import (EQ, FALSE, GE, GT, LE, LT, NE, TRUE, And, Atom, FalseF, Formula,
                      Or, Relation, TrueF, and_, fold, normalize_atom, or_)
from .poly import Polynomial, coeffs_x
from .qea import BackendConfig, QeQuery, qe_instance
from .realalg import find_root_by_code, sign_at_algebraic, thom_code_at
from .thom import ParametricRoot, all_candidate_codes, sgnr_comb


@dataclass(frozen=True)
class Root:
    pr: ParametricRoot

    def __str__(self) -> str:
        return f"root{self.pr}"


@dataclass(frozen=True)
class RootPlusEps:
    pr: ParametricRoot

    def __str__(self) -> str:
        return f"root{self.pr}+eps"


@dataclass(frozen=True)
class MinusInfinity:
    def __str__(self) -> str:
        return "-inf"


MINF = MinusInfinity()
EliminationTerm = Union[Root, RootPlusEps, MinusInfinity]


def _coeffs(pr: ParametricRoot, q: Polynomial) -> tuple[list[Polynomial], list[Polynomial]]:
    return coeffs_x(pr.p, pr.n, pr.x), coeffs_x(q, pr.n, pr.x)


def _parameter_free(*polys: Polynomial, x: str = "x") -> bool:
    return all(p.variables <= {x} for p in polys)


def vs_root(atom: Atom, pr: ParametricRoot, config: BackendConfig) -> Formula:
    """(q rel 0) at the root coded by pr."""
    pc, qc = _coeffs(pr, atom.poly)
    return qe_instance(QeQuery.subst(pr.s, atom.rel), config, pc, qc)


def nu(pr: ParametricRoot, qt: ParametricRoot, config: BackendConfig) -> Formula:
    """The two coded roots exist and coincide."""
    pc, qc = _coeffs(pr, qt.p)
    return qe_instance(QeQuery.nu(pr.s, qt.s), config, pc, qc)


def _all_zero(q: Polynomial, x: str) -> Formula:
    return fold(and_(*(normalize_atom(b, EQ) for b in coeffs_x(q, None, x)))) \
        if not q.is_zero() else TRUE


def _some_nonzero(q: Polynomial, x: str) -> Formula:
    return fold(or_(*(normalize_atom(b, NE) for b in coeffs_x(q, None, x)))) \
        if not q.is_zero() else FALSE


def _nu_family(atom: Atom, pr: ParametricRoot, right: int, config: BackendConfig) -> Formula:
    """Disjunction of nu over all codes t of q with right sign ``right``."""
    q = atom.poly
    if config.pointfree_first and _parameter_free(pr.p, q, x=pr.x):
        # decide the whole family at once from the code of q at the root
        xi = find_root_by_code(pr.p, pr.s, pr.x)
        if xi is None or q.is_zero() or sign_at_algebraic(q, xi, pr.x) != 0:
            return FALSE
        t = thom_code_at(q, xi, pr.n, pr.x)
        return TRUE if any(t) and sgnr_comb(t) == right else FALSE
    parts = []
    for t in all_candidate_codes(pr.n):
        if sgnr_comb(t) != right:
            continue
        f = nu(pr, ParametricRoot(q, t, pr.x), config)
        if isinstance(f, TrueF):
            return TRUE
        if not isinstance(f, FalseF):
            parts.append(f)
    return or_(*parts)


def vs_eps(atom: Atom, pr: ParametricRoot, config: BackendConfig) -> Formula:
    """(q rel 0) just right of the root coded by pr."""
    q, rel, x = atom.poly, atom.rel, pr.x
    if rel is EQ:
        return _all_zero(q, x)
    if rel is NE:
        return _some_nonzero(q, x)
    if rel in (LT, GT):
        strict = vs_root(Atom(q, rel), pr, config)
        if isinstance(strict, TrueF):
            return TRUE
        return fold(or_(strict, _nu_family(atom, pr, -1 if rel is LT else 1, config)))
    strict = LT if rel is LE else GT
    return fold(or_(vs_eps(Atom(q, strict), pr, config), vs_eps(Atom(q, EQ), pr, config)))


def _mu(q: Polynomial, x: str, rel: Relation) -> Formula:
    """(q rel 0) at minus infinity for rel in {<, >}, unfolded."""
    bs = list(reversed(coeffs_x(q, None, x))) if not q.is_zero() else []
    d = len(bs) - 1
    parts = []
    for k in range(d, -1, -1):
        higher = [normalize_atom(bs[j], EQ) for j in range(k + 1, d + 1)]
        lead = bs[k] if k % 2 == 0 else -bs[k]
        parts.append(and_(*higher, normalize_atom(lead, rel)))
    return or_(*parts)


def vs_minf(atom: Atom, x: str = "x", folded: bool = True) -> Formula:
    """(q rel 0) at minus infinity; needs no backend."""
    q, rel = atom.poly, atom.rel
    if rel in (LT, GT):
        out = _mu(q, x, rel)
    elif rel is EQ:
        out = and_(*(normalize_atom(b, EQ) for b in coeffs_x(q, None, x))) \
            if not q.is_zero() else TRUE
    elif rel is NE:
        out = or_(*(normalize_atom(b, NE) for b in coeffs_x(q, None, x))) \
            if not q.is_zero() else FALSE
    else:
        strict = LT if rel is LE else GT
        out = Or((vs_minf(Atom(q, strict), x, False), vs_minf(Atom(q, EQ), x, False)))
    return fold(out) if folded else out


def vs_atom(atom: Atom, term: EliminationTerm, config: BackendConfig, x: str = "x") -> Formula:
    if isinstance(term, MinusInfinity):
        return vs_minf(atom, x)
    if isinstance(term, Root):
        return vs_root(atom, term.pr, config)
    return vs_eps(atom, term.pr, config)


def vs_formula(phi: Formula, term: EliminationTerm, config: BackendConfig,
               x: str = "x") -> Formula:
    """Substitute a test point into every atom of a positive formula."""
    memo: dict[Atom, Formula] = {}

    def walk(f: Formula) -> Formula:
        if isinstance(f, Atom):
            r = memo.get(f)
            if r is None:
                r = memo[f] = vs_atom(f, term, config, x)
            return r
        if isinstance(f, And):
            return And(tuple(walk(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(walk(a) for a in f.args))
        if isinstance(f, (TrueF, FalseF)):
            return f
        raise TypeError(f"vs_formula needs a positive quantifier-free formula: {f}")

    return fold(walk(phi))

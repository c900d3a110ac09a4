"""Elimination sets and the elimination drivers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .formula import (EQ, FALSE, GE, GT, LE, LT, NE, TRUE, And, Atom, Evaluator, Exists,
                      FalseF, Forall, Formula, Not, Or, TrueF, atoms, flatten, fold,
                      free_vars, is_quantifier_free, or_, positive_form, sorted_vars)
from .poly import Polynomial, coeffs_x
from .qea import (BackendConfig, BridgeBackend, NoBackendApplicable, PointfreeBackend,
                  QeQuery, TablesBackend, qe_instance)
from .realalg import isolate_roots, thom_code_at
from .thom import ParametricRoot, all_candidate_codes, candidate_points, sgnl_comb, sgnr_comb
from .vsubst import MINF, EliminationTerm, MinusInfinity, Root, RootPlusEps, vs_formula


class ElimError(Exception):
    pass


class DegreeExceedsBound(ElimError):
    pass


class DegreeGrowthExceedsCapability(ElimError):
    def __init__(self, var: str, degree: int, capability: float):
        super().__init__(f"degree {degree} in {var} exceeds backend capability {capability}")
        self.var = var
        self.degree = degree
        self.capability = capability


class NotPrenex(ElimError):
    pass


class Mode(Enum):
    FULL = "full"
    LOWER = "lower"


# -- elimination terms ---------------------------------------------------------

_ROOT_RELS = (EQ, LE, GE)


def _kind_for(rel) -> type:
    return Root if rel in _ROOT_RELS else RootPlusEps


def _lower_keep(rel, s) -> bool:
    if rel in (EQ, NE):
        return True
    if rel is LT:
        return sgnr_comb(s) == -1
    if rel is GT:
        return sgnr_comb(s) == 1
    if rel is LE:
        return sgnl_comb(s) == 1
    return sgnl_comb(s) == -1


def _terms(atom: Atom, n: int, x: str, mode: Mode, codes=None) -> list[EliminationTerm]:
    if atom.poly.degree(x) < 1:
        return []
    kind = _kind_for(atom.rel)
    out = []
    for s in all_candidate_codes(n) if codes is None else codes:
        if mode is Mode.LOWER and not _lower_keep(atom.rel, s):
            continue
        out.append(kind(ParametricRoot(atom.poly, s, x)))
    return out


def terms_full(atom: Atom, n: int, x: str = "x") -> list[EliminationTerm]:
    """One test point per candidate code: roots for =, <=, >=; root+eps otherwise."""
    return _terms(atom, n, x, Mode.FULL)


def terms_lower(atom: Atom, n: int, x: str = "x") -> list[EliminationTerm]:
    """Only the test points that can be the lower end of a solution interval."""
    return _terms(atom, n, x, Mode.LOWER)


@dataclass(frozen=True)
class EliminationSet:
    terms: tuple[EliminationTerm, ...]
    provenance: tuple[int | None, ...]

    def __len__(self) -> int:
        return len(self.terms)


def _actual_codes(p: Polynomial, n: int, x: str) -> list[tuple[int, ...]]:
    """Codes of the real roots of a parameter-free p, in candidate order."""
    codes = {thom_code_at(p, r, n, x) for r in isolate_roots(p, x)}
    return sorted(codes)


def elimination_set(phi: Formula, x: str, n: int, mode: Mode = Mode.LOWER,
                    config: BackendConfig | None = None) -> EliminationSet:
    """Minus infinity first, then terms by (atom index, code order), deduplicated.

    With a configuration whose parameter-free queries are decided exactly, a
    parameter-free atom contributes only the codes of its actual roots: every
    other code has a guard that decides to false.
    """
    exact = config is not None and config.pointfree_first
    terms: list[EliminationTerm] = [MINF]
    prov: list[int | None] = [None]
    seen = set()
    for i, a in enumerate(atoms(phi)):
        d = a.poly.degree(x)
        if d > n:
            raise DegreeExceedsBound(f"degree {d} of {a.poly} in {x} exceeds bound {n}")
        codes = None
        if exact and d >= 1 and a.poly.variables <= {x}:
            codes = _actual_codes(a.poly, n, x)
        for t in _terms(a, n, x, mode, codes):
            key = (type(t), t.pr.p, t.pr.s)
            if key not in seen:
                seen.add(key)
                terms.append(t)
                prov.append(i)
    return EliminationSet(tuple(terms), tuple(prov))


# -- guard screening -----------------------------------------------------------

class Sat(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SatResult:
    status: Sat
    witness: Mapping[str, Fraction] | None = None


def _range(p: Polynomial) -> tuple[Fraction | None, Fraction | None]:
    """Range of p over all of R^m by interval arithmetic (None is unbounded)."""
    lo: Fraction | None = Fraction(0)
    hi: Fraction | None = Fraction(0)
    for mono, c in p.terms.items():
        if not mono:
            lo = None if lo is None else lo + c
            hi = None if hi is None else hi + c
        elif all(e % 2 == 0 for _, e in mono):
            if c > 0:
                hi = None
            else:
                lo = None
        else:
            lo = hi = None
    return lo, hi


def _atom_impossible(a: Atom) -> bool:
    lo, hi = _range(a.poly)
    r = a.rel
    if r is EQ:
        return (lo is not None and lo > 0) or (hi is not None and hi < 0)
    if r is NE:
        return lo is not None and hi is not None and lo == hi == 0
    if r is LT:
        return lo is not None and lo >= 0
    if r is LE:
        return lo is not None and lo > 0
    if r is GT:
        return hi is not None and hi <= 0
    return hi is not None and hi < 0


def _prune(phi: Formula) -> Formula:
    if isinstance(phi, Atom):
        return FALSE if _atom_impossible(phi) else phi
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(_prune(a) for a in phi.args))
    return phi


def guard_sat(guard_qf: Formula, budget: int = 10000, seed: int = 0) -> SatResult:
    """Sat with a witness, Unsat when provably empty, Unknown otherwise."""
    g = fold(guard_qf)
    if isinstance(g, FalseF):
        return SatResult(Sat.UNSAT)
    if isinstance(g, TrueF):
        return SatResult(Sat.SAT, {})
    if isinstance(fold(_prune(g)), FalseF):
        return SatResult(Sat.UNSAT)
    params = sorted_vars(free_vars(g))
    rng = random.Random(seed)
    for alpha in candidate_points(params, rng, budget):
        if Evaluator(alpha)(g):
            return SatResult(Sat.SAT, alpha)
    return SatResult(Sat.UNKNOWN)


# -- drivers -------------------------------------------------------------------

@dataclass
class ElimStats:
    terms: int = 0
    dropped: int = 0
    unknown: int = 0
    kept: list = field(default_factory=list)


def eliminate_exists(phi: Formula, x: str = "x", n: int | None = None,
                     mode: Mode = Mode.LOWER, config: BackendConfig | None = None,
                     fold_result: bool = True, sat_budget: int = 0,
                     stats: ElimStats | None = None) -> Formula:
    """Quantifier-free equivalent of ``exists x. phi`` for positive phi."""
    config = config or BackendConfig.default()
    phi = fold(phi)
    if isinstance(phi, (TrueF, FalseF)):
        return phi
    if n is None:
        n = max(1, max((a.poly.degree(x) for a in atoms(phi)), default=1))
    es = elimination_set(phi, x, n, mode, config)
    stats = stats if stats is not None else ElimStats()
    stats.terms += len(es)
    disjuncts = []
    for t in es.terms:
        if not isinstance(t, MinusInfinity):
            g = qe_instance(QeQuery.guard(t.pr.s), config, coeffs_x(t.pr.p, n, x))
            res = guard_sat(g, sat_budget)
            if res.status is Sat.UNSAT:
                stats.dropped += 1
                continue
            if res.status is Sat.UNKNOWN:
                stats.unknown += 1
            stats.kept.append(t)
        f = vs_formula(phi, t, config, x)
        if fold_result and isinstance(f, TrueF):
            return TRUE
        disjuncts.append(f)
    out = or_(*disjuncts)
    return flatten(fold(out)) if fold_result else out


def split_prenex(phi: Formula) -> tuple[list[tuple[type, str]], Formula]:
    prefix = []
    while isinstance(phi, (Exists, Forall)):
        prefix.append((type(phi), phi.var))
        phi = phi.arg
    if not is_quantifier_free(phi):
        raise NotPrenex("input must be in prenex form")
    return prefix, phi


def max_degree_in(phi: Formula, x: str) -> int:
    return max((a.poly.degree(x) for a in atoms(phi)), default=0)


def framework_degree(d: int, parametric: bool, config: BackendConfig, var: str = "x") -> int:
    """The code length used to eliminate a variable of degree d."""
    for b in config.backends:
        if isinstance(b, PointfreeBackend) and not parametric:
            return d
        if isinstance(b, TablesBackend):
            fits = [k for k in b.degrees if k >= d]
            if fits:
                return min(fits)
        if isinstance(b, BridgeBackend) and b.max_degree(True) >= d:
            return d
    raise DegreeGrowthExceedsCapability(var, d, config.max_degree(parametric))


def eliminate_block(phi: Formula, n: int | None = None, mode: Mode = Mode.LOWER,
                    config: BackendConfig | None = None, fold_result: bool = True,
                    stats: ElimStats | None = None) -> Formula:
    """Eliminate a prenex block innermost first; forall is handled as not-exists-not."""
    config = config or BackendConfig.default()
    prefix, matrix = split_prenex(phi)
    if not prefix:
        return phi
    psi = positive_form(matrix)
    for q, var in reversed(prefix):
        if q is Forall:
            psi = positive_form(Not(psi))
        d = max_degree_in(psi, var)
        if d >= 1:
            parametric = bool(free_vars(psi) - {var})
            cap = config.max_degree(parametric)
            if d > cap or (n is not None and d > n):
                if n is not None and d <= cap:
                    raise DegreeExceedsBound(f"degree {d} in {var} exceeds bound {n}")
                raise DegreeGrowthExceedsCapability(var, d, cap)
            k = n if n is not None else framework_degree(d, parametric, config, var)
            psi = eliminate_exists(psi, var, k, mode, config, fold_result, stats=stats)
        if q is Forall:
            psi = positive_form(Not(psi))
        if fold_result:
            psi = fold(psi)
    return psi

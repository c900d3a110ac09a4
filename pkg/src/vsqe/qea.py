"""The external elimination procedure for fixed-shape existential formulas.

Every query asks for a quantifier-free equivalent of one of three sentences in
generic coefficients ``u0..un`` (the root polynomial ``p``) and ``v0..vn``
(the polynomial ``q`` being tested):

* guard ``(s)``:      exists x. p = 0 and p^(i) sigma(s_i) 0
* subst ``(s, rel)``: the guard matrix and ``q rel 0``
* nu ``(s, t)``:      the guard matrix and the guard matrix of ``(q, t)``

Answers come from a chain of backends: precomputed tables, an exact decision
procedure for parameter-free instances, and an external command.
"""

from __future__ import annotations

import os
import random
import shlex
import subprocess
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .formula import (EQ, FALSE, TRUE, And, Atom, Evaluator, Exists, FalseF, Formula,
                      FormulaSyntaxError, Not, Or, Relation, SexprReader, TrueF, fold,
                      free_vars, is_quantifier_free, normalize_atom, to_sexpr)
from .poly import Polynomial, from_dense
from .realalg import decide_exists_1d, find_root_by_code, sign_at_algebraic, thom_code_at
from .thom import SignSequence, all_candidate_codes, guard_body

TABLES_ENV = "VSQE_TABLES"


class QeaError(Exception):
    pass


class NoBackendApplicable(QeaError):
    pass


class BridgeFailure(QeaError):
    pass


class HasParameters(QeaError):
    pass


class MissingCoefficient(QeaError):
    pass


class TableFormatError(FormulaSyntaxError):
    pass


class Kind(Enum):
    GUARD = "guard"
    SUBST = "subst"
    NU = "nu"


def u(i: int) -> str:
    return f"u{i}"


def v(i: int) -> str:
    return f"v{i}"


def generic(n: int, name) -> Polynomial:
    xv = Polynomial.var("x")
    out = Polynomial()
    for i in range(n + 1):
        out = out + Polynomial.var(name(i)) * xv ** i
    return out


@dataclass(frozen=True)
class QeQuery:
    kind: Kind
    n: int
    codes: tuple[SignSequence, ...]
    rel: Relation | None = None

    def __post_init__(self) -> None:
        want = 2 if self.kind is Kind.NU else 1
        if len(self.codes) != want:
            raise ValueError(f"{self.kind.value} query needs {want} code(s)")
        if any(len(c) != self.n or not any(c) for c in self.codes):
            raise ValueError(f"codes must be nonzero of length {self.n}: {self.codes}")
        if (self.rel is None) != (self.kind is not Kind.SUBST):
            raise ValueError("a relation is required exactly for subst queries")

    @classmethod
    def guard(cls, s: Sequence[int]) -> QeQuery:
        return cls(Kind.GUARD, len(s), (tuple(s),))

    @classmethod
    def subst(cls, s: Sequence[int], rel: Relation) -> QeQuery:
        return cls(Kind.SUBST, len(s), (tuple(s),), rel)

    @classmethod
    def nu(cls, s: Sequence[int], t: Sequence[int]) -> QeQuery:
        return cls(Kind.NU, len(s), (tuple(s), tuple(t)))

    @property
    def variables(self) -> list[str]:
        names = [u(i) for i in range(self.n, -1, -1)]
        if self.kind is not Kind.GUARD:
            names += [v(i) for i in range(self.n, -1, -1)]
        return names

    def matrix(self, p: Polynomial, q: Polynomial | None = None) -> Formula:
        body = list(guard_body(p, self.codes[0]).args)
        if self.kind is Kind.SUBST:
            body.append(Atom(q, self.rel))
        elif self.kind is Kind.NU:
            body.extend(guard_body(q, self.codes[1]).args)
        return And(tuple(body))

    @property
    def payload(self) -> Formula:
        return Exists("x", self.matrix(generic(self.n, u), generic(self.n, v)))

    def __str__(self) -> str:
        return entry_header(self)


def entry_header(q: QeQuery) -> str:
    def signs(s):
        return " ".join(str(c) for c in s)
    if q.kind is Kind.GUARD:
        return f"guard (signs {signs(q.codes[0])})"
    if q.kind is Kind.SUBST:
        return f"subst (signs {signs(q.codes[0])}) (rel {q.rel.symbol})"
    return f"nu (psigns {signs(q.codes[0])}) (qsigns {signs(q.codes[1])})"


def all_queries(n: int) -> list[QeQuery]:
    codes = all_candidate_codes(n)
    out = [QeQuery.guard(s) for s in codes]
    out += [QeQuery.subst(s, r) for s in codes for r in Relation]
    out += [QeQuery.nu(s, t) for s in codes for t in codes]
    return out


@dataclass(frozen=True)
class TableEntry:
    query: QeQuery
    template: Formula
    validated: bool = field(default=False, compare=False)

    @property
    def key(self) -> QeQuery:
        return self.query

    def __str__(self) -> str:
        return f"({entry_header(self.query)} (formula {to_sexpr(self.template)}))"


# -- table files --------------------------------------------------------------

def _read_int(r: SexprReader) -> int:
    t = r.next()
    try:
        return int(t.text)
    except ValueError:
        raise _err(r, f"expected an integer, found {t.text!r}", t) from None


def _err(r: SexprReader, msg: str, t=None) -> TableFormatError:
    e = r.error(msg, t)
    return TableFormatError(e.detail, e.line, e.col)


def _read_signs(r: SexprReader, head: str, n: int) -> SignSequence:
    r.expect("(")
    r.expect(head)
    out = []
    while r.peek() is not None and r.peek().text != ")":
        t = r.peek()
        c = _read_int(r)
        if c not in (-1, 0, 1):
            raise _err(r, f"sign must be -1, 0 or 1, found {c}", t)
        out.append(c)
    r.expect(")")
    if len(out) != n or not any(out):
        raise _err(r, f"expected a nonzero sign sequence of length {n}")
    return tuple(out)


def _read_formula_field(r: SexprReader, n: int, kind: Kind) -> Formula:
    r.expect("(")
    r.expect("formula")
    start = r.peek()
    phi = r.formula()
    r.expect(")")
    allowed = {u(i) for i in range(n + 1)}
    if kind is not Kind.GUARD:
        allowed |= {v(i) for i in range(n + 1)}
    if not is_quantifier_free(phi):
        raise _err(r, "table formulas must be quantifier-free", start)
    extra = free_vars(phi) - allowed
    if extra:
        raise _err(r, f"unexpected variables {sorted(extra)}", start)
    return phi


def parse_tables(text: str) -> tuple[int, list[TableEntry]]:
    """Parse one table file; errors carry line and column."""
    try:
        r = SexprReader(text)
        r.expect("(")
        r.expect("tables")
        r.expect("(")
        r.expect("degree")
        t = r.peek()
        n = _read_int(r)
        if n < 1:
            raise _err(r, "degree must be positive", t)
        r.expect(")")
        r.expect("(")
        r.expect("version")
        t = r.peek()
        if _read_int(r) != 1:
            raise _err(r, "unsupported table version", t)
        r.expect(")")
        entries = []
        seen = set()
        while r.peek() is not None and r.peek().text == "(":
            r.next()
            head = r.next()
            if head.text == "guard":
                q = QeQuery.guard(_read_signs(r, "signs", n))
            elif head.text == "subst":
                s = _read_signs(r, "signs", n)
                r.expect("(")
                r.expect("rel")
                rt = r.next()
                rel = next((x for x in Relation if x.symbol == rt.text), None)
                if rel is None:
                    raise _err(r, f"unknown relation {rt.text!r}", rt)
                r.expect(")")
                q = QeQuery.subst(s, rel)
            elif head.text == "nu":
                q = QeQuery.nu(_read_signs(r, "psigns", n), _read_signs(r, "qsigns", n))
            else:
                raise _err(r, f"unknown entry kind {head.text!r}", head)
            phi = _read_formula_field(r, n, q.kind)
            r.expect(")")
            if q in seen:
                raise _err(r, f"duplicate entry {entry_header(q)}", head)
            seen.add(q)
            entries.append(TableEntry(q, phi))
        r.expect(")")
        if not r.at_end():
            raise _err(r, "trailing input after table")
    except TableFormatError:
        raise
    except FormulaSyntaxError as e:
        raise TableFormatError(e.detail, e.line, e.col) from None
    return n, entries


def format_tables(n: int, entries: Iterable[TableEntry]) -> str:
    lines = [f"(tables (degree {n}) (version 1)"]
    lines += [f"  {e}" for e in entries]
    return "\n".join(lines) + ")\n"


def load_tables(directory: str | os.PathLike) -> dict[QeQuery, TableEntry]:
    """All entries from ``*.tbl`` files in a directory (sorted by file name)."""
    out: dict[QeQuery, TableEntry] = {}
    for path in sorted(Path(directory).glob("*.tbl")):
        try:
            _, entries = parse_tables(path.read_text())
        except TableFormatError as e:
            raise TableFormatError(f"{path}: {e.detail}", e.line, e.col) from None
        for e in entries:
            out.setdefault(e.query, e)
    return out


def default_tables_dir() -> Path:
    env = os.environ.get(TABLES_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("vsqe") / "tables"))


# -- instantiation ------------------------------------------------------------

def instantiate(template: Formula, coeffs: Mapping[str, Polynomial | int]) -> Formula:
    """Substitute concrete coefficients for u_i / v_j, renormalize and fold constants."""
    values = {k: c if isinstance(c, Polynomial) else Polynomial.const(c)
              for k, c in coeffs.items()}
    memo: dict[Polynomial, Polynomial] = {}

    def walk(phi: Formula) -> Formula:
        if isinstance(phi, Atom):
            p = memo.get(phi.poly)
            if p is None:
                missing = phi.poly.variables - values.keys()
                if missing:
                    raise MissingCoefficient(f"no value for {sorted(missing)}")
                p = memo[phi.poly] = phi.poly.subs(values)
            return normalize_atom(p, phi.rel)
        if isinstance(phi, And):
            return And(tuple(walk(a) for a in phi.args))
        if isinstance(phi, Or):
            return Or(tuple(walk(a) for a in phi.args))
        if isinstance(phi, Not):
            return Not(walk(phi.arg))
        return phi

    return fold(walk(template))


def coefficient_map(n: int, pc: Sequence[Polynomial | int],
                    qc: Sequence[Polynomial | int] | None = None) -> dict[str, Polynomial | int]:
    """Map u_n..u_0 (and v_n..v_0) to coefficient lists given highest first."""
    if len(pc) != n + 1 or (qc is not None and len(qc) != n + 1):
        raise MissingCoefficient(f"expected {n + 1} coefficients")
    out = {u(n - i): c for i, c in enumerate(pc)}
    if qc is not None:
        out.update({v(n - i): c for i, c in enumerate(qc)})
    return out


# -- exact decision for parameter-free instances ------------------------------

def decide_pointfree(payload: Formula) -> Formula:
    """Truth of a parameter-free existential sentence in x."""
    body = payload.arg if isinstance(payload, Exists) else payload
    extra = free_vars(body) - {"x"}
    if extra:
        raise HasParameters(f"payload still has parameters {sorted(extra)}")
    return TRUE if decide_exists_1d(body) else FALSE


def _dense_of(coeffs: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed([int(c) for c in coeffs]))


def decide_query(query: QeQuery, pc: Sequence[int], qc: Sequence[int] | None = None) -> bool:
    """Structured exact decision of a query at integer coefficients (highest first)."""
    s = query.codes[0]
    xi = find_root_by_code(_dense_of(pc), s)
    if xi is None:
        return False
    if query.kind is Kind.GUARD:
        return True
    q = _dense_of(qc)
    sq = sign_at_algebraic(q, xi)
    if query.kind is Kind.SUBST:
        return query.rel.holds(sq)
    return sq == 0 and thom_code_at(q, xi, query.n) == query.codes[1]


# -- backends -----------------------------------------------------------------

class Backend:
    name = "backend"

    def template(self, query: QeQuery) -> Formula | None:
        return None

    def decide(self, query: QeQuery, pc, qc) -> bool | None:
        return None

    def max_degree(self, parametric: bool) -> float:
        return 0


class TablesBackend(Backend):
    name = "tables"

    def __init__(self, tables: Mapping[QeQuery, TableEntry] | str | os.PathLike | None = None):
        if tables is None:
            tables = default_tables_dir()
        if not isinstance(tables, Mapping):
            self.directory = Path(tables)
            tables = load_tables(tables) if self.directory.is_dir() else {}
        self.tables = dict(tables)
        self.degrees = frozenset(q.n for q in self.tables)

    def template(self, query):
        e = self.tables.get(query)
        return None if e is None else e.template

    def max_degree(self, parametric):
        return max(self.degrees, default=0)


class PointfreeBackend(Backend):
    name = "pointfree"

    def decide(self, query, pc, qc):
        if all(c.is_constant() for c in pc) and (qc is None or all(c.is_constant() for c in qc)):
            return decide_query(query, [c.constant() for c in pc],
                                None if qc is None else [c.constant() for c in qc])
        return None

    def max_degree(self, parametric):
        return 0 if parametric else float("inf")


class BridgeBackend(Backend):
    name = "bridge"

    def __init__(self, command: str, timeout: float = 60.0, max_degree: int | None = None):
        if timeout <= 0:
            raise ValueError("bridge timeout must be positive")
        self.command = command
        self.timeout = timeout
        self._max_degree = max_degree
        self._cache: dict[QeQuery, Formula] = {}

    def template(self, query):
        if self._max_degree is not None and query.n > self._max_degree:
            return None
        hit = self._cache.get(query)
        if hit is None:
            hit = self._cache[query] = run_bridge(self.command, query.payload, self.timeout, query)
        return hit

    def max_degree(self, parametric):
        return float("inf") if self._max_degree is None else self._max_degree


def run_bridge(command: str, payload: Formula, timeout: float, query: QeQuery | None = None
               ) -> Formula:
    from .formula import parse
    try:
        proc = subprocess.run(shlex.split(command), input=to_sexpr(payload) + "\n",
                              capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        raise BridgeFailure(f"bridge timed out after {timeout}s") from None
    except OSError as e:
        raise BridgeFailure(f"cannot run bridge: {e}") from None
    if proc.returncode != 0:
        raise BridgeFailure(f"bridge exited with status {proc.returncode}: {proc.stderr.strip()}")
    try:
        phi = parse(proc.stdout)
    except FormulaSyntaxError as e:
        raise BridgeFailure(f"bridge output does not parse: {e}") from None
    if not is_quantifier_free(phi):
        raise BridgeFailure("bridge output is not quantifier-free")
    if query is not None:
        extra = free_vars(phi) - set(query.variables)
        if extra:
            raise BridgeFailure(f"bridge output mentions {sorted(extra)}")
    return phi


@dataclass
class BackendConfig:
    """An ordered fallback chain of backends, with per-configuration caches."""

    backends: tuple[Backend, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.backends = tuple(self.backends)
        if not self.backends:
            raise ValueError("at least one backend is required")

    @classmethod
    def default(cls, tables_dir: str | os.PathLike | None = None,
                bridge: str | None = None, timeout: float = 60.0) -> BackendConfig:
        chain: list[Backend] = [TablesBackend(tables_dir), PointfreeBackend()]
        if bridge:
            chain.append(BridgeBackend(bridge, timeout))
        return cls(tuple(chain))

    @classmethod
    def from_chain(cls, text: str, tables_dir: str | os.PathLike | None = None,
                   timeout: float = 60.0) -> BackendConfig:
        """Build from ``tables,pointfree,bridge:CMD`` (comma separated, in order)."""
        chain: list[Backend] = []
        items = [s.strip() for s in text.split(",")]
        for i, item in enumerate(items):
            if item == "tables":
                chain.append(TablesBackend(tables_dir))
            elif item == "pointfree":
                chain.append(PointfreeBackend())
            elif item.startswith("bridge:"):
                # the command may itself contain commas
                cmd = ",".join([item[len("bridge:"):]] + items[i + 1:])
                chain.append(BridgeBackend(cmd, timeout))
                break
            else:
                raise ValueError(f"unknown backend {item!r}")
        return cls(tuple(chain))

    def max_degree(self, parametric: bool) -> float:
        return max(b.max_degree(parametric) for b in self.backends)

    @property
    def pointfree_first(self) -> bool:
        """True when parameter-free queries are answered by the exact decision."""
        for b in self.backends:
            if isinstance(b, PointfreeBackend):
                return True
            if isinstance(b, TablesBackend) and b.degrees:
                return False
            if isinstance(b, BridgeBackend):
                return False
        return False


def qe(query: QeQuery, config: BackendConfig) -> Formula:
    """Quantifier-free template in the generic coefficients."""
    for b in config.backends:
        t = b.template(query)
        if t is not None:
            return t
    raise NoBackendApplicable(f"no backend can answer {entry_header(query)} at degree {query.n}")


def qe_instance(query: QeQuery, config: BackendConfig, pc: Sequence[Polynomial],
                qc: Sequence[Polynomial] | None = None) -> Formula:
    """Quantifier-free condition on the parameters for concrete coefficients."""
    key = (query, tuple(pc), None if qc is None else tuple(qc))
    hit = config._cache.get(key)
    if hit is not None:
        return hit
    result = None
    for b in config.backends:
        d = b.decide(query, pc, qc)
        if d is not None:
            result = TRUE if d else FALSE
            break
        t = b.template(query)
        if t is not None:
            result = instantiate(t, coefficient_map(query.n, pc, qc))
            break
    if result is None:
        raise NoBackendApplicable(
            f"no backend can answer {entry_header(query)} at degree {query.n}"
            " for parametric coefficients")
    config._cache[key] = result
    return result


# -- validation ---------------------------------------------------------------

# Table rows for the generic quadratic: every witness has 1 as a root.
QUADRATIC_WITNESSES: dict[SignSequence, tuple[int, int, int]] = {
    (-1, -1): (-1, 1, 0),
    (-1, 0): (0, -1, 1),
    (-1, 1): (1, -3, 2),
    (0, -1): (-1, 2, -1),
    (0, 1): (1, -2, 1),
    (1, -1): (-1, 3, -2),
    (1, 0): (0, 1, -1),
    (1, 1): (1, -1, 0),
}


def _shift(coeffs: Sequence[int], d: int) -> list[int]:
    """Coefficients (highest first) of f(x + d)."""
    f = from_dense(_dense_of(coeffs)).subs({"x": Polynomial.var("x") + d})
    return [c.constant() for c in f.coeffs("x", len(coeffs))]


def _code_pool(n: int) -> dict[SignSequence, list[tuple[list[int], int]]]:
    """Polynomials with small integer roots, grouped by the code of one root."""
    pool: dict[SignSequence, list[tuple[list[int], int]]] = {}

    def roots_multisets(k, lo):
        if k == 0:
            yield ()
            return
        for r in range(lo, 3):
            for rest in roots_multisets(k - 1, r):
                yield (r,) + rest

    for deg in range(1, n + 1):
        for lead in (-2, -1, 1, 2):
            for rs in roots_multisets(deg, -2):
                f = from_dense([lead])
                for r in rs:
                    f = f * from_dense([-r, 1])
                coeffs = [f.coeffs("x", n + 1)[i].constant() for i in range(n + 1)]
                d = _dense_of(coeffs)
                for r in sorted(set(rs)):
                    code = []
                    g = d
                    for _ in range(n):
                        g = tuple(i * c for i, c in enumerate(g))[1:]
                        val = sum(c * r ** i for i, c in enumerate(g))
                        code.append((val > 0) - (val < 0))
                    pool.setdefault(tuple(code), []).append((coeffs, r))
    return pool


_POOLS: dict[int, dict] = {}


def _pool(n: int):
    if n not in _POOLS:
        _POOLS[n] = _code_pool(n)
    return _POOLS[n]


def _rooted(rng: random.Random, n: int, code: SignSequence | None, at: int) -> list[int] | None:
    pool = _pool(n)
    if code is None:
        code = rng.choice(sorted(pool))
    choices = pool.get(code)
    if not choices:
        return None
    coeffs, r = rng.choice(choices)
    return _shift(coeffs, r - at)


def sample_coefficients(query: QeQuery, rng: random.Random, i: int
                        ) -> tuple[list[int], list[int] | None]:
    """The i-th coefficient sample: a mixture of uniform, structured and targeted draws."""
    n = query.n
    with_q = query.kind is not Kind.GUARD
    if n == 2 and i < 8:
        # seed with the quadratic witness rows so every code is hit early
        pc = list(QUADRATIC_WITNESSES[sorted(QUADRATIC_WITNESSES)[i]])
        qc = [rng.randint(-3, 3) for _ in range(n + 1)] if with_q else None
        return pc, qc
    mode = i % 3
    if mode == 0:
        b = rng.choice((1, 2, 3, 5, 9))
        pc = [rng.randint(-b, b) for _ in range(n + 1)]
        qc = [rng.randint(-b, b) for _ in range(n + 1)] if with_q else None
        return pc, qc
    at = rng.randint(-3, 3)
    pcode = query.codes[0] if mode == 2 or rng.random() < 0.5 else None
    pc = _rooted(rng, n, pcode, at) or [rng.randint(-3, 3) for _ in range(n + 1)]
    if rng.random() < 0.15:
        j = rng.randrange(n + 1)
        pc[j] += rng.choice((-1, 1))
    qc = None
    if with_q:
        if query.kind is Kind.NU and rng.random() < 0.7:
            qcode = query.codes[1]
        else:
            qcode = None
        qc = _rooted(rng, n, qcode, at) or [rng.randint(-3, 3) for _ in range(n + 1)]
        roll = rng.random()
        if roll < 0.3:
            qc[-1] += rng.choice((-2, -1, 1, 2))
        elif roll < 0.4:
            qc = [0] * n + [rng.randint(-2, 2)]
        elif roll < 0.5:
            qc = [rng.randint(-3, 3) for _ in range(n + 1)]
    return pc, qc


def _assignment(query: QeQuery, pc, qc) -> dict[str, int]:
    return coefficient_map(query.n, pc, qc)


_TRUTH_CACHE: dict[tuple, bool] = {}


def payload_truth(query: QeQuery, pc: Sequence[int], qc: Sequence[int] | None) -> bool:
    """Exact truth of the payload sentence via the one-variable decision oracle."""
    key = (query, tuple(pc), None if qc is None else tuple(qc))
    hit = _TRUTH_CACHE.get(key)
    if hit is None:
        p = from_dense(_dense_of(pc))
        q = None if qc is None else from_dense(_dense_of(qc))
        hit = _TRUTH_CACHE[key] = decide_exists_1d(query.matrix(p, q))
    return hit


@dataclass
class SampleSet:
    query: QeQuery
    points: list[dict[str, int]]
    truths: list[bool]
    evaluators: list[Evaluator]


def sample_set(query: QeQuery, samples: int, seed: int = 0) -> SampleSet:
    rng = random.Random(f"{seed}:{entry_header(query)}")
    points, truths, evals = [], [], []
    for i in range(samples):
        pc, qc = sample_coefficients(query, rng, i)
        a = _assignment(query, pc, qc)
        points.append(a)
        truths.append(payload_truth(query, pc, qc))
        evals.append(Evaluator(a))
    return SampleSet(query, points, truths, evals)


@dataclass
class ValidationReport:
    query: QeQuery
    agree: int
    disagree: int
    witnesses: list[tuple[dict[str, int], bool, bool]]

    @property
    def ok(self) -> bool:
        return self.disagree == 0

    def __str__(self) -> str:
        status = "ok" if self.ok else "FAIL"
        line = f"{entry_header(self.query)}: {self.agree}/{self.agree + self.disagree} agree [{status}]"
        if self.witnesses:
            pt, want, got = self.witnesses[0]
            pretty = " ".join(f"{k}={val}" for k, val in sorted(pt.items()))
            line += f" counterexample {pretty}: oracle={want} table={got}"
        return line


def validate_template(query: QeQuery, template: Formula, ss: SampleSet,
                      stop_at_first: bool = False) -> ValidationReport:
    agree, disagree, wit = 0, 0, []
    for a, truth, ev in zip(ss.points, ss.truths, ss.evaluators):
        got = ev(template)
        if got == truth:
            agree += 1
        else:
            disagree += 1
            wit.append((a, truth, got))
            if stop_at_first:
                break
    return ValidationReport(query, agree, disagree, wit)


def validate_entry(entry: TableEntry, samples: int = 200, seed: int = 0) -> ValidationReport:
    """Sampled equivalence of a table template against the exact oracle."""
    return validate_template(entry.query, entry.template, sample_set(entry.query, samples, seed))


def relation_mutants(phi: Formula) -> Iterator[Formula]:
    """Every formula obtained by complementing exactly one atom occurrence's relation."""
    if isinstance(phi, Atom):
        yield Atom(phi.poly, phi.rel.negate())
    elif isinstance(phi, (And, Or)):
        for i, a in enumerate(phi.args):
            for m in relation_mutants(a):
                yield type(phi)(phi.args[:i] + (m,) + phi.args[i + 1:])
    elif isinstance(phi, Not):
        for m in relation_mutants(phi.arg):
            yield Not(m)

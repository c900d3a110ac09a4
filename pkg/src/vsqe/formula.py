"""Tarski formulas: AST, s-expression syntax, positive normal form, evaluation."""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping

from .poly import ONE, ZERO, Polynomial, var_key


class FormulaError(ValueError):
    pass


class ContainsQuantifier(FormulaError):
    pass


class NotPositiveForm(FormulaError):
    pass


class UnassignedVariable(FormulaError):
    pass


class FormulaSyntaxError(SyntaxError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.detail = msg
        self.line = line
        self.col = col


class Relation(Enum):
    EQ = "="
    NE = "/="
    LT = "<"
    LE = "<="
    GE = ">="
    GT = ">"

    @property
    def symbol(self) -> str:
        return self.value

    def holds(self, sign: int) -> bool:
        return _HOLDS[self][sign + 1]

    def negate(self) -> Relation:
        return _NEGATE[self]

    def mirror(self) -> Relation:
        """Relation obtained after multiplying both sides by -1."""
        return _MIRROR[self]


_HOLDS = {
    Relation.EQ: (False, True, False),
    Relation.NE: (True, False, True),
    Relation.LT: (True, False, False),
    Relation.LE: (True, True, False),
    Relation.GE: (False, True, True),
    Relation.GT: (False, False, True),
}
_NEGATE = {
    Relation.EQ: Relation.NE, Relation.NE: Relation.EQ,
    Relation.LT: Relation.GE, Relation.GE: Relation.LT,
    Relation.GT: Relation.LE, Relation.LE: Relation.GT,
}
_MIRROR = {
    Relation.EQ: Relation.EQ, Relation.NE: Relation.NE,
    Relation.LT: Relation.GT, Relation.GT: Relation.LT,
    Relation.LE: Relation.GE, Relation.GE: Relation.LE,
}
EQ, NE, LT, LE, GE, GT = (Relation.EQ, Relation.NE, Relation.LT, Relation.LE,
                          Relation.GE, Relation.GT)


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_sexpr(self)

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    """``poly rel 0``."""

    poly: Polynomial
    rel: Relation

    def __repr__(self) -> str:
        return f"Atom({self.poly.infix()} {self.rel.symbol} 0)"


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise FormulaError("and needs at least one argument")

    def __repr__(self) -> str:
        return "And(" + ", ".join(map(repr, self.args)) + ")"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise FormulaError("or needs at least one argument")

    def __repr__(self) -> str:
        return "Or(" + ", ".join(map(repr, self.args)) + ")"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self) -> str:
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    arg: Formula

    def __repr__(self) -> str:
        return f"Exists({self.var}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    arg: Formula

    def __repr__(self) -> str:
        return f"Forall({self.var}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class TrueF(Formula):
    def __repr__(self) -> str:
        return "TrueF"


@dataclass(frozen=True, repr=False)
class FalseF(Formula):
    def __repr__(self) -> str:
        return "FalseF"


TRUE = TrueF()
FALSE = FalseF()


def and_(*args: Formula) -> Formula:
    """Conjunction that tolerates zero or one argument."""
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(args)


def or_(*args: Formula) -> Formula:
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(args)


def flatten(phi: Formula) -> Formula:
    """Merge nested And/Or of the same kind and drop repeated arguments."""
    if isinstance(phi, (And, Or)):
        out: list[Formula] = []
        for a in phi.args:
            a = flatten(a)
            parts = a.args if type(a) is type(phi) else (a,)
            for b in parts:
                if b not in out:
                    out.append(b)
        return and_(*out) if isinstance(phi, And) else or_(*out)
    if isinstance(phi, Not):
        return Not(flatten(phi.arg))
    return phi


# -- printing ---------------------------------------------------------------

def poly_sexpr(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for mono, c in p.sorted_terms():
        factors = [v if e == 1 else f"(^ {v} {e})" for v, e in mono]
        if not factors:
            terms.append(str(c))
        elif c == 1 and len(factors) == 1:
            terms.append(factors[0])
        elif c == 1:
            terms.append("(* " + " ".join(factors) + ")")
        else:
            terms.append(f"(* {c} " + " ".join(factors) + ")")
    if len(terms) == 1:
        return terms[0]
    return "(+ " + " ".join(terms) + ")"


def to_sexpr(phi: Formula) -> str:
    if isinstance(phi, Atom):
        return f"({phi.rel.symbol} {poly_sexpr(phi.poly)} 0)"
    if isinstance(phi, And):
        return "(and " + " ".join(to_sexpr(a) for a in phi.args) + ")"
    if isinstance(phi, Or):
        return "(or " + " ".join(to_sexpr(a) for a in phi.args) + ")"
    if isinstance(phi, Not):
        return f"(not {to_sexpr(phi.arg)})"
    if isinstance(phi, Exists):
        return f"(exists ({phi.var}) {to_sexpr(phi.arg)})"
    if isinstance(phi, Forall):
        return f"(forall ({phi.var}) {to_sexpr(phi.arg)})"
    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, FalseF):
        return "false"
    raise TypeError(f"not a formula: {phi!r}")


# -- parsing ----------------------------------------------------------------

_VAR = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_INT = re.compile(r"^[+-]?\d+$")
_KEYWORDS = {"and", "or", "not", "exists", "forall", "true", "false"}
_RELS = {r.symbol: r for r in Relation}


@dataclass
class Token:
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch in "()":
            tokens.append(Token(ch, line, col))
            col += 1
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append(Token(text[i:j], line, col))
            col += j - i
            i = j
    return tokens


class SexprReader:
    """Recursive-descent reader over a token list; shared by formulas and table files."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        lines = text.splitlines() or [""]
        self._eof = (len(lines), len(lines[-1]) + 1)

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise FormulaSyntaxError("unexpected end of input", *self._eof)
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise FormulaSyntaxError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def error(self, msg: str, t: Token | None = None) -> FormulaSyntaxError:
        t = t or self.peek()
        if t is None:
            return FormulaSyntaxError(msg, *self._eof)
        return FormulaSyntaxError(msg, t.line, t.col)

    # formulas
    def formula(self) -> Formula:
        t = self.next()
        if t.text == "true":
            return TRUE
        if t.text == "false":
            return FALSE
        if t.text != "(":
            raise self.error(f"expected a formula, found {t.text!r}", t)
        head = self.next()
        h = head.text
        if h in ("and", "or"):
            args = []
            while self.peek() is not None and self.peek().text != ")":
                args.append(self.formula())
            if not args:
                raise self.error(f"'{h}' needs at least one argument", head)
            self.expect(")")
            return And(tuple(args)) if h == "and" else Or(tuple(args))
        if h == "not":
            arg = self.formula()
            self.expect(")")
            return Not(arg)
        if h in ("exists", "forall"):
            self.expect("(")
            v = self.next()
            if not _VAR.match(v.text) or v.text in _KEYWORDS:
                raise self.error(f"bad variable name {v.text!r}", v)
            self.expect(")")
            body = self.formula()
            self.expect(")")
            return Exists(v.text, body) if h == "exists" else Forall(v.text, body)
        if h in _RELS:
            lhs = self.poly()
            if self.peek() is not None and self.peek().text != ")":
                lhs = lhs - self.poly()
            self.expect(")")
            return Atom(lhs, _RELS[h])
        raise self.error(f"unknown operator {h!r}", head)

    def poly(self) -> Polynomial:
        t = self.next()
        if _INT.match(t.text):
            return Polynomial.const(int(t.text))
        if t.text == "(":
            op = self.next()
            args = []
            while self.peek() is not None and self.peek().text != ")":
                if op.text == "^" and len(args) == 1:
                    e = self.next()
                    if not _INT.match(e.text) or int(e.text) < 1:
                        raise self.error("exponent must be a positive integer", e)
                    args.append(int(e.text))
                else:
                    args.append(self.poly())
            self.expect(")")
            if op.text == "+" and args:
                out = ZERO
                for a in args:
                    out = out + a
                return out
            if op.text == "*" and args:
                out = ONE
                for a in args:
                    out = out * a
                return out
            if op.text == "-" and len(args) in (1, 2):
                return -args[0] if len(args) == 1 else args[0] - args[1]
            if op.text == "^" and len(args) == 2:
                return args[0] ** args[1]
            raise self.error(f"bad polynomial operator application {op.text!r}", op)
        if _VAR.match(t.text) and t.text not in _KEYWORDS:
            return Polynomial.var(t.text)
        raise self.error(f"expected a polynomial, found {t.text!r}", t)


def parse(text: str) -> Formula:
    r = SexprReader(text)
    phi = r.formula()
    if not r.at_end():
        raise r.error(f"trailing input {r.peek().text!r}")
    return phi


def parse_poly(text: str) -> Polynomial:
    r = SexprReader(text)
    p = r.poly()
    if not r.at_end():
        raise r.error(f"trailing input {r.peek().text!r}")
    return p


# -- structural helpers -----------------------------------------------------

def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Exists, Forall)):
        return False
    if isinstance(phi, (And, Or)):
        return all(is_quantifier_free(a) for a in phi.args)
    if isinstance(phi, Not):
        return is_quantifier_free(phi.arg)
    return True


def is_positive(phi: Formula) -> bool:
    if isinstance(phi, (Atom, TrueF, FalseF)):
        return True
    if isinstance(phi, (And, Or)):
        return all(is_positive(a) for a in phi.args)
    return False


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Atom):
        return phi.poly.variables
    if isinstance(phi, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in phi.args:
            out |= free_vars(a)
        return out
    if isinstance(phi, Not):
        return free_vars(phi.arg)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.arg) - {phi.var}
    return frozenset()


def iter_atoms(phi: Formula) -> Iterator[Atom]:
    """Atoms in document order, with repetitions."""
    if isinstance(phi, Atom):
        yield phi
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from iter_atoms(a)
    elif isinstance(phi, (Not, Exists, Forall)):
        yield from iter_atoms(phi.arg)


def atoms(phi: Formula) -> list[Atom]:
    """Deduplicated atoms of a positive quantifier-free formula, in document order."""
    if not is_positive(phi):
        raise NotPositiveForm(f"not a positive quantifier-free formula: {phi}")
    seen = set()
    out = []
    for a in iter_atoms(phi):
        if a not in seen:
            seen.add(a)
            out.append(a)
    return out


def normalize_atom(p: Polynomial, rel: Relation) -> Atom:
    """Remove integer content and make the leading coefficient positive."""
    p = p.primitive()
    if p.leading_coefficient() < 0:
        return Atom(-p, rel.mirror())
    return Atom(p, rel)


def positive_form(phi: Formula) -> Formula:
    """Equivalent formula without Not, atoms normalized."""
    return _pf(phi, False)


def _pf(phi: Formula, neg: bool) -> Formula:
    if isinstance(phi, Atom):
        return normalize_atom(phi.poly, phi.rel.negate() if neg else phi.rel)
    if isinstance(phi, TrueF):
        return FALSE if neg else TRUE
    if isinstance(phi, FalseF):
        return TRUE if neg else FALSE
    if isinstance(phi, Not):
        return _pf(phi.arg, not neg)
    if isinstance(phi, And):
        args = tuple(_pf(a, neg) for a in phi.args)
        return Or(args) if neg else And(args)
    if isinstance(phi, Or):
        args = tuple(_pf(a, neg) for a in phi.args)
        return And(args) if neg else Or(args)
    raise ContainsQuantifier(f"positive_form needs a quantifier-free formula: {phi}")


def fold(phi: Formula) -> Formula:
    """Constant folding: decide constant atoms and propagate true/false."""
    if isinstance(phi, Atom):
        if phi.poly.is_constant():
            c = phi.poly.constant()
            return TRUE if phi.rel.holds((c > 0) - (c < 0)) else FALSE
        return phi
    if isinstance(phi, And):
        args = []
        for a in phi.args:
            f = fold(a)
            if isinstance(f, FalseF):
                return FALSE
            if not isinstance(f, TrueF):
                args.append(f)
        return and_(*args)
    if isinstance(phi, Or):
        args = []
        for a in phi.args:
            f = fold(a)
            if isinstance(f, TrueF):
                return TRUE
            if not isinstance(f, FalseF):
                args.append(f)
        return or_(*args)
    if isinstance(phi, Not):
        f = fold(phi.arg)
        if isinstance(f, TrueF):
            return FALSE
        if isinstance(f, FalseF):
            return TRUE
        return Not(f)
    if isinstance(phi, (Exists, Forall)):
        f = fold(phi.arg)
        if isinstance(f, (TrueF, FalseF)):
            return f
        return type(phi)(phi.var, f)
    return phi


# -- evaluation -------------------------------------------------------------

class Evaluator:
    """Exact evaluation at one rational assignment, memoizing polynomial signs."""

    def __init__(self, assignment: Mapping[str, Fraction | int]):
        self.values = {v: Fraction(c) for v, c in assignment.items()}
        self._signs: dict[Polynomial, int] = {}

    def sign(self, p: Polynomial) -> int:
        s = self._signs.get(p)
        if s is None:
            total = Fraction(0)
            values = self.values
            for m, c in p.terms.items():
                t = c
                for v, e in m:
                    try:
                        t = t * values[v] ** e
                    except KeyError:
                        raise UnassignedVariable(f"variable {v!r} is not assigned") from None
                total += t
            s = (total > 0) - (total < 0)
            self._signs[p] = s
        return s

    def __call__(self, phi: Formula) -> bool:
        if isinstance(phi, Atom):
            return phi.rel.holds(self.sign(phi.poly))
        if isinstance(phi, And):
            return all(self(a) for a in phi.args)
        if isinstance(phi, Or):
            return any(self(a) for a in phi.args)
        if isinstance(phi, Not):
            return not self(phi.arg)
        if isinstance(phi, TrueF):
            return True
        if isinstance(phi, FalseF):
            return False
        raise ContainsQuantifier(f"cannot evaluate a quantified formula: {phi}")


def evaluate(phi: Formula, assignment: Mapping[str, Fraction | int]) -> bool:
    """Truth value of a quantifier-free formula under exact rational evaluation."""
    missing = free_vars(phi) - assignment.keys()
    if missing:
        raise UnassignedVariable(f"unassigned variables: {sorted_vars(missing)}")
    return Evaluator(assignment)(phi)


def sorted_vars(vs) -> list[str]:
    return sorted(vs, key=var_key)

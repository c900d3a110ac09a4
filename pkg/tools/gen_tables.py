"""Author the shipped degree-1 and degree-2 tables.

Templates are built from closed-form sign conditions at the root of a linear
or quadratic polynomial.  An entry is written only if it agrees with the exact
oracle on every validation sample.

    python3 tools/gen_tables.py [--out DIR] [--samples K]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from vsqe.formula import (EQ, GE, GT, LE, LT, NE, And, Atom, Formula, Or, Relation,
                          flatten, fold, positive_form)
from vsqe.poly import Polynomial
from vsqe.qea import (Kind, QeQuery, TableEntry, all_queries, format_tables,
                      sample_set, validate_template)
from vsqe.thom import sigma

U = [Polynomial.var(f"u{i}") for i in range(3)]
V = [Polynomial.var(f"v{i}") for i in range(3)]
ZERO = Polynomial()


def guard1(s):
    return Atom(U[1], sigma(s[0]))


def sign1(s, w, rel, facts=None):
    """Sign condition of q = w[0] x + w[1] at the root of u1 x + u0."""
    w1, w0 = w
    if w1.is_zero():
        return Atom(w0, rel)
    return Atom(s[0] * (w0 * U[1] - w1 * U[0]), rel)


def guard2(s):
    s1, s2 = s
    if s2 == 0:
        return And((Atom(U[2], EQ), Atom(U[1], sigma(s1))))
    disc = 4 * U[2] * U[0] - U[1] ** 2
    return And((Atom(U[2], sigma(s2)), Atom(disc, EQ if s1 == 0 else LT)))


def known_sign(p: Polynomial, facts) -> int | None:
    """Sign of a single-term polynomial whose variables all have known signs."""
    if len(p.terms) != 1:
        return None
    (mono, c), = p.terms.items()
    sign = 1 if c > 0 else -1
    for name, e in mono:
        f = facts.get(name)
        if f is None:
            return None
        sign *= f ** e
    return sign


def _xe_condition(X, e, D, rel, facts):
    """Sign of X + e*sqrt(D) for D > 0, where Delta = X^2 - e^2 D."""
    delta = X * X - e * e * D
    if rel in (GT, GE):
        X, e = -X, -e
        rel = LT if rel is GT else LE
    se = known_sign(e, facts)
    if se == 1:
        table = {EQ: And((Atom(X, LE), Atom(delta, EQ))),
                 NE: Or((Atom(X, GT), Atom(delta, NE))),
                 LT: And((Atom(X, LT), Atom(delta, GT))),
                 LE: And((Atom(X, LE), Atom(delta, GE)))}
        return table[rel]
    if se == -1:
        table = {EQ: And((Atom(X, GE), Atom(delta, EQ))),
                 NE: Or((Atom(X, LT), Atom(delta, NE))),
                 LT: Or((Atom(X, LT), Atom(delta, LT))),
                 LE: Or((Atom(X, LE), Atom(delta, LE)))}
        return table[rel]
    if rel is EQ:
        return And((Atom(e * X, LE), Atom(delta, EQ)))
    if rel is NE:
        return Or((Atom(e * X, GT), Atom(delta, NE)))
    if rel is LT:
        return Or((And((Atom(X, LT), Atom(delta, GT))),
                   And((Atom(e, LT), Or((Atom(X, LT), Atom(delta, LT)))))))
    return Or((And((Atom(X, LE), Atom(delta, GE))),
               And((Atom(e, LE), Atom(delta, LE)))))


def sign2(s, w, rel, facts=None):
    """Sign condition of q = w[0] x^2 + w[1] x + w[2] at the root coded by s.

    ``facts`` maps variable names to signs already implied by the context.
    """
    facts = facts or {}
    s1, s2 = s
    w2, w1, w0 = w
    u2, u1, u0 = U[2], U[1], U[0]
    if w2.is_zero() and w1.is_zero():
        return Atom(w0, rel)
    if s2 == 0:
        return Atom(w2 * u0 ** 2 - w1 * u0 * u1 + w0 * u1 ** 2, rel)
    if s1 == 0:
        return Atom(w2 * u1 ** 2 - 2 * u1 * u2 * w1 + 4 * u2 ** 2 * w0, rel)
    A = u2 * w1 - w2 * u1
    B = u2 * w0 - w2 * u0
    X = 2 * u2 * B - A * u1
    D = u1 ** 2 - 4 * u2 * u0
    if A.is_zero():
        return Atom(X, rel)
    return _xe_condition(X, s1 * A, D, rel, facts)


def derivatives(n, w):
    """Coefficient lists (highest first) of q, q', ..., q^(n)."""
    out = [list(w)]
    for _ in range(n):
        cur = out[-1]
        d = len(cur) - 1
        nxt = [ZERO] + [c * (d - i) for i, c in enumerate(cur[:-1])]
        out.append(nxt)
    return out


def template(q: QeQuery) -> Formula:
    n = q.n
    guard, sign = (guard1, sign1) if n == 1 else (guard2, sign2)
    s = q.codes[0]
    facts = {f"u{n}": s[-1]}
    w = [V[i] for i in range(n, -1, -1)]
    if q.kind is Kind.GUARD:
        phi = guard(s)
    elif q.kind is Kind.SUBST:
        phi = And((guard(s), sign(s, w, q.rel, facts)))
    else:
        t = q.codes[1]
        # the code of q fixes the signs of its top coefficients
        zero = {}
        for i in range(n, 0, -1):
            facts[f"v{i}"] = t[i - 1]
            if t[i - 1] != 0:
                break
            zero[f"v{i}"] = 0
        w = [c.subs(zero) for c in w]
        ds = derivatives(n, w)
        parts = [guard(s)] + [Atom(V[int(k[1:])], EQ) for k in zero]
        parts.append(sign(s, ds[0], EQ, facts))
        parts += [sign(s, ds[i], sigma(t[i - 1]), facts) for i in range(1, n + 1)]
        phi = And(tuple(parts))
    return flatten(fold(positive_form(phi)))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/vsqe/tables"))
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for n in (1, 2):
        entries = []
        for q in all_queries(n):
            t = template(q)
            rep = validate_template(q, t, sample_set(q, args.samples, args.seed))
            if not rep.ok:
                failed += 1
                print(rep, file=sys.stderr)
                continue
            entries.append(TableEntry(q, t, validated=True))
        (out / f"degree{n}.tbl").write_text(format_tables(n, entries))
        print(f"degree {n}: wrote {len(entries)} entries")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

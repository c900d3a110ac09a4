from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp

from vsqe.formula import EQ, GT, LE, LT, And, Atom, evaluate
from vsqe.poly import Polynomial, UnassignedParameter, eval_point
from vsqe.realalg import (NotARoot, ZeroPolynomial, cauchy_bound, count_roots,
                          decide_exists_1d, find_root_by_code, isolate_roots, roots_with_code,
                          sign_at_algebraic, thom_code_at)
from vsqe.thom import all_candidate_codes

from gen import random_qf, random_univariate

x, b = Polynomial.var("x"), Polynomial.var("b")
X = sp.Symbol("x")

QUADRATIC_ROW_WITNESSES = {
    (-1, -1): -x ** 2 + x,
    (-1, 0): -x + 1,
    (-1, 1): x ** 2 - 3 * x + 2,
    (0, -1): -x ** 2 + 2 * x - 1,
    (0, 1): x ** 2 - 2 * x + 1,
    (1, -1): -x ** 2 + 3 * x - 2,
    (1, 0): x - 1,
    (1, 1): x ** 2 - x,
}


def root_at(f: Polynomial, value) -> object:
    """The isolated root of f equal to a known rational value."""
    hits = [r for r in isolate_roots(f) if r.lo < value < r.hi or r.exact() == value]
    assert len(hits) == 1
    return hits[0]


def sympy_distinct_real_roots(f: Polynomial) -> int:
    e = sp.sympify(f.infix().replace("^", "**"), locals={"x": X})
    return len(set(sp.real_roots(sp.Poly(e, X))))


def test_isolate_examples():
    r1, r2 = isolate_roots(x ** 2 - 3 * x + 2)
    assert r1.lo < 1 < r1.hi <= r2.lo < 2 < r2.hi
    assert isolate_roots(x ** 2 + 1) == []
    (r,) = isolate_roots((x - 1) ** 2)
    assert r.lo < 1 < r.hi
    with pytest.raises(ZeroPolynomial):
        isolate_roots(Polynomial())


def test_isolated_intervals_are_valid():
    rng = random.Random(7)
    for _ in range(300):
        f = random_univariate(rng, 6, 9)
        if f.is_zero():
            continue
        roots = isolate_roots(f)
        for r in roots:
            assert r.lo < r.hi
            assert eval_point(f, r.lo) != 0 and eval_point(f, r.hi) != 0
            assert count_roots(f, r.lo, r.hi) == 1
        for r, s in zip(roots, roots[1:]):
            assert r.hi <= s.lo


def test_sturm_count_matches_isolation_and_sympy():
    rng = random.Random(8)
    for _ in range(500):
        f = random_univariate(rng, 6, 9)
        if f.is_zero():
            continue
        B = cauchy_bound(f) + 1
        n = len(isolate_roots(f))
        assert count_roots(f, -B, B) == n
        assert n == sympy_distinct_real_roots(f)


def test_products_of_linear_factors():
    rng = random.Random(9)
    for _ in range(200):
        k = rng.randint(1, 5)
        rs = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(k)]
        f = Polynomial.const(rng.choice([-3, -1, 1, 2]))
        for r in rs:
            f = f * (r.denominator * x - r.numerator)
        roots = isolate_roots(f)
        assert len(roots) == len(set(rs))
        for r in set(rs):
            inside = [a for a in roots if a.lo < r < a.hi]
            assert len(inside) == 1
            if rs.count(r) % 2:
                assert eval_point(f, inside[0].lo) * eval_point(f, inside[0].hi) < 0


def test_sign_at_algebraic_examples():
    p = x ** 2 - 3 * x + 2
    one = root_at(p, 1)
    assert sign_at_algebraic(2 * x - 3, one) == -1
    assert sign_at_algebraic(p, one) == 0
    assert sign_at_algebraic(Polynomial.const(7), one) == 1


def test_sign_at_irrational_root():
    (neg, pos) = isolate_roots(x ** 2 - 2)
    assert sign_at_algebraic(x ** 4 - 4, pos) == 0
    assert sign_at_algebraic(5 * x - 7, pos) == 1       # sqrt2 > 1.4
    assert sign_at_algebraic(12 * x - 17, pos) == -1    # sqrt2 < 17/12
    assert sign_at_algebraic(x, neg) == -1


@pytest.mark.parametrize("s,f", QUADRATIC_ROW_WITNESSES.items())
def test_thom_code_of_table_witnesses(s, f):
    assert thom_code_at(f, root_at(f, 1), 2) == s


def test_thom_code_not_a_root():
    with pytest.raises(NotARoot):
        thom_code_at(x - 1, root_at(x - 2, 2), 1)


def test_find_root_by_code_examples():
    p = x ** 2 - 3 * x + 2
    r = find_root_by_code(p, (-1, 1))
    assert r is not None and r.lo < 1 < r.hi
    r = find_root_by_code(p, (1, 1))
    assert r is not None and r.lo < 2 < r.hi
    assert find_root_by_code(x ** 2 + 1, (1, 1)) is None


def test_code_uniqueness():
    rng = random.Random(10)
    for _ in range(500):
        f = random_univariate(rng, 4, 9)
        n = max(1, f.degree("x"))
        for s in all_candidate_codes(n):
            assert len(roots_with_code(f, s)) <= 1


def test_decide_exists_1d_examples():
    assert decide_exists_1d(Atom(x ** 2 - 3 * x + 2, LE))
    assert not decide_exists_1d(Atom(x ** 2 + 1, LT))
    disc = Atom(x ** 2 + b * x + 1, EQ)
    assert decide_exists_1d(disc, {"b": 3})
    assert not decide_exists_1d(disc, {"b": 0})
    assert decide_exists_1d(disc, {"b": 2})
    with pytest.raises(UnassignedParameter):
        decide_exists_1d(disc, {})


def test_decide_exists_isolated_point_solutions():
    # only x = 1 satisfies (x-1)^2 <= 0 and only sqrt 2 satisfies the conjunction
    assert decide_exists_1d(Atom((x - 1) ** 2, LE))
    assert not decide_exists_1d(Atom((x - 1) ** 2, LT))
    assert decide_exists_1d(And((Atom(x ** 2 - 2, EQ), Atom(x, GT))))
    assert not decide_exists_1d(And((Atom(x ** 2 - 2, EQ), Atom(x ** 2 - 2, LT))))


def test_grid_witness_implies_oracle_true(fuzz):
    rng = random.Random(11)
    grid = [Fraction(i, 4) for i in range(-60, 61)]
    positive = 0
    for _ in range(500):
        phi = random_qf(rng, **fuzz)
        want = decide_exists_1d(phi)
        hit = any(_holds(phi, xi) for xi in grid)
        if hit:
            positive += 1
            assert want
    assert positive > 100


def _holds(phi, xi):
    return evaluate(phi, {"x": xi})


def test_cauchy_bound():
    assert cauchy_bound(2 * x ** 2 - 6 * x + 1) == 4
    f = x ** 3 - 7 * x + 5
    B = cauchy_bound(f)
    assert all(-B <= r.lo and r.hi <= B for r in isolate_roots(f))

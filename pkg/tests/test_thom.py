from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vsqe.formula import EQ, GT, LT, And, Atom, Exists
from vsqe.poly import Polynomial
from vsqe.thom import (GuardFailsAtPoint, ParametricRoot, ThomError, ZeroSignSequence,
                       all_candidate_codes, candidate_points, find_guard_witness, generic_poly,
                       guard_holds, guard_tarski, sgn_lr_numeric, sgnl_comb, sgnr_comb, sigma)

x, a, b, c = (Polynomial.var(v) for v in "xabc")
QUAD = a * x ** 2 + b * x + c

nonzero_codes = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.sampled_from((-1, 0, 1)), min_size=n, max_size=n)
).filter(any).map(tuple)


def test_sigma():
    assert (sigma(-1), sigma(0), sigma(1)) == (LT, EQ, GT)


def test_guard_tarski_shape():
    g = guard_tarski(QUAD, (-1, 1))
    assert g == Exists("x", And((Atom(QUAD, EQ), Atom(2 * a * x + b, LT), Atom(2 * a, GT))))
    g = guard_tarski(QUAD, (0, -1))
    assert [at.rel for at in g.arg.args] == [EQ, EQ, LT]
    with pytest.raises(ZeroSignSequence):
        guard_tarski(QUAD, (0, 0))


@pytest.mark.parametrize("s,left,right", [
    ((-1, -1), 1, -1), ((0, 1), 1, 1), ((1, 0), -1, 1), ((0, 0, -1), 1, -1), ((0, 0, 1), -1, 1),
])
def test_combinatorial_signs(s, left, right):
    assert (sgnl_comb(s), sgnr_comb(s)) == (left, right)


@given(nonzero_codes)
def test_combinatorial_signs_never_zero(s):
    assert sgnl_comb(s) in (-1, 1) and sgnr_comb(s) in (-1, 1)


def test_combinatorial_signs_reject_zero():
    with pytest.raises(ZeroSignSequence):
        sgnr_comb((0, 0))
    with pytest.raises(ZeroSignSequence):
        sgnl_comb((0,))


@pytest.mark.parametrize("s,alpha,want", [
    ((-1, -1), (-1, 1, 0), (1, -1)),
    ((0, 1), (1, -2, 1), (1, 1)),
    ((1, 1), (1, -1, 0), (-1, 1)),
])
def test_numeric_signs_on_table_witnesses(s, alpha, want):
    point = dict(zip("abc", map(Fraction, alpha)))
    assert sgn_lr_numeric(QUAD, s, point) == want
    assert want == (sgnl_comb(s), sgnr_comb(s))


def test_numeric_signs_need_guard():
    with pytest.raises(GuardFailsAtPoint):
        sgn_lr_numeric(QUAD, (1, 1), {"a": 1, "b": 0, "c": 1})


def test_candidate_codes():
    assert all_candidate_codes(1) == [(-1,), (1,)]
    assert len(all_candidate_codes(2)) == 8
    assert len(all_candidate_codes(3)) == 26
    assert all_candidate_codes(2)[0] == (-1, -1)
    with pytest.raises(ValueError):
        all_candidate_codes(0)


def test_parametric_root_invariants():
    pr = ParametricRoot(QUAD, (1, 0))
    assert pr.n == 2
    with pytest.raises(ZeroSignSequence):
        ParametricRoot(QUAD, (0, 0))
    with pytest.raises(ThomError):
        ParametricRoot(x ** 3, (1, 1))


def test_guard_holds_degree_drop():
    # a = 0: the linear root -c/b with b < 0 has code (-1, 0)
    assert guard_holds(QUAD, (-1, 0), {"a": 0, "b": -1, "c": 1})
    assert not guard_holds(QUAD, (-1, 0), {"a": 1, "b": -1, "c": 0})


def test_witness_search_is_reproducible():
    p = generic_poly(2)
    params = ["u2", "u1", "u0"]
    w1 = find_guard_witness(p, (0, 1), params, random.Random(3), 500)
    w2 = find_guard_witness(p, (0, 1), params, random.Random(3), 500)
    assert w1 is not None and w1 == w2
    assert guard_holds(p, (0, 1), w1)


def test_candidate_points_budget():
    pts = list(candidate_points(["a", "b"], random.Random(0), 30))
    assert len(pts) == 30
    assert all(set(p) == {"a", "b"} for p in pts)

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdeg.counting import ap
from pdeg.curves import Curve
from pdeg.engine import (
    ADDITIVE,
    CANONICAL,
    MULT_NONSPLIT,
    MULT_NOT_PTH,
    MULT_SPLIT,
    NONCANONICAL,
    SUPERSINGULAR,
    Exact,
    Interval,
    LowerBound,
    classify_reduction,
    cornacchia_ab,
    cornacchia_st,
    curve_with_j,
    dp,
    dp_cm_maximal_order,
    dp_cm_x,
    dp_cm_y,
    dp_consistency_sweep,
    fuse,
    multiplicative_examples,
    parallel_map,
    recurrence_scan,
    recurrence_sequence,
    thread_count,
)
from pdeg.errors import DomainError
from pdeg.local_arith import legendre, ord_mod_p, primes_between


def test_value_constructors_and_fusion():
    assert Interval(4, 4) == Exact(4)
    assert str(Interval(2, 4)) == "[2,4]" and str(LowerBound(4)) == ">=4"
    with pytest.raises(DomainError):
        Interval(5, 2)
    assert fuse(LowerBound(4), (2, 4)) == Exact(4)
    assert fuse(LowerBound(4), (2, 8)) is None
    assert fuse(LowerBound(2), (4, 4)) == Exact(4)


def test_e11_at_5():
    r = dp((1, 1), 5)
    assert r.classification == NONCANONICAL and r.value == Exact(4)
    assert r.a_p == -3 and r.ord_a_p == 4 and r.canonical is False
    assert "bruteforce-fusion" in r.provenance and "noncanonical-lower-bound" in r.provenance
    unfused = dp((1, 1), 5, fuse_bruteforce=False)
    assert unfused.value == LowerBound(4)


def test_canonical_curve_value():
    r = dp((1, 0), 13)
    assert r.classification == CANONICAL
    assert r.value == Exact(ord_mod_p(ap((1, 0), 13), 13))


@pytest.mark.parametrize("p", [7, 11, 19, 23])
def test_supersingular_value(p):
    r = dp((1, 0), p)
    assert r.classification == SUPERSINGULAR and r.value == Exact(p * p - 1)


def test_reduction_types():
    assert str(classify_reduction((1, 1), 5)) == "good-ordinary"
    assert str(classify_reduction((1, 0), 7)) == "good-supersingular"
    assert classify_reduction((5, 5), 5).kind == "additive"
    assert dp((5, 5), 5).classification == ADDITIVE
    assert classify_reduction(curve_with_j(Fraction(1, 7)), 7).kind == "multiplicative"
    with pytest.raises(DomainError):
        dp((1, 1), 9)
    with pytest.raises(DomainError):
        dp((1, 1), 3)


def test_p_minimal_model_is_used():
    assert dp(Curve(1, 1).twist(5), 5).value == dp((1, 1), 5).value
    assert dp(Curve(Fraction(1, 5**4), Fraction(1, 5**6)), 5).value == Exact(4)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_multiplicative_branches(p):
    for E in multiplicative_examples(p, "not-pth-power", 3):
        assert dp(E, p).value == Exact(p - 1) and dp(E, p).classification == MULT_NOT_PTH
    for E in multiplicative_examples(p, "split", 3):
        assert dp(E, p).classification == MULT_SPLIT and dp(E, p).value == Exact(1)
    for E in multiplicative_examples(p, "nonsplit", 3):
        assert dp(E, p).classification == MULT_NONSPLIT and dp(E, p).value == Exact(2)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_nonsquare_twist_swaps_split_and_nonsplit(p):
    delta = next(d for d in range(2, p) if legendre(d, p) == -1)
    for E in multiplicative_examples(p, "split", 4):
        assert dp(E.quadratic_twist(delta), p).classification == MULT_NONSPLIT
        assert dp(E.quadratic_twist(delta * delta), p).classification == MULT_SPLIT


def test_curve_with_j():
    E = curve_with_j(Fraction(3, 7), 5)
    assert E.j_invariant() == Fraction(3, 7)
    assert E.A.denominator == 1 and E.B.denominator == 1
    with pytest.raises(DomainError):
        curve_with_j(1728)


# -- CM -------------------------------------------------------------------------

@pytest.mark.parametrize("p", [p for p in primes_between(5, 400) if p % 4 == 1])
def test_cornacchia_st_unique_by_enumeration(p):
    r = math.isqrt(p)
    sols = {(s, t) for s in range(-r, r + 1) for t in range(-r, r + 1)
            if s * s + t * t == p and s % 2 and (s + t) % 4 == 1}
    assert {s for s, _ in sols} == {cornacchia_st(p).s}
    c = cornacchia_st(p)
    assert c.s**2 + c.t**2 == p and c.t >= 0


@pytest.mark.parametrize("p", [p for p in primes_between(5, 400) if p % 3 == 1])
def test_cornacchia_ab_unique_by_enumeration(p):
    r = math.isqrt(4 * p)
    sols = {(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1)
            if a * a + 3 * b * b == 4 * p and a % 3 == 1 and b % 3 == 0}
    assert {a for a, _ in sols} == {cornacchia_ab(p).A}


def test_cornacchia_examples():
    assert cornacchia_st(5).s == -1
    assert cornacchia_st(13).s == 3
    assert cornacchia_st(17).s == 1
    assert (cornacchia_ab(7).A, cornacchia_ab(7).B) == (1, 3)
    assert cornacchia_ab(13).A == -5
    assert cornacchia_ab(31).A == 4
    with pytest.raises(DomainError):
        cornacchia_st(7)
    with pytest.raises(DomainError):
        cornacchia_ab(5)


def test_cm_formulas_small_primes():
    for p in primes_between(5, 200):
        for D in (1, 2, 3, 5):
            if (6 * D) % p == 0:
                continue
            want = dp_cm_maximal_order((D, 0), p).value
            assert dp_cm_x(D, p).value == want, (D, p)
            want = dp_cm_maximal_order((0, D), p).value
            assert dp_cm_y(D, p).value == want, (D, p)


def test_cm_precondition_errors():
    with pytest.raises(DomainError):
        dp_cm_x(5, 5)
    with pytest.raises(DomainError):
        dp_cm_y(0, 7)
    with pytest.raises(DomainError):
        dp_cm_maximal_order((1, 1), 7)


def test_cm_agrees_with_engine():
    for p in (13, 17):
        assert dp((1, 0), p).value == dp_cm_x(1, p).value
    for p in (7, 13, 19):
        assert dp((0, 1), p).value == dp_cm_y(1, p).value


# -- recurrence ---------------------------------------------------------------

def test_recurrence_sequence():
    assert recurrence_sequence(9) == [0, 1, 4, 15, 56, 209, 780, 2911, 10864]


@given(st.integers(2, 60))
def test_recurrence_identity(n):
    a = recurrence_sequence(n + 2)
    # a_{k+1}^2 - 4 a_k a_{k+1} + a_k^2 = 1 for this recurrence
    k = n - 1
    assert a[k + 1] ** 2 - 4 * a[k] * a[k + 1] + a[k] ** 2 == 1


def test_recurrence_scan_rows():
    rows = recurrence_scan(8)
    primes = [r.p for r in rows if r.is_prime]
    assert primes[:2] == [17, 241]
    for r in rows:
        if r.is_prime and r.p % 4 == 1:
            assert r.ord_p_2s == 8
    assert rows[0].p == 1 and rows[0].primality == "composite"
    with pytest.raises(OverflowError):
        recurrence_scan(50, max_bits=64)


# -- parallel helpers ---------------------------------------------------------------

def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("PDEG_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("PDEG_THREADS", "x")
    with pytest.raises(DomainError):
        thread_count()


def test_parallel_map_preserves_order():
    assert parallel_map(abs, [-3, 2, -1], workers=2) == [3, 2, 1]
    assert parallel_map(abs, [-3, 2, -1], workers=1) == [3, 2, 1]


def test_sweep_reports_divisibility_statistics():
    rep = dp_consistency_sweep(1, (5,), 2, workers=1)
    stats = rep["divisibility"]
    assert rep["violations"] == []
    assert stats["exact"] == stats["divides_p2_minus_1"] + len(stats["other"])

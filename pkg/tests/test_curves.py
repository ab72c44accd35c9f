import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdeg.counting import curve_over, enumerate_points
from pdeg.curves import INF, Curve, RingCurve, is_isomorphic, parse_point
from pdeg.errors import DomainError
from pdeg.local_arith import get_context


def affine_add(P, Q, A, p):
    """Textbook chord-tangent law on affine points mod p; None is the identity."""
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def as_affine(P):
    if P.is_identity():
        return None
    return int(P.x), int(P.y)


def test_parse_and_invariants():
    E = Curve.parse("-3/4,2")
    assert E.A == Fraction(-3, 4) and str(E) == "-3/4,2"
    assert Curve(1, 0).j_invariant() == 1728
    assert Curve(0, 1).j_invariant() == 0
    with pytest.raises(ValueError):
        Curve.parse("1.5,2")
    with pytest.raises(ValueError):
        Curve.parse("1,2,3")
    with pytest.raises(DomainError):
        Curve(-3, 2).j_invariant()


@given(st.integers(-50, 50), st.integers(-50, 50), st.fractions(min_value=-9, max_value=9))
def test_twist_preserves_j(A, B, u):
    E = Curve(A, B)
    if E.is_singular or u == 0:
        return
    assert E.twist(u).j_invariant() == E.j_invariant()


def test_p_minimal_model():
    E = Curve(Fraction(1, 5), 5**7).p_minimal(5)
    assert E.A.denominator == 1 and E.B.denominator == 1
    assert E.A == 5**3  # scaled by u = 5
    assert Curve(5**4, 5**6).p_minimal(5) == Curve(1, 1)


@pytest.mark.parametrize("A,B,p", [(1, 1, 5), (2, 3, 7), (-1, 4, 11), (3, -2, 13)])
def test_group_law_matches_affine_law(A, B, p):
    E = curve_over(A, B, p)
    pts = enumerate_points(E)
    for P in pts:
        for Q in pts:
            got = as_affine(E.add(P, Q))
            want = affine_add(as_affine(P), as_affine(Q), A % p, p)
            assert got == want, (P, Q)


@given(st.sampled_from([(5, 2, 2), (7, 1, 3), (5, 1, 2), (11, 2, 1)]), st.integers(0, 2**32))
def test_group_law_is_abelian_and_associative_over_local_rings(params, seed):
    p, d, j = params
    rnd = random.Random(seed)
    ctx = get_context(p, d, j)
    while True:
        try:
            E = RingCurve(ctx, ctx.random(rnd), ctx.random(rnd))
            break
        except DomainError:
            continue
    Ek = E.reduce_to(1)
    pts = []
    for _ in range(3):
        P0 = _random_residue_point(Ek, rnd)
        pts.append(E.lift_point(P0))
    P, Q, R = pts
    assert P + Q == Q + P
    assert (P + Q) + R == P + (Q + R)
    assert P + (-P) == E.identity()
    assert E.smul(5, P) == P + P + P + P + P


def _random_residue_point(Ek, rnd):
    from pdeg.counting import random_point

    return random_point(Ek, rnd)


def test_lift_point_lies_on_curve_and_reduces_back():
    E = curve_over(1, 1, 5, 1, 4)
    Ek = E.reduce_to(1)
    for P0 in enumerate_points(Ek):
        P = E.lift_point(P0)
        assert E.contains(P.coords)
        assert P.reduce_to(Ek) == P0


def test_curve_type_and_j1():
    ctx = get_context(5, 1, 3)
    E = RingCurve(ctx, 5, 1)
    t = E.curve_type()
    assert (t.m, t.n) == (1, 0)
    assert str(RingCurve(ctx, 0, 1).curve_type()) == "(inf, 0)"
    assert RingCurve(ctx, 0, 1).curve_type().m == INF
    j1 = E.j1_invariant()
    assert j1.ctx.j == 2
    with pytest.raises(DomainError):
        RingCurve(ctx, 1, 1).j1_invariant()


def test_isomorphism_detection():
    ctx = get_context(7, 1, 2)
    E = RingCurve(ctx, 1, 3)
    u = ctx(3)
    F = E.twist(u)
    w = is_isomorphic(F, E)
    assert w is not None and E.twist(w) == F
    # different j mod 7
    G = RingCurve(ctx, 1, 1)
    assert E.reduce_to(1).j_invariant() != G.reduce_to(1).j_invariant()
    assert is_isomorphic(E, G) is None


def test_parse_point_and_rejects_off_curve():
    E = curve_over(1, 1, 5)
    P = parse_point(E, "(0:1:1)")
    assert P.x == E.ctx(0)
    with pytest.raises(DomainError):
        E.point(0, 2)
    with pytest.raises(DomainError):
        RingCurve(get_context(5), 0, 0)


def test_discriminant_and_j_examples():
    assert Curve(1, 1).discriminant() == -496
    assert Curve(-1, 0).discriminant() == 64
    assert Curve(0, 0).is_singular
    assert Curve(3, 0).j_invariant() == 1728 and Curve(0, 3).j_invariant() == 0
    assert Curve(1, 1).j_invariant() == Fraction(6912, 31)


def test_curve_type_examples():
    ctx = get_context(5, 1, 2)
    assert (RingCurve(ctx, 1, 2).curve_type().m, RingCurve(ctx, 1, 2).curve_type().n) == (0, 0)
    assert RingCurve(ctx, 10, 1).curve_type().m == 1


def test_j1_examples_and_twist_invariance():
    ctx = get_context(5, 1, 2)
    E = RingCurve(ctx, 5, 1)
    assert int(E.j1_invariant()) == 1
    for u in (2, 3, 7, 11):
        F = E.twist(ctx(u))
        assert F.j1_invariant() == E.j1_invariant()
    with pytest.raises(DomainError):
        RingCurve(ctx, 0, 1).j1_invariant()


def test_isomorphism_examples():
    ctx = get_context(5, 1, 2)
    E = RingCurve(ctx, 1, 1)
    F = E.twist(ctx(2))
    u = is_isomorphic(F, E)
    assert u is not None and int(u) == 2
    assert is_isomorphic(E, RingCurve(ctx, 1, 1 + 25)) is not None


def test_group_law_examples_over_f5():
    E = curve_over(1, 1, 5)
    pts = enumerate_points(E)
    assert len(pts) == 9
    for P in pts:
        assert P + E.identity() == P
        assert P + E.neg(P) == E.identity()
        assert E.smul(9, P).is_identity()


def test_reduction_lift_section_and_fibres():
    E2 = curve_over(1, 1, 5, 1, 2)
    E1 = E2.reduce_to(1)
    assert E2.lift_point(E1.identity()).is_identity()
    fibres = {}
    for P in enumerate_points(E2):
        fibres.setdefault(P.reduce_to(E1).key(), []).append(P)
    assert len(fibres) == 9 and all(len(v) == 5 for v in fibres.values())
    for P0 in enumerate_points(E1):
        assert E2.reduce_point(E2.lift_point(P0), 1) == P0


@pytest.mark.parametrize("A, B, p, d", [(1, 1, 5, 2), (1, 0, 7, 3), (2, 1, 5, 4), (1, 0, 13, 2)])
def test_field_scalar_multiplication_matches_repeated_addition(A, B, p, d):
    E = curve_over(A, B, p, d)
    pts = enumerate_points(E)
    rnd = random.Random(p * d)
    for P in rnd.sample(pts, 6):
        R = E.identity()
        for n in range(1, 40):
            R = E.add(R, P)
            assert E.smul(n, P).key() == R.key()
        assert E.smul(len(pts), P).is_identity()

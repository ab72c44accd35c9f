"""Small worked examples, one per documented operation."""

import io
from fractions import Fraction

import pytest

from pdeg.cli import main
from pdeg.counting import ap, count_ext, curve_over, enumerate_points, is_supersingular, p_rank
from pdeg.curves import Curve
from pdeg.engine import Exact, classify_reduction, dp, dp_cm_x, dp_cm_y, recurrence_scan
from pdeg.errors import DomainError
from pdeg.lifts import canonical_lifts, predicted_rank, verify_rank_lemma
from pdeg.local_arith import (
    get_context,
    hensel_lift_root,
    is_pth_power_qp,
    is_square_qp,
    ord_mod_p,
    vp,
)
from pdeg.padic_poly import PolyQp, hensel_factor, newton_polygon, qp_factor_degrees


def test_local_arith_examples():
    assert (vp(1, 5), vp(50, 5), vp(Fraction(2, 5), 5)) == (0, 2, -1)
    assert (ord_mod_p(1, 7), ord_mod_p(-3, 5), ord_mod_p(2, 17)) == (1, 4, 8)
    assert is_square_qp(4, 5) and not is_square_qp(5, 5) and is_square_qp(2, 7)
    assert is_pth_power_qp(5**5, 5) and not is_pth_power_qp(5, 5) and not is_pth_power_qp(6, 5)
    R = get_context(5, 1, 2)
    assert int(hensel_lift_root([-1, 0, 1], R(1), 2)) == 1
    with pytest.raises(DomainError):
        hensel_lift_root([-5, 0, 1], R(0), 2)


def test_counting_examples():
    assert ap((1, 1), 5) == -3 and ap((0, 1), 7) == -4 and ap((1, 0), 7) == 0
    assert count_ext((1, 1), 5, 1) == 5 + 1 + 3
    assert count_ext((1, 1), 5, 4) == 675 == len(enumerate_points(curve_over(1, 1, 5, 4)))
    for p in (7, 11, 19):
        assert count_ext((1, 0), p, 2) == (p + 1) ** 2
    assert is_supersingular((0, 2), 11) and not is_supersingular((2, 0), 13)
    assert not is_supersingular((1, 1), 5)
    assert len(enumerate_points(curve_over(1, 1, 5, 1, 2))) == 45
    assert p_rank(curve_over(1, 1, 5)) == 0
    assert p_rank(curve_over(1, 1, 5, 1, 2)) == 1


def test_canonical_rank_is_d_plus_1():
    # d = 1 canonical lift keeps the enumeration small
    A, B = canonical_lifts(3, 2, 5)[0]
    d = ord_mod_p(ap((A, B), 5), 5)
    assert d == 1
    R = get_context(5, d, 2)
    from pdeg.curves import RingCurve

    assert p_rank(RingCurve(R, R(A), R(B))) == d + 1


def test_rank_formula_examples():
    rep = verify_rank_lemma((1, 1), 5, 1, 2)
    assert (rep.measured, rep.predicted) == (1, 1)
    A, B = canonical_lifts(1, 1, 5)[0]
    assert predicted_rank((A, B), 5, 4) == (5, 1)
    rep = verify_rank_lemma((1, 0), 7, 1, 2)  # supersingular
    assert (rep.measured, rep.predicted) == (1, 1)


def test_newton_and_hensel_examples():
    assert newton_polygon(PolyQp.from_rationals([-5, 0, 1], 5)).root_valuations == [(Fraction(1, 2), 2)]
    assert newton_polygon(PolyQp.from_rationals([-1, 1], 5)).root_valuations == [(0, 1)]
    g, h = hensel_factor([-1, 0, 1], [-1, 1], [1, 1], 7, 8)
    assert g == [7**8 - 1, 1]
    g, h = hensel_factor([-2, 0, 1], [-3, 1], [3, 1], 7, 8)
    r = -g[0] % 7**8
    assert r % 7 == 3 and (r * r - 2) % 7**8 == 0
    with pytest.raises(DomainError):
        # (x + 1)(x + 2) = x^2 + 3x + 2 is not x^2 + 3 mod 7
        hensel_factor([3, 0, 1], [1, 1], [2, 1], 7, 4)
    assert qp_factor_degrees([1, 0, 1], 7).degrees == [2]


def test_reduction_examples():
    assert str(classify_reduction((1, 1), 5)) == "good-ordinary"
    assert classify_reduction((1, 1), 31).kind == "multiplicative"
    assert classify_reduction((5, 5), 5).kind == "additive"


def test_engine_examples():
    assert dp((1, 0), 7).value == Exact(48)
    assert dp((1, 0), 13).value == Exact(12) == Exact(ord_mod_p(-6, 13))
    assert dp_cm_x(1, 5).value == Exact(4)
    assert dp_cm_x(3, 7).value == Exact(48)
    assert dp_cm_x(1, 17).value == Exact(8)
    assert dp_cm_y(1, 7).value == Exact(6)
    assert dp_cm_y(4, 11).value == Exact(120)
    assert dp_cm_y(2, 13).value == Exact(ord_mod_p(ap((0, 2), 13), 13))
    for D in (1, 2, 3):
        for p in (5, 7, 11, 13):
            if (6 * D) % p:
                a = ap((D, 0), p)
                expected = p * p - 1 if p % 4 == 3 else ord_mod_p(a, p)
                assert a % p != 0 or p % 4 == 3
                assert dp_cm_x(D, p).value == Exact(expected)


def run(*argv):
    out = io.StringIO()
    return main(list(argv), out), out.getvalue()


def test_cli_examples():
    code, text = run("compute", "-c", "1,0", "-p", "7")
    assert code == 0 and "d_p = 48" in text
    code, text = run("scan", "-c", "1,0", "--primes", "5..100", "--format", "csv")
    for row in text.splitlines()[1:]:
        p, cls, kind, value = row.split(",")[:4]
        p, value = int(p), int(value)
        if p % 4 == 3:
            assert value == p * p - 1
        else:
            assert (p - 1) % value == 0
    code, text = run("scan", "-c", "1,1", "--primes", "24..28")
    assert code == 0 and text == ""
    code, text = run("scan", "-c", "0,1", "--primes", "5..50", "--format", "csv")
    for row in text.splitlines()[1:]:
        p, cls = row.split(",")[:2]
        assert (cls == "supersingular") == (int(p) % 3 == 2)
    code, text = run("verify", "lemma31", "-p", "5", "-d", "1", "-j", "2")
    assert code == 0 and "0 violations" in text
    code, text = run("recurrence", "-k", "5")
    assert "k=1  a_k=1  a_k+1=4  p=17  prime  s=1  ord_p(2s)=8" in text
    assert recurrence_scan(0)[0].p == 1 and not recurrence_scan(0)[0].is_prime
    assert run("factor-psi", "-c", "1,1", "-p", "3")[0] == 64
    code, text = run("factor-psi", "-c", "0,1", "-p", "5")
    assert code == 0 and "degrees" in text


def test_curve_spec_with_rationals():
    E = Curve.parse("-3/4,2")
    assert dp(E, 7).value == dp(E.p_minimal(7), 7).value

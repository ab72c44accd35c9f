"""Canonical lifts mod p^2 via the torsion-lifting obstruction.

For an ordinary curve over Z/p^2 let d = ord_p(a_p) and Q a point of order p
in E(F_{p^d}).  Every lift of Q to GR(p^2, d) differs from any other by an
element of the kernel of reduction, which is killed by p; so [p]Q~ does not
depend on the lift.  It vanishes exactly when E(GR(p^2, d))[p] has rank d + 1,
i.e. when the curve is the canonical lift of its reduction.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .counting import (
    DEFAULT_ENUM_BUDGET,
    ap,
    count_from_trace,
    enumerate_points,
    enumeration_cost,
    p_rank,
    random_point,
)
from .curves import Curve, Point, RingCurve
from .errors import DomainError
from .local_arith import default_modulus, get_context, mod_rational, ord_mod_p

COFACTOR_RETRIES = 64


def coeffs_mod(E, m: int) -> tuple[int, int]:
    """(A mod m, B mod m) for a rational curve, an (A, B) pair or a Z/p^j curve."""
    if isinstance(E, RingCurve):
        if E.ctx.d != 1:
            raise DomainError("expected a curve over Z/p^j")
        if m > E.ctx.q or E.ctx.q % m:
            raise DomainError(f"cannot reduce a curve over {E.ctx} modulo {m}")
        return int(E.A) % m, int(E.B) % m
    if isinstance(E, Curve):
        A, B = E.A, E.B
    else:
        A, B = (Fraction(c) for c in E)
    return mod_rational(A, m), mod_rational(B, m)


def _integral_model(E, p: int):
    if isinstance(E, Curve):
        return E.p_minimal(p)
    return E


@lru_cache(maxsize=4096)
def residue_torsion_point(A: int, B: int, p: int, d: int, modulus: tuple[int, ...], seed: int = 0) -> Point:
    """A point of exact order p on E_{A,B}(F_{p^d}), by the cofactor method.

    Falls back to full enumeration after COFACTOR_RETRIES unlucky draws.
    """
    k = get_context(p, d, 1, modulus)
    Ek = RingCurve(k, k(A), k(B))
    n = count_from_trace(ap((A, B), p), p, d)
    if n % p:
        raise DomainError(f"E(F_{p}^{d}) has no point of order {p}")
    cofactor = n // p
    rng = random.Random(seed)
    for _ in range(COFACTOR_RETRIES):
        Q = Ek.smul(cofactor, random_point(Ek, rng))
        if not Q.is_identity():
            return Q
    for P in enumerate_points(Ek):
        Q = Ek.smul(cofactor, P)
        if not Q.is_identity():
            return Q
    raise AssertionError("no point of order p despite p | #E")  # pragma: no cover


@dataclass(frozen=True)
class LiftObstruction:
    A: int  # coefficients mod p^2
    B: int
    p: int
    d: int
    residue_point: Point
    lifted_point: Point
    obstruction_point: Point
    vanishes: bool


def torsion_lift_obstruction(E, p: int, modulus=None, seed: int = 0) -> LiftObstruction:
    """[p]Q~ over GR(p^2, d) for a lift Q~ of an order-p point Q of E(F_{p^d}), d = ord_p(a_p)."""
    E = _integral_model(E, p)
    A, B = coeffs_mod(E, p * p)
    a = ap((A, B), p)
    if a % p == 0:
        raise DomainError(f"supersingular at {p} (a_p = {a}): no point of order {p} over any F_{p}^d")
    d = ord_mod_p(a, p)
    if modulus is None:
        modulus = default_modulus(p, d)
    modulus = tuple(int(c) for c in modulus)
    Q = residue_torsion_point(A % p, B % p, p, d, tuple(c % p for c in modulus), seed)
    R2 = get_context(p, d, 2, modulus)
    E2 = RingCurve(R2, R2(A), R2(B))
    Qt = E2.lift_point(Q)
    obstruction = E2.smul(p, Qt)
    return LiftObstruction(A, B, p, d, Q, Qt, obstruction, obstruction.is_identity())


def is_canonical_lift(E, p: int, modulus=None, seed: int = 0) -> bool:
    """Whether the reduction of E mod p^2 is the canonical lift of its reduction mod p."""
    E = _integral_model(E, p)
    A, B = coeffs_mod(E, p * p)
    if ap((A, B), p) % p == 0:
        raise DomainError("canonical lift undefined for supersingular reduction")
    return torsion_lift_obstruction((A, B), p, modulus, seed).vanishes


def canonical_by_rank(E, p: int, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    """The same question answered by exhaustive enumeration: rank_p E(GR(p^2, d))[p] = d + 1."""
    E = _integral_model(E, p)
    A, B = coeffs_mod(E, p * p)
    d = ord_mod_p(ap((A, B), p), p)
    R2 = get_context(p, d, 2)
    return p_rank(RingCurve(R2, R2(A), R2(B)), budget) == d + 1


@dataclass
class CanonicalReport:
    curve: str
    p: int
    d: int
    canonical: bool
    method: str = "obstruction"
    cross_checked: bool = False

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def canonical_report(E, p: int, cross_check: bool = False, budget: int = DEFAULT_ENUM_BUDGET) -> CanonicalReport:
    E = _integral_model(E, p)
    obs = torsion_lift_obstruction(E, p)
    label = str(E) if isinstance(E, Curve) else f"{obs.A},{obs.B}"
    report = CanonicalReport(label, p, obs.d, obs.vanishes)
    if cross_check and enumeration_cost(get_context(p, obs.d, 2)) <= budget:
        by_rank = canonical_by_rank((obs.A, obs.B), p, budget)
        if by_rank != obs.vanishes:
            raise AssertionError(f"obstruction and rank criteria disagree for {label} at {p}")
        report.cross_checked = True
    return report


def lifts_mod_p2(A: int, B: int, p: int) -> list[tuple[int, int]]:
    """All (A', B') mod p^2 reducing to (A, B) mod p."""
    A, B = A % p, B % p
    return [(A + p * s, B + p * t) for s in range(p) for t in range(p)]


def canonical_lifts(A: int, B: int, p: int) -> list[tuple[int, int]]:
    return [ab for ab in lifts_mod_p2(A, B, p) if torsion_lift_obstruction(ab, p).vanishes]


def full_order_canonical_lifts(p: int, limit: int | None = None) -> list[tuple[int, int]]:
    """One canonical lift mod p^2 per curve mod p whose a_p has order p - 1.

    Such curves are canonical yet have d_p = p - 1, so the bound d_p >= p - 1
    alone does not certify a non-canonical curve.
    """
    out = []
    for A in range(p):
        for B in range(p):
            if (4 * A**3 + 27 * B * B) % p == 0:
                continue
            a = ap((A, B), p)
            if a % p == 0 or ord_mod_p(a, p) != p - 1:
                continue
            lift = next(ab for ab in lifts_mod_p2(A, B, p) if torsion_lift_obstruction(ab, p).vanishes)
            out.append(lift)
            if limit is not None and len(out) >= limit:
                return out
    return out


@dataclass
class RankLemmaReport:
    curve: tuple[int, int]
    p: int
    d: int
    j: int
    measured: int
    predicted: int
    r: int
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.measured == self.predicted


def predicted_rank(E, p: int, d: int) -> tuple[int, int]:
    """(d + r, r) with r = 1 iff E is ordinary, canonical mod p^2 and ord_p(a_p) | d."""
    A, B = coeffs_mod(_integral_model(E, p), p * p)
    a = ap((A, B), p)
    r = 0
    if a % p and d % ord_mod_p(a, p) == 0 and is_canonical_lift((A, B), p):
        r = 1
    return d + r, r


def verify_rank_lemma(E, p: int, d: int, j: int, budget: int = DEFAULT_ENUM_BUDGET) -> RankLemmaReport:
    """Measured rank_p E(GR(p^j, d))[p] against d + rank_p E(K)[p] for K unramified of degree d."""
    if j < 2:
        raise DomainError("the rank formula needs j >= 2")
    E = _integral_model(E, p)
    A, B = coeffs_mod(E, p**j)
    R = get_context(p, d, j)
    measured = p_rank(RingCurve(R, R(A), R(B)), budget)
    predicted, r = predicted_rank((A, B), p, d)
    return RankLemmaReport((A, B), p, d, j, measured, predicted, r)

"""Point counts, Frobenius traces and exhaustive enumeration over finite local rings."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .curves import Curve, Point, RingCurve
from .errors import BudgetExceeded, DomainError
from .local_arith import LocalContext, get_context, mod_rational

# Work units: one unit per ring element visited in the affine chart plus one per
# (x, z) pair in the chart at infinity.
DEFAULT_ENUM_BUDGET = 10**7
MAX_CHARACTER_SUM_P = 10**6


@dataclass(frozen=True)
class FrobeniusData:
    p: int
    ap: int
    curve: Curve | None = None

    def __post_init__(self):
        if self.ap * self.ap > 4 * self.p:
            raise AssertionError(f"Hasse bound violated: a_p={self.ap}, p={self.p}")

    @property
    def supersingular(self) -> bool:
        return self.ap == 0


def _coeffs_mod_p(E, p: int) -> tuple[int, int]:
    if isinstance(E, RingCurve):
        if E.ctx.d != 1:
            raise DomainError("a_p needs a curve over Z/p^j")
        return int(E.A) % p, int(E.B) % p
    if isinstance(E, Curve):
        E = E.p_minimal(p)
        A, B = E.A, E.B
    else:
        A, B = (Fraction(c) for c in E)
    return mod_rational(A, p), mod_rational(B, p)


def _has_good_reduction(A: int, B: int, p: int) -> bool:
    return (4 * A**3 + 27 * B * B) % p != 0


def ap(E, p: int) -> int:
    """Trace of Frobenius p + 1 - #E(F_p) via the quadratic character sum."""
    if p < 5:
        raise DomainError("p must be >= 5")
    if p > MAX_CHARACTER_SUM_P:
        raise BudgetExceeded(f"character sum limited to p <= {MAX_CHARACTER_SUM_P}")
    A, B = _coeffs_mod_p(E, p)
    if not _has_good_reduction(A, B, p):
        raise DomainError(f"bad reduction at {p}")
    chi = [-1] * p
    chi[0] = 0
    for y in range(1, (p + 1) // 2):
        chi[y * y % p] = 1
    s = 0
    for x in range(p):
        s += chi[(x * x * x + A * x + B) % p]
    a = -s
    FrobeniusData(p, a)  # Hasse check
    return a


def count_from_trace(a: int, p: int, d: int) -> int:
    """#E(F_{p^d}) = p^d + 1 - t_d with t_{k+1} = a t_k - p t_{k-1}."""
    t_prev, t = 2, a
    for _ in range(d - 1):
        t_prev, t = t, a * t - p * t_prev
    return p**d + 1 - t


def count_ext(E, p: int, d: int) -> int:
    return count_from_trace(ap(E, p), p, d)


def is_supersingular(E, p: int) -> bool:
    return ap(E, p) == 0


def is_ordinary(E, p: int) -> bool:
    return ap(E, p) != 0


def enumeration_cost(ctx: LocalContext) -> int:
    m = ctx.size // ctx.residue_size
    return ctx.size + m * m


def enumerate_points(E: RingCurve, budget: int = DEFAULT_ENUM_BUDGET) -> list[Point]:
    """All points of E over its ring, sorted by canonical coordinates.

    Affine chart z = 1: for each x, look y up in a table of all squares.
    Chart y = 1: x, z range over the maximal ideal (these are the points
    reducing to the identity).
    """
    ctx = E.ctx
    cost = enumeration_cost(ctx)
    if cost > budget:
        raise BudgetExceeded(f"enumerating E over {ctx} costs {cost} > budget {budget}: too large")
    pts: list[Point] = []
    if ctx.d == 1:
        q = ctx.q
        A, B = int(E.A), int(E.B)
        roots: dict[int, list[int]] = {}
        for y in range(q):
            roots.setdefault(y * y % q, []).append(y)
        for x in range(q):
            for y in roots.get((x * x * x + A * x + B) % q, ()):
                pts.append(Point(E, (x, y, 1)))
        ideal = range(0, q, ctx.p)
        for x in ideal:
            for z in ideal:
                if (z - x**3 - A * x * z * z - B * z**3) % q == 0:
                    pts.append(Point(E, (x, 1, z)))
    else:
        elems = list(ctx.elements())
        roots = {}
        for y in elems:
            roots.setdefault((y * y).c, []).append(y)
        one = ctx.one()
        for x in elems:
            for y in roots.get(E.rhs(x).c, ()):
                pts.append(Point(E, (x, y, one)))
        ideal = list(ctx.maximal_ideal())
        for x in ideal:
            for z in ideal:
                if (z - x**3 - E.A * x * z * z - E.B * z**3).is_zero():
                    pts.append(Point(E, (x, one, z)))
    pts.sort()
    return pts


def p_torsion(E: RingCurve, budget: int = DEFAULT_ENUM_BUDGET) -> list[Point]:
    """Points P of E with [p]P = O.

    Every enumerated point lying over a p-torsion point of the residue curve is
    tested with smul(p, .); points over residue points of order prime to p
    cannot be p-torsion and are skipped.
    """
    p = E.ctx.p
    pts = enumerate_points(E, budget)
    if E.ctx.j == 1:
        return [P for P in pts if E.smul(p, P).is_identity()]
    Ek = E.reduce_to(1)
    residue_torsion = {P.key() for P in p_torsion(Ek, budget)}
    out = []
    for P in pts:
        if P.reduce_to(Ek).key() in residue_torsion and E.smul(p, P).is_identity():
            out.append(P)
    return out


def p_rank(E: RingCurve, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """dim_{F_p} E(R)[p], from the number of p-torsion points."""
    n = len(p_torsion(E, budget))
    p = E.ctx.p
    r = round(math.log(n, p))
    if p**r != n:
        raise AssertionError(f"{n} p-torsion points is not a power of {p}")
    return r


def random_point(E: RingCurve, rng: random.Random) -> Point:
    """A uniformly random affine point of E over a finite field (j = 1)."""
    ctx = E.ctx
    if ctx.j != 1:
        raise DomainError("random_point needs a field")
    for _ in range(10_000):
        x = ctx.random(rng)
        r = E.rhs(x)
        if r.is_zero() or r.is_square():
            y = r.sqrt()
            if rng.random() < 0.5:
                y = -y
            return Point(E, (x, y, ctx.one()))
    raise AssertionError("no point found")  # pragma: no cover


def curve_over(A, B, p: int, d: int = 1, j: int = 1, modulus=None) -> RingCurve:
    ctx = get_context(p, d, j, modulus)
    return RingCurve(ctx, ctx(mod_rational(A, ctx.q)), ctx(mod_rational(B, ctx.q)))

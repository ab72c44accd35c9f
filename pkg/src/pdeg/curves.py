"""Short Weierstrass curves y^2 = x^3 + Ax + B over Q and over finite local rings.

Points over a local ring R are primitive triples (x : y : z) modulo R^x.  The
group law evaluates a complete system of three bidegree-(2,2) addition laws
and keeps the first output that has a unit coordinate.  Over a local ring
that is enough: the residue-field exceptional sets of the laws have empty
common intersection, and any primitive output of a genuine addition law is
the sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .local_arith import LocalContext, RingElem, hensel_lift_root, mod_rational, vp

INF = math.inf


def _frac(s: str) -> Fraction:
    s = s.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not an exact rational: {s!r}")
    return Fraction(s)


@dataclass(frozen=True)
class Curve:
    """E_{A,B} over Q."""

    A: Fraction
    B: Fraction

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        object.__setattr__(self, "B", Fraction(self.B))

    @classmethod
    def parse(cls, spec: str) -> "Curve":
        """Parse "A,B" with integer or exact rational entries, e.g. "-3/4,2"."""
        parts = spec.split(",")
        if len(parts) != 2:
            raise ValueError(f"curve spec must look like 'A,B', got {spec!r}")
        return cls(_frac(parts[0]), _frac(parts[1]))

    def __str__(self):
        return f"{self.A},{self.B}"

    def discriminant(self) -> Fraction:
        return -16 * (4 * self.A**3 + 27 * self.B**2)

    @property
    def is_singular(self) -> bool:
        return self.discriminant() == 0

    def j_invariant(self) -> Fraction:
        if self.is_singular:
            raise DomainError(f"E_{{{self}}} is singular")
        a3 = 4 * self.A**3
        return 1728 * a3 / (a3 + 27 * self.B**2)

    def twist(self, u) -> "Curve":
        """The isomorphic model (u^4 A, u^6 B)."""
        u = Fraction(u)
        return Curve(u**4 * self.A, u**6 * self.B)

    def quadratic_twist(self, delta) -> "Curve":
        delta = Fraction(delta)
        return Curve(delta**2 * self.A, delta**3 * self.B)

    def p_minimal(self, p: int) -> "Curve":
        """Rescale by powers of p until A, B are p-integral and not both divisible by (p^4, p^6)."""
        k = 0
        for c, w in ((self.A, 4), (self.B, 6)):
            if c:
                k = max(k, -(vp(c, p) // w))
        E = self.twist(Fraction(p) ** k)
        while (E.A == 0 or vp(E.A, p) >= 4) and (E.B == 0 or vp(E.B, p) >= 6):
            if E.A == 0 and E.B == 0:
                raise DomainError("singular curve")
            E = E.twist(Fraction(1, p))
        return E

    def over(self, ctx: LocalContext) -> "RingCurve":
        return RingCurve(ctx, ctx(mod_rational(self.A, ctx.q)), ctx(mod_rational(self.B, ctx.q)))


def discriminant(E):
    return E.discriminant()


def j_invariant(E):
    return E.j_invariant()


@dataclass(frozen=True)
class CurveType:
    """Exact p-divisibility (m, n) of (A, B); INF marks a zero coefficient."""

    m: float
    n: float

    def __str__(self):
        f = lambda v: "inf" if v == INF else str(int(v))  # noqa: E731
        return f"({f(self.m)}, {f(self.n)})"


class RingCurve:
    """E_{A,B} over GR(p^j, d) with unit discriminant."""

    __slots__ = ("ctx", "A", "B", "_a", "_b")

    def __init__(self, ctx: LocalContext, A, B):
        self.ctx = ctx
        self.A = A if isinstance(A, RingElem) else ctx(A)
        self.B = B if isinstance(B, RingElem) else ctx(B)
        if not self.discriminant().is_unit():
            raise DomainError(f"discriminant of E_{{{self.A},{self.B}}} is not a unit in {ctx}")
        if ctx.d == 1:
            self._a, self._b = self.A.c[0], self.B.c[0]
        else:
            self._a, self._b = self.A, self.B

    def __repr__(self):
        return f"RingCurve({self.ctx!r}, A={self.A}, B={self.B})"

    def __eq__(self, other):
        return isinstance(other, RingCurve) and (self.ctx, self.A, self.B) == (other.ctx, other.A, other.B)

    def __hash__(self):
        return hash((self.ctx, self.A, self.B))

    def discriminant(self) -> RingElem:
        return -16 * (4 * self.A**3 + 27 * self.B**2)

    def j_invariant(self) -> RingElem:
        a3 = 4 * self.A**3
        return 1728 * a3 / (a3 + 27 * self.B**2)

    def curve_type(self) -> CurveType:
        j = self.ctx.j
        m = INF if self.A.is_zero() else self.A.valuation()
        n = INF if self.B.is_zero() else self.B.valuation()
        assert m < j or n < j
        return CurveType(m, n)

    def j1_invariant(self) -> RingElem:
        """B^2/alpha^3 in GR(p^(j-m), d) for type (m, 0), or A^3/beta^2 for type (0, n)."""
        t = self.curve_type()
        if t.n == 0 and 1 <= t.m < INF:
            alpha = self.A.unit_part()
            return self.B.reduce_to(alpha.ctx.j) ** 2 / alpha**3
        if t.m == 0 and 1 <= t.n < INF:
            beta = self.B.unit_part()
            return self.A.reduce_to(beta.ctx.j) ** 3 / beta**2
        raise DomainError(f"j1 undefined for type {t}")

    def twist(self, u: RingElem) -> "RingCurve":
        return RingCurve(self.ctx, u**4 * self.A, u**6 * self.B)

    def reduce_to(self, i: int) -> "RingCurve":
        return RingCurve(self.ctx.with_precision(i), self.A.reduce_to(i), self.B.reduce_to(i))

    def embed(self, ctx: LocalContext) -> "RingCurve":
        """Same integer coefficients over a ring of another precision."""
        return RingCurve(ctx, self.A.embed(ctx), self.B.embed(ctx))

    # -- points ----------------------------------------------------------

    def identity(self) -> "Point":
        return Point(self, (0, 1, 0))

    def point(self, x, y, z=1) -> "Point":
        P = Point(self, (x, y, z))
        if not self.contains(P.coords):
            raise DomainError(f"{P} is not on the curve")
        return P

    def contains(self, coords) -> bool:
        x, y, z = (self.ctx(c) if not isinstance(c, RingElem) else c for c in coords)
        return (y * y * z - x**3 - self.A * x * z * z - self.B * z**3).is_zero()

    def rhs(self, x):
        return x**3 + self.A * x + self.B

    def add(self, P: "Point", Q: "Point") -> "Point":
        if self.ctx.d == 1:
            q, p = self.ctx.q, self.ctx.p
            p1 = tuple(c.c[0] for c in P.coords)
            p2 = tuple(c.c[0] for c in Q.coords)
            for law in _LAWS:
                out = [v % q for v in law(p1, p2, self._a, self._b)]
                if any(v % p for v in out):
                    return Point(self, out)
        else:
            for law in _LAWS:
                out = law(P.coords, Q.coords, self._a, self._b)
                if any(v.is_unit() for v in out):
                    return Point(self, out)
        raise AssertionError("complete addition system produced no primitive output")

    def neg(self, P: "Point") -> "Point":
        x, y, z = P.coords
        return Point(self, (x, -y, z))

    def smul(self, n: int, P: "Point") -> "Point":
        if n < 0:
            return self.smul(-n, self.neg(P))
        if self.ctx.j == 1 and self.ctx.d > 1:
            return self._field_smul(n, P)
        R = self.identity()
        for bit in bin(n)[2:]:
            R = self.add(R, R)
            if bit == "1":
                R = self.add(R, P)
        return R

    def _field_smul(self, n: int, P: "Point") -> "Point":
        """[n]P over a field in Jacobian coordinates (x, y) = (X/Z^2, Y/Z^3).

        Over a field the usual case split (doubling, P = -Q, identity) is
        exact, so the complete law is not needed; one inversion at the end.
        """
        if P.is_identity() or n == 0:
            return self.identity()
        a = self.A
        x0, y0, _ = P.coords  # affine, z = 1
        zero, one = self.ctx.zero(), self.ctx.one()

        def dbl(X, Y, Z):
            if Z.is_zero() or Y.is_zero():
                return one, one, zero
            YY = Y * Y
            ZZ = Z * Z
            S = 4 * (X * YY)
            M = 3 * (X * X) + a * (ZZ * ZZ)
            X3 = M * M - 2 * S
            return X3, M * (S - X3) - 8 * (YY * YY), 2 * (Y * Z)

        def add_affine(X, Y, Z):
            if Z.is_zero():
                return x0, y0, one
            ZZ = Z * Z
            U2 = x0 * ZZ
            S2 = y0 * (ZZ * Z)
            H = U2 - X
            r = S2 - Y
            if H.is_zero():
                return dbl(X, Y, Z) if r.is_zero() else (one, one, zero)
            HH = H * H
            HHH = HH * H
            V = X * HH
            X3 = r * r - HHH - 2 * V
            return X3, r * (V - X3) - Y * HHH, Z * H

        X, Y, Z = one, one, zero
        for bit in bin(n)[2:]:
            X, Y, Z = dbl(X, Y, Z)
            if bit == "1":
                X, Y, Z = add_affine(X, Y, Z)
        if Z.is_zero():
            return self.identity()
        zi = Z.inverse()
        zi2 = zi * zi
        return Point(self, (X * zi2, Y * zi2 * zi, one))

    def reduce_point(self, P: "Point", i: int) -> "Point":
        return P.reduce_to(self.reduce_to(i))

    def lift_point(self, P: "Point") -> "Point":
        """Some preimage in E(self.ctx) of a point P on a reduction of this curve."""
        ctx = self.ctx
        x, y, z = (c.embed(ctx) for c in P.coords)
        if z.is_unit():
            # P is normalised with z = 1: solve y^2 = x^3 + Ax + B for y or for x.
            if y.is_unit():
                y = hensel_lift_root([-self.rhs(x), 0, 1], y, ctx.j, ctx=ctx)
            else:
                x = hensel_lift_root([self.B - y * y, self.A, 0, 1], x, ctx.j, ctx=ctx)
            return Point(self, (x, y, ctx.one()))
        # chart y = 1: z = x^3 + A x z^2 + B z^3 with x, z in the maximal ideal
        f = [-(x**3), ctx.one(), -self.A * x, -self.B]
        z = hensel_lift_root(f, z, ctx.j, ctx=ctx)
        return Point(self, (x, ctx.one(), z))


class Point:
    """Primitive projective point, scaled so the last unit among (z, y, x) equals 1."""

    __slots__ = ("curve", "coords")

    def __init__(self, curve: RingCurve, coords):
        ctx = curve.ctx
        xyz = [c if isinstance(c, RingElem) and c.ctx == ctx else ctx(c.c if isinstance(c, RingElem) else c)
               for c in coords]
        for k in (2, 1, 0):
            if xyz[k].is_unit():
                inv = xyz[k].inverse()
                xyz = [c * inv for c in xyz]
                break
        else:
            raise DomainError("coordinates are not primitive")
        self.curve = curve
        self.coords = tuple(xyz)

    @property
    def x(self):
        return self.coords[0]

    @property
    def y(self):
        return self.coords[1]

    @property
    def z(self):
        return self.coords[2]

    def is_identity(self) -> bool:
        x, y, z = self.coords
        return x.is_zero() and z.is_zero()

    def reduce_to(self, curve: RingCurve) -> "Point":
        i = curve.ctx.j
        return Point(curve, [c.reduce_to(i) for c in self.coords])

    def key(self):
        return tuple(c.c for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, Point) and self.curve.ctx == other.curve.ctx and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __add__(self, other):
        return self.curve.add(self, other)

    def __neg__(self):
        return self.curve.neg(self)

    def __rmul__(self, n: int):
        return self.curve.smul(n, self)

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"

    __repr__ = __str__


def parse_point(curve: RingCurve, text: str) -> Point:
    """Inverse of str(Point) for Z/p^j points, e.g. "(3:4:1)"."""
    inner = text.strip().removeprefix("(").removesuffix(")")
    parts = inner.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad point {text!r}")
    return curve.point(*(int(s) for s in parts))


def is_isomorphic(E1: RingCurve, E2: RingCurve) -> RingElem | None:
    """A unit u with A1 = u^4 A2 and B1 = u^6 B2, or None.

    Residue-field search for u mod p, then the unique Hensel lift of a root of
    x^4 = A1/A2 (or x^6 = B1/B2 when A2 is not a unit), then a check of the
    other equation.
    """
    ctx = E1.ctx
    if E2.ctx != ctx:
        raise DomainError("curves over different rings")
    k = ctx.residue_field()
    A1, B1, A2, B2 = (c.residue() for c in (E1.A, E1.B, E2.A, E2.B))
    if E2.A.is_unit():
        exp, target = 4, E1.A / E2.A if E1.A.is_unit() else None
    else:
        exp, target = 6, E1.B / E2.B if E1.B.is_unit() else None
    if target is None:
        return None
    for u0 in k.elements():
        if u0.is_zero():
            continue
        if u0**4 * A2 != A1 or u0**6 * B2 != B1:
            continue
        u = hensel_lift_root([-target] + [0] * (exp - 1) + [1], u0, ctx.j, ctx=ctx)
        if u**4 * E2.A == E1.A and u**6 * E2.B == E1.B:
            return u
    return None


# ---------------------------------------------------------------------------
# A complete system of addition laws for y^2 z = x^3 + a x z^2 + b z^3.
# Law 0 is exceptional exactly on the diagonal P = Q, law 1 exactly when
# P - Q is a nonzero 2-torsion point; law 2 is a further independent law.
# ---------------------------------------------------------------------------

def _law0(P, Q, a, b):
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    X3 = (-a * X1 * X1 * Z2 * Z2 + 2 * X1 * Y1 * Y2 * Z2 + X1 * Z1 * Y2 * Y2 - 3 * b * X1 * Z1 * Z2 * Z2
          - Y1 * Y1 * X2 * Z2 - 2 * Y1 * Z1 * X2 * Y2 + a * Z1 * Z1 * X2 * X2 + 3 * b * Z1 * Z1 * X2 * Z2)
    Y3 = (-3 * X1 * X1 * X2 * Y2 + 3 * X1 * Y1 * X2 * X2 + a * X1 * Y1 * Z2 * Z2 - 2 * a * X1 * Z1 * Y2 * Z2
          - Y1 * Y1 * Y2 * Z2 + 2 * a * Y1 * Z1 * X2 * Z2 + Y1 * Z1 * Y2 * Y2 + 3 * b * Y1 * Z1 * Z2 * Z2
          - a * Z1 * Z1 * X2 * Y2 - 3 * b * Z1 * Z1 * Y2 * Z2)
    Z3 = (3 * X1 * X1 * X2 * Z2 - 3 * X1 * Z1 * X2 * X2 + a * X1 * Z1 * Z2 * Z2 - Y1 * Y1 * Z2 * Z2
          - a * Z1 * Z1 * X2 * Z2 + Z1 * Z1 * Y2 * Y2)
    return X3, Y3, Z3


def _law1(P, Q, a, b):
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    X3 = (-a * X1 * X1 * Y2 * Z2 - 2 * a * X1 * Y1 * X2 * Z2 + X1 * Y1 * Y2 * Y2 - 3 * b * X1 * Y1 * Z2 * Z2
          - 2 * a * X1 * Z1 * X2 * Y2 - 6 * b * X1 * Z1 * Y2 * Z2 + Y1 * Y1 * X2 * Y2 - a * Y1 * Z1 * X2 * X2
          - 6 * b * Y1 * Z1 * X2 * Z2 + a * a * Y1 * Z1 * Z2 * Z2 - 3 * b * Z1 * Z1 * X2 * Y2
          + a * a * Z1 * Z1 * Y2 * Z2)
    Y3 = (3 * a * X1 * X1 * X2 * X2 + 9 * b * X1 * X1 * X2 * Z2 - a * a * X1 * X1 * Z2 * Z2
          + 9 * b * X1 * Z1 * X2 * X2 - 4 * a * a * X1 * Z1 * X2 * Z2 - 3 * a * b * X1 * Z1 * Z2 * Z2
          + Y1 * Y1 * Y2 * Y2 - a * a * Z1 * Z1 * X2 * X2 - 3 * a * b * Z1 * Z1 * X2 * Z2
          - 9 * b * b * Z1 * Z1 * Z2 * Z2 - a * a * a * Z1 * Z1 * Z2 * Z2)
    Z3 = (3 * X1 * X1 * X2 * Y2 + 3 * X1 * Y1 * X2 * X2 + a * X1 * Y1 * Z2 * Z2 + 2 * a * X1 * Z1 * Y2 * Z2
          + Y1 * Y1 * Y2 * Z2 + 2 * a * Y1 * Z1 * X2 * Z2 + Y1 * Z1 * Y2 * Y2 + 3 * b * Y1 * Z1 * Z2 * Z2
          + a * Z1 * Z1 * X2 * Y2 + 3 * b * Z1 * Z1 * Y2 * Z2)
    return X3, Y3, Z3


def _law2(P, Q, a, b):
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    X3 = (a * X1 * X1 * X2 * Z2 + X1 * X1 * Y2 * Y2 + 3 * b * X1 * X1 * Z2 * Z2 - a * X1 * Z1 * X2 * X2
          - a * a * X1 * Z1 * Z2 * Z2 - Y1 * Y1 * X2 * X2 - 3 * b * Z1 * Z1 * X2 * X2
          + a * a * Z1 * Z1 * X2 * Z2)
    Y3 = (a * X1 * X1 * Y2 * Z2 - 2 * a * X1 * Y1 * X2 * Z2 + X1 * Y1 * Y2 * Y2 - 3 * b * X1 * Y1 * Z2 * Z2
          + 2 * a * X1 * Z1 * X2 * Y2 + 6 * b * X1 * Z1 * Y2 * Z2 - Y1 * Y1 * X2 * Y2 - a * Y1 * Z1 * X2 * X2
          - 6 * b * Y1 * Z1 * X2 * Z2 + a * a * Y1 * Z1 * Z2 * Z2 + 3 * b * Z1 * Z1 * X2 * Y2
          - a * a * Z1 * Z1 * Y2 * Z2)
    Z3 = (-a * X1 * X1 * Z2 * Z2 - 2 * X1 * Y1 * Y2 * Z2 + X1 * Z1 * Y2 * Y2 - 3 * b * X1 * Z1 * Z2 * Z2
          - Y1 * Y1 * X2 * Z2 + 2 * Y1 * Z1 * X2 * Y2 + a * Z1 * Z1 * X2 * X2 + 3 * b * Z1 * Z1 * X2 * Z2)
    return X3, Y3, Z3


_LAWS = (_law0, _law1, _law2)

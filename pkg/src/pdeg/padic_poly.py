"""Division polynomials and their factorization over Q_p.

The factorizer is deliberately modest.  It separates roots by valuation
(rescaling x -> p^c x and splitting off the part that drops degree mod p),
splits coprime residual factors by Hensel lifting, and certifies a factor
when it is unramified (irreducible mod p after rescaling) or totally ramified
(one Newton segment whose slope denominator equals the degree).  Anything
else is reported as inconclusive together with degree bounds.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import _zpoly as zp
from .curves import Curve
from .errors import BudgetExceeded, DomainError, PrecisionError, PrecisionWarning
from .local_arith import (
    PadicRational,
    hensel_lift_root,
    get_context,
    is_prime,
    mod_rational,
    vp,
)

DEFAULT_PRECISION = 24
MAX_PRECISION = 192
DEFAULT_MAX_P = 13
TAYLOR_ROUNDS = 8

CERTIFIED = "certified-irreducible"
RESOLVED = "certified-product-resolved"
INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# Division polynomials
# ---------------------------------------------------------------------------

def _padd(f, g):
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)]


def _pneg(f):
    return [-c for c in f]


def _pmul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for k, b in enumerate(g):
                out[i + k] += a * b
    return out


def _ptrim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def division_polynomial(A, B, n: int, modulus: int | None = None) -> list:
    """psi_n of y^2 = x^3 + Ax + B for odd n, as coefficients in x (lowest first).

    Coefficients are Fractions (ints when A, B are integers), or residues mod
    ``modulus`` when one is given.
    """
    if n < 1 or n % 2 == 0:
        raise DomainError("even-index division polynomials are unsupported")
    if modulus is None:
        A, B = Fraction(A), Fraction(B)
        if A.denominator == 1 and B.denominator == 1:
            A, B = int(A), int(B)
        half = Fraction(1, 2)

        def norm(f):
            return _ptrim(f)
    else:
        A, B = mod_rational(A, modulus), mod_rational(B, modulus)
        half = pow(2, -1, modulus)

        def norm(f):
            return _ptrim([c % modulus for c in f])

    R = [B, A, 0, 1]
    R2 = norm(_pmul(R, R))
    # psi_m = f_m for odd m, y * f_m for even m
    memo = {
        0: [],
        1: [1],
        2: [2],
        3: norm([-A * A, 12 * B, 6 * A, 0, 3]),
        4: norm([4 * c for c in (-A**3 - 8 * B * B, -4 * A * B, -5 * A * A, 20 * B, 5 * A, 0, 1)]),
    }

    def f(m: int):
        if m in memo:
            return memo[m]
        k = m // 2
        if m % 2:
            a = _pmul(f(k + 2), _pmul(f(k), _pmul(f(k), f(k))))
            b = _pmul(f(k - 1), _pmul(f(k + 1), _pmul(f(k + 1), f(k + 1))))
            if k % 2 == 0:
                a = _pmul(R2, a)
            else:
                b = _pmul(R2, b)
            out = _padd(a, _pneg(b))
        else:
            a = _pmul(f(k + 2), _pmul(f(k - 1), f(k - 1)))
            b = _pmul(f(k - 2), _pmul(f(k + 1), f(k + 1)))
            out = _pmul(f(k), _padd(a, _pneg(b)))
            if modulus is None and isinstance(half, Fraction) and all(isinstance(c, int) for c in out):
                out = [c // 2 for c in out]
            else:
                out = [c * half for c in out]
        memo[m] = norm(out)
        return memo[m]

    return f(n)


# ---------------------------------------------------------------------------
# Polynomials over Q_p and Newton polygons
# ---------------------------------------------------------------------------

@dataclass
class PolyQp:
    """A polynomial over Q_p; coefficients lowest degree first."""

    p: int
    coeffs: list[PadicRational]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1].is_zero:
            raise DomainError("leading coefficient must be nonzero at the stated precision")

    @classmethod
    def from_rationals(cls, coeffs, p: int, prec: int = DEFAULT_PRECISION) -> "PolyQp":
        coeffs = _ptrim([Fraction(c) for c in coeffs])
        if not coeffs:
            raise DomainError("zero polynomial")
        return cls(p, [PadicRational.from_rational(c, p, prec) if c else PadicRational.zero(p, prec + 64)
                       for c in coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def precision(self) -> int:
        return min(c.absprec for c in self.coeffs)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero and i < self.degree:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == self.degree and c.val == 0 and c.unit == 1:
                terms.append(mono)
            else:
                terms.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(reversed(terms))


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]
    segments: tuple[tuple[Fraction, int], ...]  # (slope, horizontal length)

    @property
    def root_valuations(self) -> list[tuple[Fraction, int]]:
        """(valuation, multiplicity) of the roots, smallest valuation first."""
        return sorted((-s, n) for s, n in self.segments)

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.segments)


def _lower_hull(points):
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(f) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(c_i)).

    ``f`` is a PolyQp.  Coefficients that are zero at their stated precision
    are only known to have valuation >= absprec; if such a coefficient could
    still lie below the hull the answer is undetermined and PrecisionError is
    raised.
    """
    known = [(i, c.val) for i, c in enumerate(f.coeffs) if not c.is_zero]
    unknown = [(i, c.absprec) for i, c in enumerate(f.coeffs) if c.is_zero]
    if not known:
        raise DomainError("zero polynomial")
    lo_i = known[0][0]
    if lo_i != 0:
        bound = max(a for i, a in unknown if i < lo_i)
        raise PrecisionError("constant term is zero at working precision", required=bound + 1)
    hull = _lower_hull(known)
    for i, bound in unknown:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= i <= x2:
                height = y1 + Fraction(y2 - y1, x2 - x1) * (i - x1)
                if bound < height:
                    raise PrecisionError(
                        f"coefficient {i} undetermined below the Newton polygon", required=math.ceil(height) + 1
                    )
    segs = tuple((Fraction(y2 - y1, x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:]))
    return NewtonPolygon(tuple(hull), segs)


def _int_poly_np(g: list[int], p: int, N: int, deg: int) -> NewtonPolygon:
    coeffs = [PadicRational.from_int_mod(g[i] if i < len(g) else 0, p, N) for i in range(deg + 1)]
    if coeffs[-1].is_zero:
        raise PrecisionError("leading coefficient vanished at working precision", required=2 * N)
    return newton_polygon(PolyQp(p, coeffs))


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------

def hensel_factor(f, gbar, hbar, p: int, N: int) -> tuple[list[int], list[int]]:
    """Lift f = gbar * hbar (mod p) to f = g * h (mod p^N), g monic.

    f has integer coefficients; hbar may have smaller degree than
    deg f - deg gbar, in which case the extra roots of h have negative
    valuation.  Lifting is one p-adic digit per step.
    """
    m = p**N
    f = zp.reduce(f, m)
    gbar, hbar = zp.reduce(gbar, p), zp.reduce(hbar, p)
    if not gbar or gbar[-1] != 1:
        raise DomainError("gbar must be monic")
    if zp.reduce(zp.sub(f, zp.mul(gbar, hbar, p), p), p):
        raise DomainError("f is not gbar*hbar mod p")
    s, t, one = zp.gcdex(gbar, hbar, p)
    if one != [1]:
        raise DomainError("gbar and hbar are not coprime mod p")
    g, h = list(gbar), list(hbar)
    pk = 1
    for _ in range(1, N):
        pk *= p
        err = zp.sub(f, zp.mul(g, h, m), m)
        if any(c % pk for c in err):
            raise AssertionError("Hensel invariant broken")  # pragma: no cover
        e = zp.reduce([c // pk for c in err], p)
        if not e:
            continue
        dg = zp.divmod_monic(zp.mul(t, e, p), gbar, p)[1]
        dh, r = zp.divmod_monic(zp.sub(e, zp.mul(hbar, dg, p), p), gbar, p)
        if r:
            raise AssertionError("Hensel correction not exact")  # pragma: no cover
        g = zp.add(g, zp.scale(dg, pk, m), m)
        h = zp.add(h, zp.scale(dh, pk, m), m)
    return g, h


# ---------------------------------------------------------------------------
# Factor analysis
# ---------------------------------------------------------------------------

@dataclass
class FactorEntry:
    degree: int
    status: str
    root_valuation: Fraction | None  # None when the roots have several valuations
    ramification: str  # "unramified", "totally-ramified" or "unknown"
    coefficients: list[PadicRational]  # monic in x, lowest degree first
    point_degree: tuple[int, int] | None = None  # (lo, hi); lo == hi when exact
    reason: str = ""

    @property
    def slope(self) -> Fraction | None:
        return None if self.root_valuation is None else -self.root_valuation

    def to_dict(self) -> dict:
        d = {
            "degree": self.degree,
            "status": self.status,
            "root_valuation": None if self.root_valuation is None else str(self.root_valuation),
            "ramification": self.ramification,
            "coefficients": [str(c) for c in self.coefficients],
        }
        if self.point_degree is not None:
            lo, hi = self.point_degree
            d["point_degree"] = lo if lo == hi else {"lo": lo, "hi": hi}
        if self.reason:
            d["reason"] = self.reason
        return d


@dataclass
class FactorReport:
    p: int
    precision: int
    factors: list[FactorEntry] = field(default_factory=list)
    curve: str | None = None

    @property
    def degrees(self) -> list[int]:
        return sorted(f.degree for f in self.factors)

    @property
    def point_interval(self) -> tuple[int, int] | None:
        if not self.factors or any(f.point_degree is None for f in self.factors):
            return None
        return min(f.point_degree[0] for f in self.factors), min(f.point_degree[1] for f in self.factors)

    def to_dict(self) -> dict:
        d = {"p": self.p, "precision": self.precision, "degrees": self.degrees,
             "factors": [f.to_dict() for f in self.factors]}
        if self.curve is not None:
            d["curve"] = self.curve
        iv = self.point_interval
        if iv is not None:
            d["point_degree"] = {"lo": iv[0], "hi": iv[1]}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _Analyzer:
    """Recursive splitter.  A node is an integer polynomial g(z) mod p^N with
    x = p^C z + R, where x is the original variable."""

    def __init__(self, p: int, curve: tuple[Fraction, Fraction] | None):
        self.p = p
        self.curve = curve
        self.leaves: list[FactorEntry] = []

    # -- transforms ------------------------------------------------------

    def _rescale(self, g, N, deg, c):
        """g(p^c y) / content, with the new absolute precision."""
        p = self.p
        shift = max(0, -c * deg)
        scaled, precs = [], []
        for i in range(deg + 1):
            e = c * i + shift
            scaled.append((g[i] if i < len(g) else 0) * p**e)
            precs.append(N + e)
        content = min(vp(a, p) if a % p ** precs[i] else precs[i] for i, a in enumerate(scaled))
        newN = min(precs) - content
        if newN < 2:
            raise PrecisionError("precision exhausted while rescaling", required=2 * N)
        return [a // p**content % p**newN for a in scaled], newN

    def _to_x(self, g, N, C, R) -> list[PadicRational]:
        """Monic x-polynomial with the same roots as g(z), x = p^C z + R."""
        p = self.p
        big = N + 64 + abs(C) * len(g)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PrecisionWarning)
            lin = [PadicRational.from_rational(-Fraction(R) / Fraction(p) ** C, p, big),
                   PadicRational.from_rational(Fraction(1, 1) / Fraction(p) ** C, p, big)]
            acc = [PadicRational.zero(p, big)]
            power = [PadicRational.from_rational(1, p, big)]
            for gi in g:
                term = [PadicRational.from_int_mod(gi, p, N) * c for c in power]
                acc = [(acc[i] if i < len(acc) else PadicRational.zero(p, big))
                       + (term[i] if i < len(term) else PadicRational.zero(p, big))
                       for i in range(max(len(acc), len(term)))]
                nxt = [PadicRational.zero(p, big)] * (len(power) + 1)
                for i, c in enumerate(power):
                    nxt[i] = nxt[i] + c * lin[0]
                    nxt[i + 1] = nxt[i + 1] + c * lin[1]
                power = nxt
            lc = acc[len(g) - 1]
            if lc.is_zero:
                raise PrecisionError("leading coefficient lost", required=2 * N)
            return [c / lc for c in acc[: len(g)]]

    # -- leaves ----------------------------------------------------------

    def _root_valuation(self, coeffs) -> Fraction | None:
        try:
            np_ = newton_polygon(PolyQp(self.p, coeffs))
        except PrecisionError:
            return None
        vals = {v for v, _ in np_.root_valuations}
        return vals.pop() if len(vals) == 1 else None

    def _unramified_point_degree(self, G, N, C, R, m) -> tuple[int, int]:
        """m or 2m: is x^3 + Ax + B a square in Q_p[z]/(G)?"""
        if self.curve is None:
            return (m, 2 * m)
        p = self.p
        A, B = self.curve
        x = [Fraction(R), Fraction(p) ** C]
        rhs = _padd(_pmul(x, _pmul(x, x)), _padd([A * c for c in x], [B]))
        low = min((vp(c, p) for c in rhs if c), default=0)
        k = math.ceil(-low / 2) if low < 0 else 0
        mod = p**N
        rhs_int = [mod_rational(c * Fraction(p) ** (2 * k), mod) for c in rhs]
        alpha = zp.divmod_monic(rhs_int, G, mod)[1]
        if not alpha:
            raise PrecisionError("cannot decide whether y is rational over the factor field", required=2 * N)
        v = min(vp(c, p) for c in alpha if c)
        if v % 2:
            return (2 * m, 2 * m)
        unit = zp.reduce([c // p**v for c in alpha], p)
        phi = zp.reduce(G, p)
        sq = zp.powmod(unit, (p**m - 1) // 2, phi, p) == [1]
        return (m, m) if sq else (2 * m, 2 * m)

    def _leaf_unramified(self, G, N, C, R, resolved):
        m = len(G) - 1
        coeffs = self._to_x(G, N, C, R)
        self.leaves.append(FactorEntry(
            degree=m,
            status=RESOLVED if resolved else CERTIFIED,
            root_valuation=self._root_valuation(coeffs),
            ramification="unramified",
            coefficients=coeffs,
            point_degree=self._unramified_point_degree(G, N, C, R, m),
        ))

    def _leaf_deficient(self, H, N, C, R, resolved):
        """The part whose roots have valuation in (-1, 0) in z."""
        deg = len(H) - 1
        np_ = _int_poly_np(H, self.p, N, deg)
        coeffs = self._to_x(H, N, C, R)
        segs = np_.segments
        if len(segs) == 1 and segs[0][0].denominator == deg:
            self.leaves.append(FactorEntry(
                degree=deg,
                status=RESOLVED if resolved else CERTIFIED,
                root_valuation=self._root_valuation(coeffs),
                ramification="totally-ramified",
                coefficients=coeffs,
                point_degree=(deg, 2 * deg) if self.curve else None,
                reason="" if self.curve is None else "y-degree over a ramified field not decided",
            ))
            return
        lo = min(s.denominator for s, _ in segs)
        hi = 2 * min(n for _, n in segs)
        self.leaves.append(FactorEntry(
            degree=deg,
            status=INCONCLUSIVE,
            root_valuation=self._root_valuation(coeffs),
            ramification="unknown",
            coefficients=coeffs,
            point_degree=(lo, hi) if self.curve else None,
            reason="fractional slopes not separated" if len(segs) > 1 else
                   f"slope denominator {segs[0][0].denominator} below degree {deg}",
        ))

    def _leaf_inconclusive(self, G, N, C, R, phi_deg, e):
        deg = len(G) - 1
        coeffs = self._to_x(G, N, C, R)
        self.leaves.append(FactorEntry(
            degree=deg,
            status=INCONCLUSIVE,
            root_valuation=self._root_valuation(coeffs),
            ramification="unknown",
            coefficients=coeffs,
            point_degree=(phi_deg, 2 * deg) if self.curve else None,
            reason=f"reduces to an irreducible of degree {phi_deg} to the power {e}",
        ))

    # -- recursion -------------------------------------------------------

    def analyze(self, g, N, C=0, R=Fraction(0), rounds=TAYLOR_ROUNDS, resolved=False):
        p = self.p
        g = zp.reduce(g, p**N)
        deg = len(g) - 1
        if deg >= 1 and g[0] == 0:
            # a root within p^N of z = 0, e.g. a rational root hit exactly by a shift;
            # Hensel certifies it once v(g(0)) >= N > 2 v(g'(0))
            v1 = vp(g[1], p) if g[1] else N
            if 2 * v1 >= N:
                raise PrecisionError("root too close to the expansion point", required=2 * N)
            self._leaf_unramified([0, 1], N, C, R, resolved)
            if deg > 1:
                self.analyze(g[1:], N - v1, C, R, rounds, resolved)
            return
        np_ = _int_poly_np(g, p, N, deg)
        c = math.ceil(min(v for v, _ in np_.root_valuations))
        if c:
            g, N = self._rescale(g, N, deg, c)
            C += c
        gbar = zp.reduce(g, p)
        deficiency = deg - (len(gbar) - 1)
        if deficiency == deg:
            self._leaf_deficient(g, N, C, R, resolved)
            return
        lc, facs = zp.factor_mod_p(gbar, p)
        pieces = [(phi, e, _power(phi, e, p)) for phi, e in facs]
        rest = g
        rest_bar = gbar
        split = []
        for idx, (phi, e, piece) in enumerate(pieces):
            last = idx == len(pieces) - 1
            if last and deficiency == 0:
                inv = pow(rest[-1], -1, p**N)
                split.append((phi, e, zp.scale(rest, inv, p**N)))
                rest = []
                break
            cof = zp.divmod_monic(rest_bar, piece, p)[0]
            G, rest = hensel_factor(rest, piece, cof, p, N)
            rest_bar = cof
            split.append((phi, e, G))
        for phi, e, G in split:
            if phi == [0, 1]:
                self.analyze(G, N, C, R, rounds, resolved)
            elif e == 1:
                self._leaf_unramified(G, N, C, R, resolved)
            elif len(phi) == 2 and rounds > 0:
                r0 = -phi[0] % p
                shifted = zp.taylor_shift(G, r0, p**N)
                self.analyze(shifted, N, C, Fraction(R) + Fraction(p) ** C * r0, rounds - 1, True)
            else:
                self._leaf_inconclusive(G, N, C, R, len(phi) - 1, e)
        if deficiency:
            self._leaf_deficient(zp.reduce(rest, p**N), N, C, R, resolved)


def _power(phi, e, p):
    out = [1]
    for _ in range(e):
        out = zp.mul(out, phi, p)
    return out


def _is_squarefree(f_int: list[int], p: int) -> bool:
    """gcd(f, f') = 1 modulo some auxiliary prime l != p proves squarefreeness over Q."""
    lc = f_int[-1]
    ell = max(p, 3) + 1
    tried = 0
    while tried < 8:
        if is_prime(ell) and ell != p and lc % ell:
            tried += 1
            g = zp.gcdex(zp.reduce(f_int, ell), zp.reduce(zp.derivative(f_int), ell), ell)[2]
            if g == [1]:
                return True
        ell += 1
    return False


def _integral_primitive(coeffs, p: int, N: int) -> list[int]:
    coeffs = [Fraction(c) for c in coeffs]
    v = min(vp(c, p) for c in coeffs if c)
    scale_ = Fraction(p) ** (-v)
    return [mod_rational(c * scale_, p**N) for c in coeffs]


def _prepare(f, p: int, prec: int) -> tuple[list[Fraction], int]:
    if isinstance(f, PolyQp):
        v = min(c.val for c in f.coeffs if not c.is_zero)
        N = f.precision - v
        vals = [c.to_fraction_approx() if not c.is_zero else Fraction(0) for c in f.coeffs]
        return vals, N
    return _ptrim([Fraction(c) for c in f]), prec


def qp_factor_degrees(f, p: int | None = None, prec: int = DEFAULT_PRECISION, curve=None) -> FactorReport:
    """Split a squarefree polynomial over Q_p, certifying factor degrees where possible.

    ``f`` is a PolyQp or a list of rational coefficients (lowest first).  With
    ``curve = (A, B)`` the point degree over each x-field is also reported.
    """
    if isinstance(f, PolyQp):
        p = f.p
    if p is None:
        raise DomainError("prime required")
    coeffs, N = _prepare(f, p, prec)
    if len(coeffs) < 2:
        raise DomainError("polynomial must have positive degree")
    if not isinstance(f, PolyQp):
        den = math.lcm(*(c.denominator for c in coeffs))
        exact = [int(c * den) for c in coeffs]
        if not _is_squarefree(exact, p):
            raise DomainError("polynomial is not squarefree")
    g = _integral_primitive(coeffs, p, N)
    if isinstance(curve, Curve):
        curve = (curve.A, curve.B)
    an = _Analyzer(p, None if curve is None else (Fraction(curve[0]), Fraction(curve[1])))
    an.analyze(g, N)
    leaves = sorted(an.leaves, key=lambda e: (e.degree, e.status, str(e.root_valuation)))
    if sum(e.degree for e in leaves) != len(coeffs) - 1:
        raise AssertionError("factor degrees do not sum to the degree")  # pragma: no cover
    return FactorReport(p, N, leaves)


def factor_with_retry(f, p: int, curve=None, prec: int = DEFAULT_PRECISION,
                      max_prec: int = MAX_PRECISION) -> FactorReport:
    """qp_factor_degrees with the working precision doubled on PrecisionError."""
    while True:
        try:
            return qp_factor_degrees(f, p, prec, curve)
        except PrecisionError as exc:
            if prec >= max_prec:
                raise PrecisionError(f"precision {prec} insufficient: {exc}", required=exc.required) from exc
            prec = min(2 * prec, max_prec)


# ---------------------------------------------------------------------------
# Roots in Q_p
# ---------------------------------------------------------------------------

def _zp_unit_roots(g: list[int], p: int, N: int, depth: int = 0) -> list[int]:
    """Unit roots in Z_p of an exact integer polynomial, to precision p^N."""
    out = []
    for r in range(1, p):
        out.extend(_zp_roots_from(g, r, p, N, depth))
    return out


def _zp_roots_from(g, r, p, N, depth):
    if zp.evaluate(g, r, p) % p:
        return []
    d = zp.evaluate(zp.derivative(g), r, p) % p
    if d:
        ctx = get_context(p, 1, N)
        root = hensel_lift_root([ctx(c) for c in g], ctx(r), N, ctx)
        return [int(root)]
    if depth > 4 * N:
        raise PrecisionError("root separation needs more precision", required=2 * N)
    # g(r + p y) / p^v, then roots y in Z_p
    h = _shift_exact(g, r, p)
    v = min(vp(c, p) for c in h if c)
    h = [c // p**v for c in h]
    out = []
    for y0 in range(p):
        for y in _zp_roots_from(h, y0, p, max(N - 1, 1), depth + 1):
            out.append((r + p * y) % p**N)
    return out


def _shift_exact(g, r, p):
    """Coefficients of g(r + p y) over Z."""
    out = [0] * len(g)
    base = [r, p]
    power = [1]
    for c in g:
        for i, a in enumerate(power):
            out[i] += c * a
        power = _pmul(power, base)
    return _ptrim(out)


def padic_roots(f, p: int, N: int = DEFAULT_PRECISION) -> list[PadicRational]:
    """Roots in Q_p of a rational polynomial, each to roughly N significant digits."""
    coeffs = _ptrim([Fraction(c) for c in f])
    if len(coeffs) < 2:
        return []
    roots = []
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots.append(PadicRational.zero(p, N))
        coeffs = coeffs[k:]
    np_ = newton_polygon(PolyQp.from_rationals(coeffs, p, N + 64))
    for lam, _ in np_.root_valuations:
        if lam.denominator != 1:
            continue
        lam = int(lam)
        scaled = [c * Fraction(p) ** (lam * i) for i, c in enumerate(coeffs)]
        v = min(vp(c, p) for c in scaled if c)
        scaled = [c / Fraction(p) ** v for c in scaled]
        den = math.lcm(*(c.denominator for c in scaled))
        ints = [int(c * den) for c in scaled]
        for u in _zp_unit_roots(ints, p, N):
            roots.append(PadicRational(p, lam, u, N))
    return roots


# ---------------------------------------------------------------------------
# Brute-force p-degree
# ---------------------------------------------------------------------------

@dataclass
class BruteForce:
    lo: int
    hi: int
    report: FactorReport

    @property
    def exact(self) -> int | None:
        return self.lo if self.lo == self.hi else None


def _integral_curve(E, p: int) -> tuple[Fraction, Fraction]:
    if not isinstance(E, Curve):
        E = Curve(Fraction(E[0]), Fraction(E[1]))
    E = E.p_minimal(p)
    return E.A, E.B


def dp_bruteforce(E, p: int, max_p: int = DEFAULT_MAX_P, prec: int = DEFAULT_PRECISION) -> BruteForce:
    """Bounds on d_p(E) from the factorization of psi_p over Q_p."""
    if p < 5:
        raise DomainError("p must be >= 5")
    if p > max_p:
        raise BudgetExceeded(f"psi_{p} has degree {(p * p - 1) // 2}; brute force limited to p <= {max_p}")
    A, B = _integral_curve(E, p)
    if vp(4 * A**3 + 27 * B * B, p) > 0 and vp(A, p) > 0:
        raise DomainError("additive reduction unsupported")
    psi = division_polynomial(A, B, p)
    report = factor_with_retry(psi, p, curve=(A, B), prec=prec)
    report.curve = f"{A},{B}"
    lo, hi = report.point_interval
    return BruteForce(lo, hi, report)

"""Exact arithmetic in Z/p^j, Galois rings GR(p^j, d), finite fields and Q_p.

Everything here is exact integer arithmetic.  Galois-ring elements are
coordinate vectors with respect to the power basis of a monic modulus whose
reduction mod p is irreducible; any such modulus gives an isomorphic ring.
"""

from __future__ import annotations

import itertools
import random
import warnings
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from sympy import factorint

from . import _zpoly
from .errors import DomainError, PrecisionError, PrecisionWarning

DEFAULT_PADIC_PRECISION = 12
_MIN_SIGNIFICANT_DIGITS = 3
KRONECKER_MIN_DEGREE = 8  # switch to packed big-integer multiplication from this degree on

# The first twelve primes are a deterministic Miller-Rabin witness set below this bound.
_MR_DETERMINISTIC_BOUND = 318665857834031151167461
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_RANDOM_ROUNDS = 64


# ---------------------------------------------------------------------------
# Integer / rational number theory
# ---------------------------------------------------------------------------

def _miller_rabin_round(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def primality(n: int, seed: int = 0) -> str:
    """Return "prime", "probable prime" or "composite".

    Deterministic below 3.3e24; above that, 64 Miller-Rabin rounds with bases
    drawn from an RNG seeded by ``seed``.
    """
    if n < 2:
        return "composite"
    for q in _MR_WITNESSES:
        if n % q == 0:
            return "prime" if n == q else "composite"
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_BOUND:
        ok = all(_miller_rabin_round(n, a, d, s) for a in _MR_WITNESSES)
        return "prime" if ok else "composite"
    rng = random.Random(seed)
    for _ in range(_MR_RANDOM_ROUNDS):
        if not _miller_rabin_round(n, rng.randrange(2, n - 1), d, s):
            return "composite"
    return "probable prime"


def is_prime(n: int, seed: int = 0) -> bool:
    return primality(n, seed) != "composite"


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def vp(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = _as_fraction(x)
    if x == 0:
        raise DomainError("vp(0) is infinite")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def mod_rational(x, m: int) -> int:
    """Image of a rational with denominator prime to m in Z/m."""
    x = _as_fraction(x)
    try:
        return x.numerator * pow(x.denominator, -1, m) % m
    except ValueError:
        raise DomainError(f"{x} is not integral at the modulus {m}") from None


def ord_mod_p(a: int, p: int) -> int:
    """Multiplicative order of a in (Z/p)^x."""
    a %= p
    if a == 0:
        raise DomainError(f"{p} divides the argument; no multiplicative order")
    order = p - 1
    for q in _prime_factors(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(n)))


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_p(a: int, p: int) -> int:
    """A square root of a modulo the odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise DomainError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _split_rational(x, p: int) -> tuple[int, Fraction]:
    v = vp(x, p)
    return v, _as_fraction(x) / Fraction(p) ** v


def is_square_qp(x, p: int) -> bool:
    """Whether a nonzero element of Q_p (rational or PadicRational) is a square, p odd."""
    if isinstance(x, PadicRational):
        if x.is_zero:
            raise DomainError("is_square_qp(0)")
        if x.prec < 1:
            raise PrecisionError("no significant digits", required=1)
        return x.val % 2 == 0 and legendre(x.unit, p) == 1
    if _as_fraction(x) == 0:
        raise DomainError("is_square_qp(0)")
    v, u = _split_rational(x, p)
    return v % 2 == 0 and legendre(mod_rational(u, p), p) == 1


def is_pth_power_qp(x, p: int) -> bool:
    """Whether x is a p-th power in Q_p: p | v(x) and unit^(p-1) = 1 mod p^2."""
    if isinstance(x, PadicRational):
        if x.is_zero:
            raise DomainError("is_pth_power_qp(0)")
        if x.prec < 2:
            raise PrecisionError("need two significant digits", required=2)
        v, c = x.val, x.unit
    else:
        if _as_fraction(x) == 0:
            raise DomainError("is_pth_power_qp(0)")
        v, u = _split_rational(x, p)
        c = mod_rational(u, p * p)
    return v % p == 0 and pow(c, p - 1, p * p) == 1


# ---------------------------------------------------------------------------
# Galois rings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def default_modulus(p: int, d: int) -> tuple[int, ...]:
    """Least monic irreducible of degree d over F_p, ordered by (c_{d-1}, ..., c_0).

    Returned low-degree first, including the leading 1.
    """
    if d == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=d):
        coeffs = tuple(reversed(tail)) + (1,)
        if coeffs[0] and _zpoly.is_irreducible_mod_p(list(coeffs), p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class LocalContext:
    """The ring GR(p^j, d) = (Z/p^j)[x] / (modulus).

    ``j = 1`` gives the field F_{p^d}; ``d = 1`` gives Z/p^j.
    """

    __slots__ = ("p", "d", "j", "modulus", "q", "_key", "_tail", "_slot")

    def __init__(self, p: int, d: int = 1, j: int = 1, modulus=None):
        if p in (2, 3) or not is_prime(p):
            raise DomainError(f"p must be a prime >= 5, got {p}")
        if d < 1 or j < 1:
            raise DomainError("degree and precision must be >= 1")
        q = p**j
        if modulus is None:
            modulus = default_modulus(p, d)
        modulus = tuple(int(c) % q for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise DomainError(f"modulus must be monic of degree {d}")
        if d > 1 and not _zpoly.is_irreducible_mod_p(list(modulus), p):
            raise DomainError("modulus is not irreducible mod p")
        self.p, self.d, self.j, self.modulus, self.q = p, d, j, modulus, q
        self._key = (p, d, j, modulus)
        # nonzero low coefficients of the modulus, and the byte width of one
        # Kronecker slot (holds any coefficient of a product of reduced polys)
        self._tail = tuple((i, c) for i, c in enumerate(modulus[:-1]) if c)
        self._slot = (2 * (q - 1).bit_length() + d.bit_length() + 8) // 8

    def __eq__(self, other):
        return isinstance(other, LocalContext) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.d == 1:
            return f"Z/{self.p}^{self.j}"
        return f"GR({self.p}^{self.j}, {self.d})"

    @property
    def size(self) -> int:
        return self.q**self.d

    @property
    def residue_size(self) -> int:
        return self.p**self.d

    def unit_group_order(self) -> int:
        return self.p ** ((self.j - 1) * self.d) * (self.p**self.d - 1)

    def with_precision(self, j: int) -> "LocalContext":
        if j == self.j:
            return self
        return get_context(self.p, self.d, j, tuple(c % self.p**j for c in self.modulus))

    def residue_field(self) -> "LocalContext":
        return self.with_precision(1)

    def __call__(self, value) -> "RingElem":
        if isinstance(value, RingElem):
            if (value.ctx.p, value.ctx.d) != (self.p, self.d):
                raise DomainError("incompatible rings")
            return RingElem(self, value.c)
        if isinstance(value, (tuple, list)):
            if len(value) > self.d:
                raise DomainError("too many coordinates")
            return RingElem(self, tuple(value) + (0,) * (self.d - len(value)))
        return RingElem(self, (mod_rational(value, self.q),) + (0,) * (self.d - 1))

    def zero(self) -> "RingElem":
        return RingElem(self, (0,) * self.d)

    def one(self) -> "RingElem":
        return self(1)

    def gen(self) -> "RingElem":
        """Image of x, a root of the modulus."""
        if self.d == 1:
            return self(-self.modulus[0])
        return self((0, 1))

    def elements(self):
        for coords in itertools.product(range(self.q), repeat=self.d):
            yield RingElem(self, coords[::-1])

    def maximal_ideal(self):
        """All elements of p*GR(p^j, d)."""
        step = self.p
        for coords in itertools.product(range(0, self.q, step), repeat=self.d):
            yield RingElem(self, coords[::-1])

    def random(self, rng: random.Random) -> "RingElem":
        return RingElem(self, tuple(rng.randrange(self.q) for _ in range(self.d)))

    def random_unit(self, rng: random.Random) -> "RingElem":
        while True:
            u = self.random(rng)
            if u.is_unit():
                return u


@lru_cache(maxsize=None)
def get_context(p: int, d: int = 1, j: int = 1, modulus=None) -> LocalContext:
    """Cached LocalContext constructor."""
    return LocalContext(p, d, j, modulus)


class RingElem:
    """Immutable element of a Galois ring; ``c`` holds canonical coordinates in [0, p^j)."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: LocalContext, coords):
        q = ctx.q
        self.ctx = ctx
        self.c = tuple(int(a) % q for a in coords)

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ctx is self.ctx or other.ctx == self.ctx:
                return other
            raise DomainError(f"mixing elements of {self.ctx} and {other.ctx}")
        return self.ctx(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RingElem(self.ctx, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return RingElem(self.ctx, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RingElem(self.ctx, [-a for a in self.c])

    def __mul__(self, other):
        o = self._coerce(other)
        ctx = self.ctx
        if ctx.d == 1:
            return RingElem(ctx, (self.c[0] * o.c[0],))
        d, q = ctx.d, ctx.q
        if d < KRONECKER_MIN_DEGREE:
            prod = [0] * (2 * d - 1)
            for i, a in enumerate(self.c):
                if a:
                    for k, b in enumerate(o.c):
                        prod[i + k] += a * b
        else:
            # one big-integer product instead of d^2 small ones
            w = ctx._slot
            x = int.from_bytes(b"".join(a.to_bytes(w, "little") for a in self.c), "little")
            y = int.from_bytes(b"".join(b.to_bytes(w, "little") for b in o.c), "little")
            raw = (x * y).to_bytes(w * (2 * d), "little")
            prod = [int.from_bytes(raw[k * w:(k + 1) * w], "little") for k in range(2 * d - 1)]
        tail = ctx._tail
        for k in range(2 * d - 2, d - 1, -1):
            top = prod[k] % q
            if top:
                base = k - d
                for i, mi in tail:
                    prod[base + i] -= top * mi
        return RingElem(ctx, prod[:d])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.ctx == other.ctx and self.c == other.c
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.ctx(other)
            except DomainError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.c))

    def __repr__(self):
        return f"RingElem({self.ctx!r}, {self})"

    def __str__(self):
        if self.ctx.d == 1:
            return str(self.c[0])
        return "[" + ",".join(map(str, self.c)) + "]"

    def __int__(self):
        if self.ctx.d != 1 or any(self.c[1:]):
            raise TypeError("not an element of Z/p^j")
        return self.c[0]

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_unit(self) -> bool:
        p = self.ctx.p
        return any(a % p for a in self.c)

    def valuation(self) -> int:
        """Largest v <= j with self in p^v GR; j means zero."""
        p, j = self.ctx.p, self.ctx.j
        v = j
        for a in self.c:
            if a:
                k = 0
                while a % p == 0 and k < v:
                    a //= p
                    k += 1
                v = min(v, k)
        return v

    def unit_part(self) -> "RingElem":
        """self / p^v as an element of GR(p^(j-v), d)."""
        v = self.valuation()
        if v == self.ctx.j:
            raise DomainError("zero has no unit part")
        ctx = self.ctx.with_precision(self.ctx.j - v)
        return RingElem(ctx, [a // self.ctx.p**v for a in self.c])

    def reduce_to(self, i: int) -> "RingElem":
        if i > self.ctx.j:
            raise DomainError("cannot reduce to a higher precision")
        return RingElem(self.ctx.with_precision(i), self.c)

    def embed(self, ctx: LocalContext) -> "RingElem":
        """Same integer coordinates viewed in another precision (a set-theoretic section)."""
        return RingElem(ctx, self.c)

    def residue(self) -> "RingElem":
        return self.reduce_to(1)

    def inverse(self) -> "RingElem":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit in {self.ctx}")
        ctx = self.ctx
        k = ctx.residue_field()
        if ctx.d == 1:
            x = ctx(pow(self.c[0] % ctx.p, -1, ctx.p))
        else:
            s_, _, g = _zpoly.gcdex(list(self.c), list(k.modulus), ctx.p)
            if g != [1]:
                raise AssertionError("modulus not irreducible")  # pragma: no cover
            x = ctx(s_)
        prec = 1
        two = ctx(2)
        while prec < ctx.j:
            x = x * (two - self * x)
            prec *= 2
        return x

    def is_square(self) -> bool:
        """Square test for units (and for all elements of a field)."""
        if self.is_zero():
            return True
        if not self.is_unit():
            raise DomainError("square test is only implemented for units")
        r = self.residue()
        return r ** ((r.ctx.size - 1) // 2) == 1

    def sqrt(self) -> "RingElem":
        """A square root of a unit (or of any square in a field)."""
        if self.is_zero():
            return self
        if not self.is_square():
            raise DomainError(f"{self} is not a square")
        root = _field_sqrt(self.residue())
        if self.ctx.j == 1:
            return root
        return hensel_lift_root([-self, 0, 1], root, self.ctx.j, ctx=self.ctx)


def _field_sqrt(a: RingElem) -> RingElem:
    """Tonelli-Shanks in F_{p^d}."""
    k = a.ctx
    n = k.size
    q, s = n - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    rng = random.Random(0)
    while True:
        z = k.random(rng)
        if not z.is_zero() and z ** ((n - 1) // 2) != 1:
            break
    m, c, t, r = s, z**q, a**q, a ** ((q + 1) // 2)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (m - i - 1))
        m, c = i, b * b
        t, r = t * c, r * b
    return r


def poly_eval(coeffs, x: RingElem) -> RingElem:
    acc = x.ctx.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def hensel_lift_root(f, r0: RingElem, j: int, ctx: LocalContext | None = None) -> RingElem:
    """Lift a simple root r0 of f mod p to the unique root of f in GR(p^j, d) congruent to it.

    ``f`` is a coefficient list (lowest degree first) of ints, rationals or ring
    elements.  r0 may be given at any precision; only its residue matters for
    uniqueness, but a more precise r0 converges faster.
    """
    if ctx is None:
        ctx = r0.ctx.with_precision(j)
    elif ctx.j != j:
        ctx = ctx.with_precision(j)
    coeffs = [ctx(c.c) if isinstance(c, RingElem) else ctx(c) for c in f]
    deriv = [coeffs[i] * i for i in range(1, len(coeffs))]
    r = r0.embed(ctx)
    if not poly_eval(coeffs, r).reduce_to(1).is_zero():
        raise DomainError("r0 is not a root of f modulo p")
    if not poly_eval(deriv, r).is_unit():
        raise DomainError("non-simple root, lift not guaranteed")
    for _ in range(j.bit_length() + 2):
        fr = poly_eval(coeffs, r)
        if fr.is_zero():
            return r
        r = r - fr / poly_eval(deriv, r)
    raise AssertionError("Newton iteration failed to converge")  # pragma: no cover


# ---------------------------------------------------------------------------
# Q_p at finite precision
# ---------------------------------------------------------------------------

class PadicRational:
    """An element p^val * unit of Q_p known to ``prec`` significant digits.

    Zero is represented with ``is_zero`` set and ``val`` holding the absolute
    precision: the value is O(p^val).
    """

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val: int, unit: int, prec: int):
        if prec <= 0 or unit % p == 0:
            self.p, self.val, self.unit, self.prec = p, val + max(prec, 0), 0, 0
            return
        self.p, self.val, self.unit, self.prec = p, val, unit % p**prec, prec

    @classmethod
    def from_rational(cls, x, p: int, prec: int = DEFAULT_PADIC_PRECISION) -> "PadicRational":
        x = _as_fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        v, u = _split_rational(x, p)
        return cls(p, v, mod_rational(u, p**prec), prec)

    @classmethod
    def from_int_mod(cls, n: int, p: int, absprec: int) -> "PadicRational":
        """An integer known modulo p^absprec."""
        n %= p**absprec
        if n == 0:
            return cls.zero(p, absprec)
        v = vp(n, p)
        return cls(p, v, n // p**v, absprec - v)

    @classmethod
    def zero(cls, p: int, absprec: int) -> "PadicRational":
        return cls(p, absprec, 0, 0)

    @property
    def is_zero(self) -> bool:
        return self.prec == 0

    @property
    def absprec(self) -> int:
        return self.val + self.prec

    def _coerce(self, other) -> "PadicRational":
        if isinstance(other, PadicRational):
            if other.p != self.p:
                raise DomainError("mixing different primes")
            return other
        return PadicRational.from_rational(other, self.p, max(self.prec, DEFAULT_PADIC_PRECISION) + 8)

    def __neg__(self):
        return PadicRational(self.p, self.val, -self.unit, self.prec)

    def __add__(self, other):
        o = self._coerce(other)
        p = self.p
        absprec = min(self.absprec, o.absprec)
        if self.is_zero and o.is_zero:
            return PadicRational.zero(p, absprec)
        if self.is_zero or o.is_zero:
            x = o if self.is_zero else self
            return PadicRational(p, x.val, x.unit, absprec - x.val)
        base = min(self.val, o.val)
        s = self.unit * p ** (self.val - base) + o.unit * p ** (o.val - base)
        s %= p ** (absprec - base)
        if s == 0:
            return PadicRational.zero(p, absprec)
        k = vp(s, p)
        result = PadicRational(p, base + k, s // p**k, absprec - base - k)
        expected = min(self.prec, o.prec)
        if result.prec < _MIN_SIGNIFICANT_DIGITS <= expected:
            warnings.warn(
                f"p-adic cancellation left {result.prec} significant digits", PrecisionWarning, stacklevel=2
            )
        return result

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.is_zero or o.is_zero:
            nz = [x for x in (self, o) if not x.is_zero]
            extra = nz[0].val if nz else 0
            zero_part = self if self.is_zero else o
            return PadicRational.zero(self.p, zero_part.val + extra)
        prec = min(self.prec, o.prec)
        return PadicRational(self.p, self.val + o.val, self.unit * o.unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("p-adic division by an indistinguishable-from-zero value")
        if self.is_zero:
            return PadicRational.zero(self.p, self.val - o.val)
        prec = min(self.prec, o.prec)
        m = self.p**prec
        return PadicRational(self.p, self.val - o.val, self.unit * pow(o.unit, -1, m), prec)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return (1 / self) ** -e
        if self.is_zero:
            return PadicRational.zero(self.p, self.val * e if e else 0) if e else PadicRational.from_rational(1, self.p, self.prec)
        return PadicRational(self.p, self.val * e, pow(self.unit, e, self.p**self.prec), self.prec)

    def __eq__(self, other):
        if not isinstance(other, (PadicRational, int, Fraction)):
            return NotImplemented
        diff = self - self._coerce(other)
        return diff.is_zero

    def __hash__(self):
        return hash((self.p, self.val, self.unit, self.prec))

    def digits(self) -> list[tuple[int, int]]:
        """Nonzero p-adic digits as (exponent, digit), lowest exponent first."""
        out = []
        u, e = self.unit, self.val
        for _ in range(self.prec):
            u, dgt = divmod(u, self.p)
            if dgt:
                out.append((e, dgt))
            e += 1
        return out

    def digit_vector(self, lo: int, hi: int) -> list[int]:
        """Digits at exponents lo..hi-1 (zeros where none)."""
        got = dict(self.digits())
        if hi > self.absprec:
            raise PrecisionError(f"digit p^{hi - 1} beyond known precision", required=hi - self.val)
        return [got.get(e, 0) for e in range(lo, hi)]

    def to_fraction_approx(self) -> Fraction:
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def __str__(self):
        p = self.p
        terms = []
        for e, dgt in self.digits():
            if e == 0:
                terms.append(str(dgt))
            else:
                power = f"{p}" if e == 1 else f"{p}^{e}"
                terms.append(power if dgt == 1 else f"{dgt}*{power}")
        tail = f"O({p}^{self.absprec})"
        return " + ".join(terms + [tail])

    def __repr__(self):
        return f"PadicRational({self})"

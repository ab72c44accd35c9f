"""Dense integer polynomials reduced modulo an integer.

Polynomials are lists of ints, lowest degree first.  Helpers here are the
shared plumbing for Hensel lifting and residue-field factorization; the
mod-p factorization itself is delegated to sympy's galoistools.
"""

from __future__ import annotations

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_irreducible_p


def trim(f: list[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def reduce(f, m: int) -> list[int]:
    return trim([c % m for c in f])


def degree(f: list[int]) -> int:
    return len(trim(f)) - 1


def add(f, g, m: int) -> list[int]:
    n = max(len(f), len(g))
    return reduce([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], m)


def sub(f, g, m: int) -> list[int]:
    n = max(len(f), len(g))
    return reduce([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], m)


def scale(f, c: int, m: int) -> list[int]:
    return reduce([c * a for a in f], m)


def mul(f, g, m: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for k, b in enumerate(g):
                out[i + k] += a * b
    return reduce(out, m)


def divmod_monic(f, g, m: int) -> tuple[list[int], list[int]]:
    """Division by a polynomial whose leading coefficient is a unit mod m."""
    g = reduce(g, m)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, m)
    r = reduce(f, m)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], r
    q = [0] * (len(r) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] * inv % m
        if c:
            q[k - dg] = c
            for i, b in enumerate(g):
                r[k - dg + i] -= c * b
        r[k] = 0
    return trim(q), reduce(r, m)


def gcdex(f, g, p: int) -> tuple[list[int], list[int], list[int]]:
    """Extended Euclid over F_p: returns (s, t, h) with s*f + t*g = h = monic gcd."""
    r0, r1 = reduce(f, p), reduce(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_monic(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return [], [], []
    inv = pow(r0[-1], -1, p)
    return scale(s0, inv, p), scale(t0, inv, p), scale(r0, inv, p)


def evaluate(f, x, m: int | None = None):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
        if m is not None:
            acc %= m
    return acc


def derivative(f) -> list[int]:
    return [i * c for i, c in enumerate(f)][1:]


def taylor_shift(f, r: int, m: int) -> list[int]:
    """Coefficients of f(x + r)."""
    out = list(f)
    n = len(out)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            out[k] = (out[k] + r * out[k + 1]) % m
    return reduce(out, m)


def powmod(base, e: int, g, p: int) -> list[int]:
    result = [1]
    base = divmod_monic(base, g, p)[1]
    while e:
        if e & 1:
            result = divmod_monic(mul(result, base, p), g, p)[1]
        base = divmod_monic(mul(base, base, p), g, p)[1]
        e >>= 1
    return result


def _to_gf(f) -> list:
    return [ZZ(c) for c in reversed(f)]


def _from_gf(f) -> list[int]:
    return trim([int(c) for c in reversed(f)])


def factor_mod_p(f, p: int) -> tuple[int, list[tuple[list[int], int]]]:
    """Factor f over F_p into (leading coeff, [(monic irreducible, multiplicity), ...])."""
    f = reduce(f, p)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lc, facs = gf_factor(_to_gf(f), p, ZZ)
    out = [(_from_gf(g), e) for g, e in facs]
    out.sort(key=lambda t: (len(t[0]), t[0], t[1]))
    return int(lc), out


def is_irreducible_mod_p(f, p: int) -> bool:
    f = reduce(f, p)
    if len(f) < 2:
        return False
    return bool(gf_irreducible_p(_to_gf(f), p, ZZ))

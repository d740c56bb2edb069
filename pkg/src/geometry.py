# src/geometry.py
"""
Finite fields GF(p^e) and the Desarguesian planes PG(2, q) built from them.

Field elements are encoded as integers 0..q-1 whose base-p digits are the
coefficients of the residue polynomial (lowest degree first). The reducing
polynomial for each supported q is fixed below, so point and line numbering
is stable across runs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from .errors import NotPrime, NotSquareOrder
from .incidence import IncidenceStructure, ProjectivePlane, verify_plane

# Monic irreducible polynomials, coefficients from x^0 up to x^(e-1); the
# leading 1 is implicit. GF(16) uses x^4 + x + 1.
IRREDUCIBLE: Dict[int, Tuple[int, ...]] = {
    4: (1, 1),            # x^2 + x + 1
    8: (1, 1, 0),         # x^3 + x + 1
    9: (2, 1),            # x^2 + x + 2
    16: (1, 1, 0, 0),     # x^4 + x + 1
    25: (2, 1),           # x^2 + x + 2
    27: (1, 2, 0),        # x^3 + 2x + 1
    32: (1, 0, 1, 0, 0),  # x^5 + x^2 + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> Tuple[int, int]:
    """(p, e) with q = p**e, or NotPrime when q is not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, m = 0, q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise NotPrime(f"{q} is not a prime power")
    return p, e


def square_root_order(n: int) -> int:
    r = int(round(n ** 0.5))
    if r * r != n:
        raise NotSquareOrder(f"plane order {n} is not a perfect square")
    return r


@dataclass(frozen=True)
class GF:
    q: int
    p: int
    e: int
    add: Tuple[Tuple[int, ...], ...]
    mul: Tuple[Tuple[int, ...], ...]

    def neg(self, a: int) -> int:
        return self.add[a].index(0)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.mul[a].index(1)

    def pow(self, a: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = self.mul[out][a]
        return out

    def dot(self, u: Tuple[int, int, int], w: Tuple[int, int, int]) -> int:
        m, a = self.mul, self.add
        return a[a[m[u[0]][w[0]]][m[u[1]][w[1]]]][m[u[2]][w[2]]]


def _digits(x: int, p: int, e: int) -> List[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds: List[int], p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    p, e = prime_power(q)
    if e > 1 and q not in IRREDUCIBLE:
        raise ValueError(f"no reducing polynomial recorded for GF({q})")
    low = IRREDUCIBLE.get(q, ())

    def mul(a: int, b: int) -> int:
        da, db = _digits(a, p, e), _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # x^e = -(low polynomial)
        for deg in range(2 * e - 2, e - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for j, lc in enumerate(low):
                    prod[deg - e + j] = (prod[deg - e + j] - c * lc) % p
        return _undigits(prod[:e], p)

    def add(a: int, b: int) -> int:
        da, db = _digits(a, p, e), _digits(b, p, e)
        return _undigits([(x + y) % p for x, y in zip(da, db)], p)

    add_t = tuple(tuple(add(a, b) for b in range(q)) for a in range(q))
    mul_t = tuple(tuple(mul(a, b) for b in range(q)) for a in range(q))
    return GF(q, p, e, add_t, mul_t)


def projective_points(q: int) -> List[Tuple[int, int, int]]:
    """Normalized representatives: first nonzero coordinate equal to 1."""
    pts: List[Tuple[int, int, int]] = [(0, 0, 1)]
    pts.extend((0, 1, c) for c in range(q))
    pts.extend((1, b, c) for b in range(q) for c in range(q))
    return pts


@lru_cache(maxsize=None)
def pg2(q: int) -> ProjectivePlane:
    """PG(2, q) with points and lines both numbered by projective_points(q)."""
    f = field(q)
    pts = projective_points(q)
    lines = []
    for coeffs in pts:
        lines.append([i for i, x in enumerate(pts) if f.dot(coeffs, x) == 0])
    s = IncidenceStructure.from_blocks(len(pts), lines)
    logging.debug("built PG(2,%d): %d points", q, len(pts))
    return verify_plane(s, q, name=f"PG(2,{q})")


def hermitian_points(q2: int) -> List[int]:
    """
    Indices of the absolute points x0^(q+1) + x1^(q+1) + x2^(q+1) = 0 of the
    standard Hermitian polarity of PG(2, q^2).
    """
    q = square_root_order(q2)
    f = field(q2)
    out = []
    for i, x in enumerate(projective_points(q2)):
        acc = 0
        for c in x:
            acc = f.add[acc][f.pow(c, q + 1)]
        if acc == 0:
            out.append(i)
    return out

"""Exact integer arithmetic primitives: sieves, factorization, multiplicative
functions, Kronecker symbol, multiplicative order.

Everything here is pure and reentrant; sieve tables are immutable after
construction and can be shared across workers.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np


class ResourceCapError(RuntimeError):
    """An operation would exceed its configured resource cap."""


# Deterministic Miller-Rabin witness set, valid far beyond 2^64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit-scale inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# factored rationals


@dataclass(frozen=True)
class FactoredRational:
    """A nonzero rational as sign * prod p^e on an exponent map.

    ``factors`` is a tuple of (prime, exponent) pairs sorted by prime with
    nonzero exponents; the empty tuple with sign +1 is the number 1.  All
    arithmetic stays on the exponent maps, so huge powers such as
    prod alpha_i^(e_i*L/m_i) never materialize as integers.
    """

    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        prev = 1
        for p, e in self.factors:
            if p <= prev or e == 0:  # enforces p >= 2, ascending, no repeats
                raise ValueError("factor map needs ascending primes, nonzero exponents")
            prev = p

    @staticmethod
    def one() -> "FactoredRational":
        return FactoredRational(1, ())

    @staticmethod
    def from_map(sign: int, exps: dict[int, int]) -> "FactoredRational":
        items = tuple(sorted((p, e) for p, e in exps.items() if e != 0))
        return FactoredRational(sign, items)

    @staticmethod
    def from_int(n: int, table: Optional["SpfTable"] = None) -> "FactoredRational":
        return factorize(n, table)

    @staticmethod
    def from_fraction(q: Fraction | int) -> "FactoredRational":
        q = Fraction(q)
        if q == 0:
            raise ValueError("zero has no factored representation")
        num = factorize(q.numerator)
        den = factorize(q.denominator)
        return num.mul(den.pow_(-1))

    # -- queries ------------------------------------------------------------

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def exponents(self) -> dict[int, int]:
        return dict(self.factors)

    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def is_one(self) -> bool:
        return self.sign == 1 and not self.factors

    def value(self) -> Fraction:
        v = Fraction(self.sign)
        for p, e in self.factors:
            v *= Fraction(p) ** e
        return v

    def numerator(self) -> int:
        n = 1
        for p, e in self.factors:
            if e > 0:
                n *= p**e
        return n

    def denominator(self) -> int:
        n = 1
        for p, e in self.factors:
            if e < 0:
                n *= p**-e
        return n

    def divisible(self, k: int) -> bool:
        """True when every exponent is a multiple of k."""
        return all(e % k == 0 for _, e in self.factors)

    # -- arithmetic ---------------------------------------------------------

    def mul(self, other: "FactoredRational") -> "FactoredRational":
        exps = dict(self.factors)
        for p, e in other.factors:
            exps[p] = exps.get(p, 0) + e
        return FactoredRational.from_map(self.sign * other.sign, exps)

    def pow_(self, k: int) -> "FactoredRational":
        if k == 0:
            return FactoredRational.one()
        sign = self.sign if k % 2 else 1
        return FactoredRational(sign, tuple((p, e * k) for p, e in self.factors))

    def abs_(self) -> "FactoredRational":
        return FactoredRational(1, self.factors)

    def root(self, k: int) -> "FactoredRational":
        """Exact k-th root; exponents must be divisible by k (sign needs odd k)."""
        if not self.divisible(k):
            raise ValueError("exponents not divisible, no exact root")
        if self.sign < 0 and k % 2 == 0:
            raise ValueError("even root of a negative rational")
        return FactoredRational(self.sign, tuple((p, e // k) for p, e in self.factors))

    def __mul__(self, other):
        return self.mul(other)


# ---------------------------------------------------------------------------
# sieves


def _simple_sieve_flags(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def prime_list(limit: int) -> np.ndarray:
    """All primes <= limit via a plain sieve (int64 array)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    return np.nonzero(_simple_sieve_flags(limit))[0].astype(np.int64)


def segmented_primes(lo: int, hi: int, block: int = 1 << 22) -> np.ndarray:
    """Primes in [lo, hi), ascending; memory bounded by the block size."""
    if not (2 <= lo < hi):
        raise ValueError("need 2 <= lo < hi")
    base = prime_list(math.isqrt(hi - 1))
    out = []
    start = lo
    while start < hi:
        stop = min(start + block, hi)
        flags = np.ones(stop - start, dtype=bool)
        if start <= 1:
            flags[: max(0, 2 - start)] = False
        for p in base:
            p = int(p)
            first = max(p * p, ((start + p - 1) // p) * p)
            if first >= stop:
                continue
            flags[first - start :: p] = False
        seg = np.nonzero(flags)[0] + start
        # base primes falling inside the window are kept by the p*p start rule
        out.append(seg)
        start = stop
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


class SpfTable:
    """Smallest-prime-factor table for [2, limit]; immutable once built.

    Factoring is a chain of table lookups, O(log k) per value, which keeps
    the per-prime cost of factoring p-1 negligible inside scans.
    """

    def __init__(self, limit: int):
        if limit < 2:
            raise ValueError("limit must be >= 2")
        if limit >= 2**31:
            raise ResourceCapError("SpfTable limited to 32-bit entries")
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.int32)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                seg = spf[p * p :: p]
                seg[seg == 0] = p
        rest = np.nonzero(spf[2:] == 0)[0] + 2
        spf[rest] = rest
        # array('i') hands back plain ints, which is faster in the hot loop
        buf = array("i")
        buf.frombytes(spf.tobytes())
        self.spf = buf

    def smallest_factor(self, k: int) -> int:
        return self.spf[k]

    def factor_pairs(self, k: int) -> list[tuple[int, int]]:
        """Ascending (prime, exponent) pairs of k (1 <= k <= limit)."""
        if not (1 <= k <= self.limit):
            raise ValueError("value outside table range")
        spf = self.spf
        out = []
        while k > 1:
            p = spf[k]
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            out.append((p, e))
        return out


@lru_cache(maxsize=2)
def shared_spf_table(limit: int) -> SpfTable:
    """Process-wide SpfTable cache (tables are immutable, safe to share)."""
    return SpfTable(limit)


def phi_sieve(limit: int) -> np.ndarray:
    """Euler phi for 0..limit as an int64 array (phi[0] = 0)."""
    phi = np.arange(limit + 1, dtype=np.int64)
    phi[0] = 0
    for p in prime_list(limit):
        phi[p::p] -= phi[p::p] // int(p)
    return phi


# ---------------------------------------------------------------------------
# multiplicative functions


def factorize(n: int, table: Optional[SpfTable] = None) -> FactoredRational:
    """Factor a nonzero integer into sign and prime exponent map."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    exps: dict[int, int] = {}
    if table is not None and n <= table.limit:
        if n > 1:
            for p, e in table.factor_pairs(n):
                exps[p] = e
    else:
        for p in (2, 3):
            while n % p == 0:
                exps[p] = exps.get(p, 0) + 1
                n //= p
        f = 5
        while f * f <= n:
            for p in (f, f + 2):
                while n % p == 0:
                    exps[p] = exps.get(p, 0) + 1
                    n //= p
            f += 6
        if n > 1:
            exps[n] = exps.get(n, 0) + 1
    return FactoredRational.from_map(sign, exps)


def moebius(n: int, table: Optional[SpfTable] = None) -> int:
    """Moebius function: 0 unless n is squarefree, else (-1)^(#prime factors)."""
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    if n == 1:
        return 1
    fr = factorize(n, table)
    if any(e > 1 for _, e in fr.factors):
        return 0
    return -1 if len(fr.factors) % 2 else 1


def euler_phi(n: int, table: Optional[SpfTable] = None) -> int:
    """Euler totient |(Z/n)^x|."""
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    out = 1
    for p, e in factorize(n, table).factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) with the standard conventions for 2, -1, 0."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def order_from_pairs(a: int, p: int, pairs: Iterable[tuple[int, int]]) -> int:
    """Multiplicative order of a mod p given the factorization of p-1.

    Starts at p-1 and strips prime factors while the power stays 1.
    """
    o = p - 1
    for q, e in pairs:
        for _ in range(e):
            if pow(a, o // q, p) == 1:
                o //= q
            else:
                break
    return o


def multiplicative_order(
    a: int, p: int, factored_pm1: Optional[FactoredRational] = None
) -> int:
    """Least k >= 1 with a^k = 1 mod p (p prime, p must not divide a)."""
    if a % p == 0:
        raise ValueError("p divides a, order undefined")
    if factored_pm1 is None:
        factored_pm1 = factorize(p - 1)
    return order_from_pairs(a % p, p, factored_pm1.factors)


# ---------------------------------------------------------------------------
# congruence plumbing


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> Optional[tuple[int, int]]:
    """Merge c = r1 (mod m1) with c = r2 (mod m2); None when inconsistent."""
    g = math.gcd(m1, m2)
    if (r2 - r1) % g != 0:
        return None
    l = m1 // g * m2
    if m1 == 1:
        return r2 % m2, m2
    step = m2 // g
    k = ((r2 - r1) // g * pow(m1 // g, -1, step)) % step if step > 1 else 0
    return (r1 + m1 * k) % l, l


def crt_merge(pairs: Iterable[tuple[int, int]]) -> Optional[tuple[int, int]]:
    """Merge (residue, modulus) congruences; None when inconsistent."""
    r, m = 0, 1
    for r2, m2 in pairs:
        merged = crt_pair(r, m, r2 % m2, m2)
        if merged is None:
            return None
        r, m = merged
    return r, m

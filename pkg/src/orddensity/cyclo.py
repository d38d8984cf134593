"""Membership of rational radicals in cyclotomic fields Q(zeta_M) and an
explicit normal form for abelian radicals.

The classification backbone: any solution of x^(2^e) = q (q rational) inside
an abelian number field has the shape (root of unity) * t * sqrt(d) with t a
positive rational and d a squarefree positive integer.  That normal form is
adopted here as an axiom of the oracle and is guarded by empirical splitting
property tests elsewhere; given it, membership questions reduce to quadratic
characters and root-of-unity bookkeeping, both exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .arith import FactoredRational, ResourceCapError, kronecker

# Character loops run over (Z/L)^x; L stays desk-scale for all supported uses.
_CHAR_LOOP_CAP = 10**8


def _as_factored(q) -> FactoredRational:
    if isinstance(q, FactoredRational):
        return q
    return FactoredRational.from_fraction(q)


def quadratic_discriminant(d: int) -> int:
    """Field discriminant of Q(sqrt(d)) for squarefree d (1 for d = 1)."""
    if d == 0:
        raise ValueError("d must be a nonzero squarefree integer")
    return d if d % 4 == 1 else 4 * d


@dataclass(frozen=True)
class QuadraticConductor:
    """Conductor of Q(sqrt(d)): sqrt(d) lies in Q(zeta_M) iff conductor | M."""

    d: int
    conductor: int

    @staticmethod
    def from_radicand(d: int) -> "QuadraticConductor":
        return QuadraticConductor(d, abs(quadratic_discriminant(d)))


def conductor(d: int) -> int:
    return QuadraticConductor.from_radicand(d).conductor


def signed_squarefree_part(
    q: FactoredRational,
) -> tuple[int, int, FactoredRational]:
    """Write q = sign * s^2 * d with d squarefree positive, s positive rational."""
    q = _as_factored(q)
    d = 1
    s_exps: dict[int, int] = {}
    for p, e in q.factors:
        if e % 2:
            d *= p
            e -= 1
        if e:
            s_exps[p] = e // 2
    return q.sign, d, FactoredRational.from_map(1, s_exps)


def squarefree_part(q: FactoredRational) -> int:
    return signed_squarefree_part(q)[1]


def sqrt_in_cyclotomic(d: int, M: int) -> bool:
    """True iff sqrt(d) lies in Q(zeta_M), for squarefree d (negative allowed).

    Decided by the conductor criterion: conductor(Q(sqrt(d))) | M.
    """
    if M < 1:
        raise ValueError("M must be positive")
    return M % conductor(d) == 0


def _zeta_sqrt_in_cyclotomic(zorder: int, zexp: int, d: int, M: int) -> bool:
    """Is zeta_zorder^zexp * sqrt(d) in Q(zeta_M)?

    Galois test: the value lies in Q(zeta_L) with L = lcm(zorder, cond(d), M),
    and membership in Q(zeta_M) means every sigma_c with c = 1 (mod M) fixes
    it, i.e. zeta^(zexp*(c-1)) * chi_d(c) = 1.
    """
    disc = quadratic_discriminant(d)
    L = math.lcm(zorder, abs(disc), M)
    if L > _CHAR_LOOP_CAP:
        raise ResourceCapError(f"character loop modulus {L} too large")
    for c in range(1, L + 1, M):
        if math.gcd(c, L) != 1:
            continue
        z = zexp * (c - 1) % zorder
        chi = kronecker(disc, c)
        if not ((z == 0 and chi == 1) or (2 * z == zorder and chi == -1)):
            return False
    return True


def is_power_in_cyclotomic(q, n: int, M: int) -> bool:
    """Decide whether the rational q is an n-th power in Q(zeta_M).

    Split n = 2^e * u with u odd.  The odd part forces a rational u-th root
    (exponent vector divisible by u, sign preserved).  For the 2-part the
    normal form requires |q| = t^(2^e) * d^(2^(e-1)) with d squarefree; then
    q is a 2^e-th power iff some zeta_(2^(e+1))^j * sqrt(d) with (-1)^j equal
    to the sign of q lies in Q(zeta_M).
    """
    if n < 1 or M < 1:
        raise ValueError("need n >= 1 and M >= 1")
    q = _as_factored(q)
    u = n
    e = 0
    while u % 2 == 0:
        u //= 2
        e += 1
    if not q.divisible(u):
        return False
    q0 = q.root(u)
    if e == 0:
        return True
    half = 1 << (e - 1)
    if not q0.divisible(half):
        return False
    h = q0.abs_().root(half)
    _, d, _ = signed_squarefree_part(h)
    zorder = 1 << (e + 1)
    start = 0 if q0.sign == 1 else 1
    for j in range(start, zorder, 2):
        if _zeta_sqrt_in_cyclotomic(zorder, j, d, M):
            return True
    return False


# ---------------------------------------------------------------------------
# explicit radicals


@dataclass(frozen=True)
class RadicalValue:
    """The exact value zeta_(zeta_order)^(zeta_exp) * t * sqrt(d).

    Normal form: t positive rational, d squarefree >= 1, gcd(zeta_exp,
    zeta_order) reduced away.  With those constraints the representation is
    unique, so equality of values is equality of fields.
    """

    zeta_order: int
    zeta_exp: int
    t: FactoredRational
    d: int

    @staticmethod
    def make(zorder: int, zexp: int, t: FactoredRational, d: int) -> "RadicalValue":
        if zorder < 1 or d < 1 or t.sign != 1:
            raise ValueError("need positive zeta order, t > 0 and d >= 1")
        zexp %= zorder
        g = math.gcd(zexp, zorder)  # gcd(0, n) = n collapses trivial zeta
        return RadicalValue(zorder // g, zexp // g, t, d)

    def is_rational(self) -> bool:
        return self.zeta_order == 1 and self.d == 1

    def galois_level(self, M: int) -> int:
        """Cyclotomic level whose Galois action on the value is transparent."""
        return math.lcm(self.zeta_order, conductor(self.d), M)


def radical_product(
    alphas: Sequence[FactoredRational],
    m: Sequence[int],
    e: Sequence[int],
) -> Optional[RadicalValue]:
    """The exact value prod_i (alpha_i^(1/m_i))^(e_i), when it is abelian.

    Principal roots: alpha^(1/m) is the positive real root for alpha > 0 and
    |alpha|^(1/m) * zeta_(2m) for alpha < 0.  The product collapses to the
    normal form zeta * t * sqrt(d) exactly when its positive-real part P
    satisfies P^L in t^L * d^(L/2) form; otherwise the value generates a
    radical of degree > 2 over the roots-of-unity field and None is returned.
    """
    if not (len(alphas) == len(m) == len(e)):
        raise ValueError("alphas, m, e must have equal length")
    if any(not (0 <= ei < mi) for ei, mi in zip(e, m)):
        raise ValueError("exponents must satisfy 0 <= e_i < m_i")
    L = math.lcm(*m)
    s = 0
    exps: dict[int, int] = {}
    for ai, mi, ei in zip(alphas, m, e):
        if ei == 0:
            continue
        w = ei * (L // mi)
        if ai.sign < 0:
            s += w
        for p, pe in ai.factors:
            exps[p] = exps.get(p, 0) + pe * w
    s %= 2 * L
    half = L if L % 2 else L // 2
    if any(pe % half for pe in exps.values()):
        return None
    # |product|^(2/L) = t^2 * d with d the squarefree part
    d = 1
    t_exps: dict[int, int] = {}
    for p, pe in exps.items():
        he = pe // half  # exponent in h = |product|^(1/half); h = t^2 d for even L
        if L % 2:
            if he:
                t_exps[p] = he
            continue
        if he % 2:
            d *= p
            he -= 1
        if he:
            t_exps[p] = he // 2
    t = FactoredRational.from_map(1, t_exps)
    if L % 2:
        return RadicalValue.make(2 * L, s, t, 1)
    return RadicalValue.make(2 * L, s, t, d)


def fixed_by(c: int, v: RadicalValue, M: int) -> bool:
    """Does sigma_c (zeta -> zeta^c on Q(zeta_L), L = v.galois_level(M)) fix v?

    sigma_c(zeta^s t sqrt(d)) = zeta^(s c) * chi_d(c) * t * sqrt(d), so the
    value is fixed iff zeta^(s(c-1)) * kronecker(disc(d), c) = 1.
    """
    L = v.galois_level(M)
    if math.gcd(c, L) != 1:
        raise ValueError(f"c = {c} not coprime to the acting level {L}")
    disc = quadratic_discriminant(v.d)
    z = v.zeta_exp * (c - 1) % v.zeta_order
    chi = kronecker(disc, c)
    return (z == 0 and chi == 1) or (2 * z == v.zeta_order and chi == -1)


def lies_in_cyclotomic(v: RadicalValue, M: int) -> bool:
    """True iff the radical value lies in Q(zeta_M) (all sigma_c, c=1 mod M, fix it)."""
    L = v.galois_level(M)
    if L > _CHAR_LOOP_CAP:
        raise ResourceCapError(f"character loop modulus {L} too large")
    for c in range(1 + M, L + 1, M):
        if math.gcd(c, L) != 1:
            continue
        if not fixed_by(c, v, M):
            return False
    return True

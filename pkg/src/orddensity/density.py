"""Truncated density series for primes with prescribed multiplicative order
or index conditions on a list of rationals, with truncation bookkeeping and
heuristic tail bounds.

Three condition modes on pairwise multiplicatively independent alpha_1..alpha_r:

  * OrderAP:     ord_p(alpha_i) = a_i (mod d_i) for every i,
  * IndexFixed:  ind_p(alpha_i) = t_i exactly,
  * IndexSet:    ind_p(alpha_i) lies in a set S_i (finite or a progression),

optionally refined by a Frobenius condition p mod f in C.  Each series term
is mu-weighted inclusion-exclusion over "n_i t_i divides the index" events,
evaluated through exact cyclotomic-Kummer degrees and automorphism counts.
Order conditions reduce to index conditions: ord = a (mod d) with ind = t is
the congruence p = 1 + a t (mod d t), which becomes a root-of-unity action.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .arith import FactoredRational, crt_merge, moebius
from .eulerseries import KahanSum, phi_lcm_tail
from .kummer import DegreeCache, FieldSpec, count_automorphisms, degree_info

DEFAULT_NMAX = 64
DEFAULT_TMAX = 64


# ---------------------------------------------------------------------------
# condition specifications


@dataclass(frozen=True)
class SetDescriptor:
    """A set of admissible index values: finite list or progression
    {k >= 1 : k = a (mod d)}."""

    kind: str  # "finite" | "ap"
    values: tuple[int, ...] = ()
    a: int = 0
    d: int = 1

    @staticmethod
    def finite(values: Sequence[int]) -> "SetDescriptor":
        vals = tuple(sorted(set(int(v) for v in values)))
        if not vals or vals[0] < 1:
            raise ValueError("finite index set needs positive integers")
        return SetDescriptor("finite", values=vals)

    @staticmethod
    def progression(a: int, d: int) -> "SetDescriptor":
        if d < 1:
            raise ValueError("progression modulus must be >= 1")
        return SetDescriptor("ap", a=a % d, d=d)

    def contains(self, k: int) -> bool:
        if k < 1:
            return False
        if self.kind == "finite":
            return k in self.values
        return k % self.d == self.a

    def upto(self, tmax: int) -> list[int]:
        if self.kind == "finite":
            return [v for v in self.values if v <= tmax]
        start = self.a if self.a >= 1 else self.d
        return list(range(start, tmax + 1, self.d))

    def truncated_above(self, tmax: int) -> bool:
        if self.kind == "finite":
            return any(v > tmax for v in self.values)
        return True


@dataclass(frozen=True)
class OrderAP:
    a: tuple[int, ...]
    d: tuple[int, ...]


@dataclass(frozen=True)
class IndexFixed:
    T: tuple[int, ...]


@dataclass(frozen=True)
class IndexSet:
    S: tuple[SetDescriptor, ...]


Mode = Union[OrderAP, IndexFixed, IndexSet]


def _exponent_rank(alphas: Sequence[FactoredRational]) -> int:
    """Rank over Q of the prime-exponent vectors.

    Signs are ignored: any rational dependency prod alpha_i^(k_i) = +-1 can
    be squared, so torsion never rescues independence and the multiplicative
    rank of the generated group equals the rank of the exponent matrix.
    """
    support = sorted({p for a in alphas for p in a.support()})
    rows = [[Fraction(a.exponent(p)) for p in support] for a in alphas]
    rank = 0
    for col in range(len(support)):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def multiplicatively_independent(alphas: Sequence[FactoredRational]) -> bool:
    """True when the alphas generate a multiplicative group of full rank."""
    return _exponent_rank(alphas) == len(alphas)


@dataclass(frozen=True)
class ConditionSpec:
    """Condition data: the alphas, the per-alpha mode, optional Frobenius
    class set (level f, residues C in (Z/f)^x)."""

    alphas: tuple[FactoredRational, ...]
    mode: Mode
    frobenius: Optional[tuple[int, frozenset[int]]] = None

    def __post_init__(self):
        r = len(self.alphas)
        if r < 1:
            raise ValueError("need at least one alpha")
        for a in self.alphas:
            if not a.factors:
                raise ValueError("alpha must not be 0 or a unit (1, -1)")
        if not multiplicatively_independent(self.alphas):
            raise ValueError("alphas must be multiplicatively independent")
        if isinstance(self.mode, OrderAP):
            if len(self.mode.a) != r or len(self.mode.d) != r:
                raise ValueError("order progression needs a_i, d_i per alpha")
            if any(d < 2 for d in self.mode.d):
                raise ValueError("order progression moduli must be >= 2")
        elif isinstance(self.mode, IndexFixed):
            if len(self.mode.T) != r or any(t < 1 for t in self.mode.T):
                raise ValueError("index targets must be positive, one per alpha")
        elif isinstance(self.mode, IndexSet):
            if len(self.mode.S) != r:
                raise ValueError("need one index set per alpha")
        else:
            raise ValueError("unknown mode")
        if self.frobenius is not None:
            f, C = self.frobenius
            if f < 1 or not C:
                raise ValueError("Frobenius level must be >= 1 with nonempty classes")
            if any(math.gcd(c, f) != 1 for c in C):
                raise ValueError("Frobenius classes must be units mod f")

    @staticmethod
    def make(alphas, mode: Mode, frobenius=None) -> "ConditionSpec":
        fr = tuple(
            a if isinstance(a, FactoredRational) else FactoredRational.from_fraction(a)
            for a in alphas
        )
        if frobenius is not None:
            f, C = frobenius
            frobenius = (int(f), frozenset(int(c) % int(f) for c in C))
        return ConditionSpec(fr, mode, frobenius)

    @property
    def rank(self) -> int:
        return len(self.alphas)


@dataclass
class DensityResult:
    """Truncated series value with truncation bookkeeping."""

    value: float
    terms_evaluated: int
    caps: tuple[int, int]  # (Nmax, Tmax); Tmax = 0 when T was not truncated
    tail_estimate: float
    per_term_log: Optional[list[dict]] = None


# ---------------------------------------------------------------------------
# tail bound


def tail_estimate(caps: Sequence[int], b_observed: int) -> float:
    """Heuristic bound for the mass outside the cap box.

    Per truncated variable: the lcm-phi tail beyond its cap, evaluated on a
    4x extended grid plus a 1/x extrapolation for the rest, scaled by the
    observed failure bound.  Heuristic, not rigorous: the underlying
    O-constants are not explicit.
    """
    if b_observed < 1:
        raise ValueError("b_observed must be >= 1")
    total = 0.0
    for cap in caps:
        grid = phi_lcm_tail(1, cap, 4 * cap)
        total += b_observed * (grid + grid / 3.0)
    return total


# ---------------------------------------------------------------------------
# series evaluation


def _squarefree_values(nmax: int) -> list[tuple[int, int]]:
    return [(n, moebius(n)) for n in range(1, nmax + 1) if moebius(n) != 0]


def _term(
    alphas: tuple[FactoredRational, ...],
    m: tuple[int, ...],
    W: int,
    fix_level: int,
    congruences: tuple[tuple[int, int], ...],
    frobenius,
    cache: Optional[DegreeCache],
) -> tuple[int, int, int]:
    """(automorphism count, field degree, failure ratio) of one summand."""
    spec = FieldSpec(alphas, m, W)
    degree, fail = degree_info(spec, cache)
    count = count_automorphisms(spec, fix_level, congruences, frobenius)
    return count, degree, fail


def _fixed_T_sum(
    spec: ConditionSpec,
    T: tuple[int, ...],
    nmax: int,
    congr_for,
    extra_level: int,
    acc: KahanSum,
    log: Optional[list],
    cache: Optional[DegreeCache],
) -> tuple[int, int]:
    """Accumulate the inclusion-exclusion sum over squarefree N for fixed T.

    congr_for(T) supplies the unit congruences; extra_level joins the field
    level (the progression level, lcm of d_i t_i, for order conditions).
    Returns (terms evaluated, lcm of failure ratios seen).
    """
    r = spec.rank
    f = spec.frobenius[0] if spec.frobenius else 1
    sf = _squarefree_values(nmax)
    terms = 0
    b_seen = 1
    congruences = congr_for(T)
    for Nmu in itertools.product(sf, repeat=r):
        N = tuple(n for n, _ in Nmu)
        mu_prod = math.prod(mu for _, mu in Nmu)
        if isinstance(spec.mode, OrderAP):
            # identity on zeta_(n_i t_i) and the progression action on
            # zeta_(d_i t_i) must agree on the overlap
            if any(
                (a * t) % (math.gcd(d, n) * t)
                for a, d, n, t in zip(spec.mode.a, spec.mode.d, N, T)
            ):
                continue
        m = tuple(n * t for n, t in zip(N, T))
        v = math.lcm(*m)
        W = math.lcm(v, extra_level, f)
        count, degree, fail = _term(
            spec.alphas, m, W, v, congruences, spec.frobenius, cache
        )
        b_seen = math.lcm(b_seen, fail)
        terms += 1
        if count:
            acc.add(mu_prod * count / degree)
        if log is not None:
            log.append(
                {"N": N, "T": T, "mu": mu_prod, "c": count, "degree": degree}
            )
    return terms, b_seen


def index_density_fixed(
    spec: ConditionSpec,
    nmax: int = DEFAULT_NMAX,
    *,
    log_terms: bool = False,
    cache: Optional[DegreeCache] = None,
) -> DensityResult:
    """Density of primes with ind_p(alpha_i) = t_i for every i."""
    if not isinstance(spec.mode, IndexFixed):
        raise ValueError("spec must carry fixed index targets")
    acc = KahanSum()
    log: Optional[list] = [] if log_terms else None
    terms, b_seen = _fixed_T_sum(
        spec, spec.mode.T, nmax, lambda T: (), 1, acc, log, cache
    )
    tail = tail_estimate([nmax] * spec.rank, b_seen)
    return DensityResult(acc.value, terms, (nmax, 0), tail, log)


def index_density_set(
    spec: ConditionSpec,
    nmax: int = DEFAULT_NMAX,
    tmax: int = DEFAULT_TMAX,
    *,
    log_terms: bool = False,
    cache: Optional[DegreeCache] = None,
) -> DensityResult:
    """Density of primes with ind_p(alpha_i) in S_i for every i."""
    if not isinstance(spec.mode, IndexSet):
        raise ValueError("spec must carry index sets")
    acc = KahanSum()
    log: Optional[list] = [] if log_terms else None
    terms = 0
    b_seen = 1
    t_lists = [s.upto(tmax) for s in spec.mode.S]
    for T in itertools.product(*t_lists):
        t, b = _fixed_T_sum(spec, T, nmax, lambda T: (), 1, acc, log, cache)
        terms += t
        b_seen = math.lcm(b_seen, b)
    caps = [nmax] * spec.rank
    caps += [tmax for s in spec.mode.S if s.truncated_above(tmax)]
    tail = tail_estimate(caps, b_seen)
    return DensityResult(acc.value, terms, (nmax, tmax), tail, log)


def order_density(
    spec: ConditionSpec,
    nmax: int = DEFAULT_NMAX,
    tmax: int = DEFAULT_TMAX,
    *,
    log_terms: bool = False,
    cache: Optional[DegreeCache] = None,
) -> DensityResult:
    """Density of primes with ord_p(alpha_i) = a_i (mod d_i) for every i.

    Sums index-condition terms over T, with the unit congruence
    c = 1 + a_i t_i (mod d_i t_i) carrying the progression.  T tuples whose
    congruence system is unsolvable are skipped (they cover finitely many
    primes); so are T with gcd(1 + a_i t_i, d_i) > 1.
    """
    if not isinstance(spec.mode, OrderAP):
        raise ValueError("spec must carry order progressions")
    a = tuple(ai % di for ai, di in zip(spec.mode.a, spec.mode.d))
    d = spec.mode.d
    acc = KahanSum()
    log: Optional[list] = [] if log_terms else None
    terms = 0
    b_seen = 1
    for T in itertools.product(range(1, tmax + 1), repeat=spec.rank):
        if any(math.gcd(1 + ai * ti, di) != 1 for ai, di, ti in zip(a, d, T)):
            continue
        if crt_merge([(ai * ti, di * ti) for ai, di, ti in zip(a, d, T)]) is None:
            continue
        w = math.lcm(*(di * ti for di, ti in zip(d, T)))
        congr = tuple(
            ((1 + ai * ti) % (di * ti), di * ti) for ai, di, ti in zip(a, d, T)
        )
        t, b = _fixed_T_sum(spec, T, nmax, lambda T, c=congr: c, w, acc, log, cache)
        terms += t
        b_seen = math.lcm(b_seen, b)
    caps = [nmax] * spec.rank + [tmax] * spec.rank
    tail = tail_estimate(caps, b_seen)
    return DensityResult(acc.value, terms, (nmax, tmax), tail, log)


def evaluate(spec: ConditionSpec, nmax: int, tmax: int, **kw) -> DensityResult:
    """Dispatch on the condition mode."""
    if isinstance(spec.mode, IndexFixed):
        return index_density_fixed(spec, nmax, **kw)
    if isinstance(spec.mode, IndexSet):
        return index_density_set(spec, nmax, tmax, **kw)
    return order_density(spec, nmax, tmax, **kw)

"""Segmented prime scans: multiplicative orders and indices of the alphas
modulo every prime up to x, classification against condition specs, complete
splitting fractions, and comparison against the series values.

Scans are data-parallel over fixed-width prime segments; per-segment counters
merge by addition in segment order, so results are identical for any worker
count.  A shared smallest-prime-factor table makes factoring p-1 a chain of
table lookups.
"""

from __future__ import annotations

import math
import multiprocessing
from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional, Sequence

from scipy.integrate import quad

from .arith import (
    ResourceCapError,
    factorize,
    order_from_pairs,
    segmented_primes,
    shared_spf_table,
)
from .density import ConditionSpec, DensityResult, IndexFixed, IndexSet, OrderAP
from .kummer import FieldSpec

SCAN_X_CAP = 10**9
DEFAULT_SEGMENT = 1 << 22


def li(x: float) -> float:
    """Logarithmic integral int_2^x dt/log t by adaptive quadrature."""
    if x <= 2:
        return 0.0
    val, _ = quad(lambda t: 1.0 / math.log(t), 2.0, x, limit=400)
    return val


@dataclass
class ScanResult:
    """Empirical counts for one condition spec over primes p <= x."""

    x: int
    matched: int
    considered: int
    excluded: tuple[int, ...]
    li_x: float
    ratio_considered: float
    ratio_li: float
    checkpoints: Optional[list[tuple[int, int, int]]] = None  # (x_k, matched, considered)

    def to_dict(self) -> dict:
        out = {
            "x": self.x,
            "matched": self.matched,
            "considered": self.considered,
            "excluded": list(self.excluded),
            "li_x": self.li_x,
            "ratios": {
                "matched_over_considered": self.ratio_considered,
                "matched_over_li": self.ratio_li,
            },
        }
        if self.checkpoints is not None:
            out["checkpoints"] = [
                {"x": a, "matched": b, "considered": c} for a, b, c in self.checkpoints
            ]
        return out


@dataclass
class DiagnosticReport:
    """Count of primes whose index exceeds (log x)^rho."""

    rho: float
    count_large_index: int
    expected_scale: float
    x: int
    ratio: float


@dataclass
class CompareReport:
    """Empirical ratio against the series value."""

    empirical: float
    theory: float
    abs_gap: float
    rel_gap: float
    error_scale: float

    def to_dict(self) -> dict:
        return {
            "empirical": self.empirical,
            "theory": self.theory,
            "abs_gap": self.abs_gap,
            "rel_gap": self.rel_gap,
            "error_scale": self.error_scale,
        }


# ---------------------------------------------------------------------------
# condition plumbing


def _alpha_pair(a) -> tuple[int, int]:
    v = a.value()
    return int(v.numerator), int(v.denominator)


def excluded_primes(spec: ConditionSpec) -> frozenset[int]:
    """Primes dividing a numerator/denominator of some alpha, or the
    Frobenius level."""
    out: set[int] = set()
    for a in spec.alphas:
        out.update(a.support())
    if spec.frobenius and spec.frobenius[0] > 1:
        out.update(p for p, _ in factorize(spec.frobenius[0]).factors)
    return frozenset(out)


def _matches(spec: ConditionSpec, ords, inds, p: int) -> bool:
    if spec.frobenius is not None:
        f, C = spec.frobenius
        if p % f not in C:
            return False
    mode = spec.mode
    if isinstance(mode, IndexFixed):
        return all(ind == t for ind, t in zip(inds, mode.T))
    if isinstance(mode, OrderAP):
        return all(o % d == a % d for o, a, d in zip(ords, mode.a, mode.d))
    assert isinstance(mode, IndexSet)
    return all(s.contains(ind) for ind, s in zip(inds, mode.S))


# Per-process scan state, installed before forking so workers inherit it.
_SCAN: dict = {}


def _segment_bounds(x: int, segment: int, idx: int) -> tuple[int, int]:
    lo = 2 + idx * segment
    return lo, min(lo + segment, x + 1)


def _scan_segment(idx: int):
    st = _SCAN
    x, segment = st["x"], st["segment"]
    lo, hi = _segment_bounds(x, segment, idx)
    table = st["table"]
    alpha_pairs = st["alpha_pairs"]
    specs = st["specs"]
    spec_alpha_idx = st["spec_alpha_idx"]
    spec_excl = st["spec_excl"]
    thresholds = st["thresholds"]
    factor_pairs = table.factor_pairs
    n_specs = len(specs)
    matched = [0] * n_specs
    considered = [0] * n_specs
    ck_matched = [[0] * (len(thresholds) + 1) for _ in range(n_specs)] if thresholds else None
    ck_considered = (
        [[0] * (len(thresholds) + 1) for _ in range(n_specs)] if thresholds else None
    )
    ords = [0] * len(alpha_pairs)
    inds = [0] * len(alpha_pairs)
    done = [False] * len(alpha_pairs)
    for p in segmented_primes(lo, hi):
        p = int(p)
        pairs = None
        for k in range(len(alpha_pairs)):
            done[k] = False
        bucket = bisect_left(thresholds, p) if thresholds else 0
        for si in range(n_specs):
            if p in spec_excl[si]:
                continue
            considered[si] += 1
            if ck_considered:
                ck_considered[si][bucket] += 1
            for k in spec_alpha_idx[si]:
                if not done[k]:
                    if pairs is None:
                        pairs = factor_pairs(p - 1)
                    num, den = alpha_pairs[k]
                    val = num % p if den == 1 else num * pow(den, -1, p) % p
                    o = order_from_pairs(val, p, pairs)
                    ords[k] = o
                    inds[k] = (p - 1) // o
                    assert o * inds[k] == p - 1  # order divides p-1 exactly
                    done[k] = True
            spec = specs[si]
            sel_ords = [ords[k] for k in spec_alpha_idx[si]]
            sel_inds = [inds[k] for k in spec_alpha_idx[si]]
            if _matches(spec, sel_ords, sel_inds, p):
                matched[si] += 1
                if ck_matched:
                    ck_matched[si][bucket] += 1
    return idx, matched, considered, ck_matched, ck_considered


def scan_many(
    specs: Sequence[ConditionSpec],
    x: int,
    *,
    workers: int = 1,
    segment: int = DEFAULT_SEGMENT,
    checkpoints: bool = False,
) -> list[ScanResult]:
    """Scan all primes p <= x once, classifying against every spec.

    Orders are computed once per distinct alpha per prime and shared across
    the specs.  Results are independent of the worker count.
    """
    if x > SCAN_X_CAP:
        raise ResourceCapError(f"scan bound {x} exceeds cap {SCAN_X_CAP}")
    if x < 2:
        raise ValueError("need x >= 2")
    alpha_pairs: list[tuple[int, int]] = []
    index_of: dict[tuple[int, int], int] = {}
    spec_alpha_idx: list[list[int]] = []
    for spec in specs:
        idxs = []
        for a in spec.alphas:
            key = _alpha_pair(a)
            if key not in index_of:
                index_of[key] = len(alpha_pairs)
                alpha_pairs.append(key)
            idxs.append(index_of[key])
        spec_alpha_idx.append(idxs)
    thresholds: list[int] = []
    if checkpoints:
        t = x // 2
        while t >= 4:
            thresholds.append(t)
            t //= 2
        thresholds.sort()
    _SCAN.clear()
    _SCAN.update(
        {
            "x": x,
            "segment": segment,
            "table": shared_spf_table(x),
            "alpha_pairs": alpha_pairs,
            "specs": list(specs),
            "spec_alpha_idx": spec_alpha_idx,
            "spec_excl": [excluded_primes(s) for s in specs],
            "thresholds": thresholds,
        }
    )
    n_segments = (x - 1 + segment - 1) // segment
    ctx = None
    if workers > 1 and n_segments > 1:
        try:
            ctx = multiprocessing.get_context("fork")  # workers inherit _SCAN
        except ValueError:
            ctx = None
    if ctx is not None:
        with ctx.Pool(min(workers, n_segments)) as pool:
            results = list(pool.imap(_scan_segment, range(n_segments)))
    else:
        results = [_scan_segment(i) for i in range(n_segments)]
    results.sort(key=lambda r: r[0])
    li_x = li(x)
    out = []
    for si, spec in enumerate(specs):
        matched = sum(r[1][si] for r in results)
        considered = sum(r[2][si] for r in results)
        ck = None
        if checkpoints:
            cm = [0] * (len(thresholds) + 1)
            cc = [0] * (len(thresholds) + 1)
            for r in results:
                for b in range(len(thresholds) + 1):
                    cm[b] += r[3][si][b]
                    cc[b] += r[4][si][b]
            ck = []
            run_m = run_c = 0
            for b, t in enumerate(thresholds):
                run_m += cm[b]
                run_c += cc[b]
                ck.append((t, run_m, run_c))
            ck.append((x, run_m + cm[-1], run_c + cc[-1]))
        excl = tuple(sorted(p for p in excluded_primes(spec) if p <= x))
        out.append(
            ScanResult(
                x=x,
                matched=matched,
                considered=considered,
                excluded=excl,
                li_x=li_x,
                ratio_considered=matched / considered if considered else 0.0,
                ratio_li=matched / li_x if li_x else 0.0,
                checkpoints=ck,
            )
        )
    return out


def scan(
    spec: ConditionSpec,
    x: int,
    *,
    workers: int = 1,
    segment: int = DEFAULT_SEGMENT,
    checkpoints: bool = False,
) -> ScanResult:
    """Scan primes p <= x against one condition spec."""
    return scan_many([spec], x, workers=workers, segment=segment, checkpoints=checkpoints)[0]


# ---------------------------------------------------------------------------
# splitting fractions


def splitting_fraction(fspec: FieldSpec, x: int, *, segment: int = DEFAULT_SEGMENT) -> float:
    """Fraction of unexcluded primes p <= x splitting completely in the field.

    Complete splitting for a degree-1 prime means p = 1 (mod M) and every
    alpha_i is an m_i-th power residue mod p.
    """
    return splitting_fraction_many([fspec], x, segment=segment)[0]


def splitting_fraction_many(
    fspecs: Sequence[FieldSpec], x: int, *, segment: int = DEFAULT_SEGMENT
) -> list[float]:
    if x > SCAN_X_CAP:
        raise ResourceCapError(f"scan bound {x} exceeds cap {SCAN_X_CAP}")
    data = []
    for fs in fspecs:
        excl = set(p for a in fs.alphas for p in a.support())
        if fs.M > 1:  # ramified primes divide the cyclotomic level
            excl.update(p for p, _ in factorize(fs.M).factors)
        pairs = [_alpha_pair(a) for a in fs.alphas]
        data.append((fs.M, fs.m, pairs, frozenset(excl)))
    matched = [0] * len(fspecs)
    considered = [0] * len(fspecs)
    start = 2
    while start <= x:
        stop = min(start + segment, x + 1)
        for p in segmented_primes(start, stop):
            p = int(p)
            for k, (M, m, pairs, excl) in enumerate(data):
                if p in excl:
                    continue
                considered[k] += 1
                if (p - 1) % M:
                    continue
                ok = True
                for (num, den), mi in zip(pairs, m):
                    val = num % p if den == 1 else num * pow(den, -1, p) % p
                    if pow(val, (p - 1) // mi, p) != 1:
                        ok = False
                        break
                if ok:
                    matched[k] += 1
        start = stop
    return [m / c if c else 0.0 for m, c in zip(matched, considered)]


def large_index_diagnostic(alpha, x: int, rho: float) -> DiagnosticReport:
    """Count primes p <= x with ind_p(alpha) > (log x)^rho."""
    if not (0 < rho < 1):
        raise ValueError("need 0 < rho < 1")
    a = alpha if hasattr(alpha, "factors") else factorize(alpha)
    num, den = _alpha_pair(a)
    excl = frozenset(a.support())
    threshold = math.log(x) ** rho
    table = shared_spf_table(x)
    count = 0
    for p in segmented_primes(2, x + 1):
        p = int(p)
        if p in excl:
            continue
        val = num % p if den == 1 else num * pow(den, -1, p) % p
        o = order_from_pairs(val, p, table.factor_pairs(p - 1))
        if (p - 1) // o > threshold:
            count += 1
    scale = x / math.log(x) ** (1 + rho)
    return DiagnosticReport(rho, count, scale, x, count / scale)


def index_counts(alpha, x: int) -> tuple[dict[int, int], int]:
    """Histogram of ind_p(alpha) over unexcluded p <= x, plus the prime count."""
    a = alpha if hasattr(alpha, "factors") else factorize(alpha)
    num, den = _alpha_pair(a)
    excl = frozenset(a.support())
    table = shared_spf_table(x)
    hist: dict[int, int] = {}
    considered = 0
    for p in segmented_primes(2, x + 1):
        p = int(p)
        if p in excl:
            continue
        considered += 1
        val = num % p if den == 1 else num * pow(den, -1, p) % p
        o = order_from_pairs(val, p, table.factor_pairs(p - 1))
        ind = (p - 1) // o
        hist[ind] = hist.get(ind, 0) + 1
    return hist, considered


def compare(theory: DensityResult, scan_result: ScanResult, rank: int = 1) -> CompareReport:
    """Gaps between the empirical ratio matched/li(x) and the series value."""
    emp = scan_result.ratio_li
    gap = emp - theory.value
    rel = abs(gap) / theory.value if theory.value else math.inf
    scale = math.log(scan_result.x) ** (-1.0 / (rank + 1))
    return CompareReport(emp, theory.value, gap, rel, scale)

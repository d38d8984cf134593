import math

import pytest

from orddensity.arith import FactoredRational, prime_list
from orddensity.density import (
    ConditionSpec,
    IndexFixed,
    IndexSet,
    OrderAP,
    SetDescriptor,
    index_density_fixed,
    index_density_set,
    multiplicatively_independent,
    order_density,
    tail_estimate,
)
from orddensity.eulerseries import phi_lcm_tail
from orddensity.kummer import FieldSpec, kummer_degree


def artin_euler_product(limit=10**6) -> float:
    prod = 1.0
    for p in prime_list(limit):
        p = float(p)
        prod *= 1.0 - 1.0 / (p * (p - 1.0))
    return prod


def test_artin_constant_from_series():
    spec = ConditionSpec.make([2], IndexFixed((1,)))
    res = index_density_fixed(spec, nmax=120)
    assert abs(res.value - artin_euler_product(10**5)) < 5e-3
    assert res.terms_evaluated == sum(
        1 for n in range(1, 121) if all(n % (p * p) for p in range(2, 11))
    )


def test_order_parity_values():
    even = order_density(ConditionSpec.make([2], OrderAP((0,), (2,))), nmax=48, tmax=48)
    odd = order_density(ConditionSpec.make([2], OrderAP((1,), (2,))), nmax=48, tmax=48)
    assert abs(even.value - 17 / 24) < 2e-2
    assert abs(even.value - 17 / 24) <= even.tail_estimate
    assert abs(odd.value - 7 / 24) < 2e-2
    assert abs(even.value + odd.value - 1.0) <= even.tail_estimate + odd.tail_estimate


def test_order_parity_negative_alpha_matches_scan():
    # negative alphas route sign through the root-of-unity bookkeeping;
    # cross-check the whole pipeline against a prime scan
    from orddensity.empirical import scan

    spec = ConditionSpec.make([-2], OrderAP((0,), (2,)))
    series = order_density(spec, nmax=48, tmax=96)
    emp = scan(spec, 10**6)
    assert abs(series.value - emp.ratio_li) / emp.ratio_li < 0.015
    # tail dominated by the t-truncation: doubling tmax moves toward the scan
    shorter = order_density(spec, nmax=48, tmax=48)
    assert shorter.value < series.value
    assert abs(series.value - emp.ratio_li) < abs(shorter.value - emp.ratio_li)


def test_fractional_alpha_index_density_matches_scan():
    from orddensity.empirical import scan

    spec = ConditionSpec.make(["3/2"], IndexFixed((1,)))
    series = index_density_fixed(spec, nmax=100)
    emp = scan(spec, 10**6)
    assert abs(series.value - emp.ratio_li) / emp.ratio_li < 0.01


def test_rank_two_order_mode_converges_to_scan():
    # both orders even: exercises the pairwise solvability filter and the
    # congruence-bearing automorphism counts at rank 2
    from orddensity.empirical import scan

    spec = ConditionSpec.make([2, 3], OrderAP((0, 0), (2, 2)))
    emp = scan(spec, 10**6)
    low = order_density(spec, nmax=12, tmax=12)
    high = order_density(spec, nmax=12, tmax=24)
    assert low.value < high.value <= emp.ratio_li * 1.02
    assert abs(high.value - emp.ratio_li) / emp.ratio_li < 0.2
    assert abs(high.value - emp.ratio_li) <= high.tail_estimate


def test_rank_three_index_density_matches_scan():
    from orddensity.empirical import scan

    spec = ConditionSpec.make([2, 3, 5], IndexFixed((1, 1, 1)))
    series = index_density_fixed(spec, nmax=12)
    emp = scan(spec, 10**6)
    assert abs(series.value - emp.ratio_li) / emp.ratio_li < 0.02


def test_frobenius_refined_index_density_matches_scan():
    # 2 as a primitive root among p = 1 (mod 4)
    from orddensity.empirical import scan

    spec = ConditionSpec.make([2], IndexFixed((1,)), frobenius=(4, {1}))
    series = index_density_fixed(spec, nmax=100)
    emp = scan(spec, 10**6)
    assert abs(series.value - emp.ratio_li) / emp.ratio_li < 0.01


def test_order_density_all_admissible_t_vanishing():
    # with d = 2, a = 1 the single admissible t = 1 has gcd(1 + t, d) = 2
    spec = ConditionSpec.make([2], OrderAP((1,), (2,)))
    res = order_density(spec, nmax=16, tmax=1)
    assert res.value == 0.0


def test_index_set_singleton_matches_fixed_term_for_term():
    fixed = index_density_fixed(
        ConditionSpec.make([2], IndexFixed((3,))), nmax=20, log_terms=True
    )
    viaset = index_density_set(
        ConditionSpec.make([2], IndexSet((SetDescriptor.finite([3]),))),
        nmax=20,
        tmax=10,
        log_terms=True,
    )
    assert fixed.per_term_log == viaset.per_term_log
    assert fixed.value == viaset.value


def test_index_set_complement_sums_to_one():
    even = index_density_set(
        ConditionSpec.make([2], IndexSet((SetDescriptor.progression(0, 2),))),
        nmax=32, tmax=48,
    )
    odd = index_density_set(
        ConditionSpec.make([2], IndexSet((SetDescriptor.progression(1, 2),))),
        nmax=32, tmax=48,
    )
    gap = abs(even.value + odd.value - 1.0)
    assert gap <= even.tail_estimate + odd.tail_estimate
    assert gap < 0.06


def test_index_set_all_k_completeness():
    res = index_density_set(
        ConditionSpec.make([2], IndexSet((SetDescriptor.progression(0, 1),))),
        nmax=32, tmax=64,
    )
    assert abs(res.value - 1.0) <= res.tail_estimate
    assert abs(res.value - 1.0) < 0.05


def test_full_frobenius_class_is_vacuous():
    plain = index_density_fixed(
        ConditionSpec.make([5], IndexFixed((1,))), nmax=24, log_terms=True
    )
    full = index_density_fixed(
        ConditionSpec.make([5], IndexFixed((1,)), frobenius=(4, {1, 3})),
        nmax=24,
        log_terms=True,
    )
    assert full.value == pytest.approx(plain.value, rel=1e-12)
    # term-for-term: the normalized ratio c/degree matches on every summand
    for row_a, row_b in zip(plain.per_term_log, full.per_term_log):
        assert row_a["N"] == row_b["N"] and row_a["T"] == row_b["T"]
        assert row_a["c"] * row_b["degree"] == row_b["c"] * row_a["degree"]
    # same invariance through the order mode, where the progression level
    # already enlarges the field
    plain_o = order_density(
        ConditionSpec.make([2], OrderAP((0,), (2,))), nmax=12, tmax=12, log_terms=True
    )
    full_o = order_density(
        ConditionSpec.make([2], OrderAP((0,), (2,)), frobenius=(3, {1, 2})),
        nmax=12, tmax=12, log_terms=True,
    )
    assert full_o.value == plain_o.value
    for row_a, row_b in zip(plain_o.per_term_log, full_o.per_term_log):
        assert row_a["c"] * row_b["degree"] == row_b["c"] * row_a["degree"]


def test_rank_one_series_shape():
    spec = ConditionSpec.make([2], OrderAP((0,), (2,)))
    res = order_density(spec, nmax=10, tmax=4, log_terms=True)
    assert res.per_term_log
    for row in res.per_term_log:
        (n,), (t,) = row["N"], row["T"]
        assert row["mu"] in (-1, 1)
        level = math.lcm(2 * t, n * t)
        expected = kummer_degree(
            FieldSpec.make([2], (n * t,), level)
        )
        assert row["degree"] == expected


def test_values_lie_in_unit_interval_up_to_tail():
    for spec, kw in [
        (ConditionSpec.make([2], IndexFixed((1,))), dict(nmax=32)),
        (ConditionSpec.make([3], IndexFixed((2,))), dict(nmax=32)),
        (ConditionSpec.make([2, 3], IndexFixed((1, 1))), dict(nmax=16)),
    ]:
        res = index_density_fixed(spec, **kw)
        assert 0.0 <= res.value <= 1.0 + res.tail_estimate


def test_tail_estimate_definition():
    b = 2
    nmax = 32
    grid = phi_lcm_tail(1, nmax, 4 * nmax)
    assert tail_estimate([nmax], b) == pytest.approx(b * (grid + grid / 3.0))


def test_tail_estimate_halves_when_cap_doubles():
    t1 = tail_estimate([32], 2)
    t2 = tail_estimate([64], 2)
    assert t2 < t1
    assert t1 / t2 == pytest.approx(2.0, rel=0.5)  # 1/x law within factor 3


def test_tail_estimate_rejects_bad_bound():
    with pytest.raises(ValueError):
        tail_estimate([32], 0)


def test_condition_spec_validation():
    with pytest.raises(ValueError):
        ConditionSpec.make([2, 4], IndexFixed((1, 1)))  # dependent: 4 = 2^2
    with pytest.raises(ValueError):
        ConditionSpec.make([2, 8], IndexFixed((1, 1)))  # dependent: 8 = 2^3
    with pytest.raises(ValueError):
        ConditionSpec.make([2], OrderAP((0,), (1,)))  # modulus < 2
    with pytest.raises(ValueError):
        ConditionSpec.make([2], IndexFixed((0,)))
    with pytest.raises(ValueError):
        ConditionSpec.make([2], IndexFixed((1,)), frobenius=(4, {2}))  # 2 not a unit
    with pytest.raises(ValueError):
        ConditionSpec.make([-2, 2], IndexFixed((1, 1)))  # (-2)^2 = 2^2
    ConditionSpec.make([6, 10, 15], IndexFixed((1, 1, 1)))


def test_multiplicative_independence_checker():
    mk = FactoredRational.from_fraction
    assert multiplicatively_independent([mk(2), mk(3)])
    assert not multiplicatively_independent([mk(2), mk(4)])
    assert not multiplicatively_independent([mk(6), mk(10), mk(15), mk(30)])
    assert multiplicatively_independent([mk(-2), mk(3)])
    assert not multiplicatively_independent([mk(-2), mk(2)])  # (-2)^2 = 2^2
    assert not multiplicatively_independent([mk(-2), mk(-8)])  # (-2)^3 = -8


def test_set_descriptor():
    s = SetDescriptor.finite([3, 1, 3])
    assert s.values == (1, 3)
    assert s.contains(3) and not s.contains(2)
    assert s.upto(2) == [1]
    assert not s.truncated_above(3)
    ap = SetDescriptor.progression(2, 5)
    assert ap.contains(7) and not ap.contains(8)
    assert ap.upto(14) == [2, 7, 12]
    assert ap.truncated_above(100)
    allk = SetDescriptor.progression(0, 1)
    assert allk.upto(4) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        SetDescriptor.finite([0, 2])

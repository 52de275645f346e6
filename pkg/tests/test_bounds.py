import math
from collections import Counter
from fractions import Fraction
from itertools import product

import pytest

from stampforge import bounds
from stampforge.bounds import (
    assumption_check,
    berry_esseen_check,
    bound_report,
    closed_form_log_min,
    f_sigma,
    log_f_sigma,
    minimize_f,
    mpr_epsilon,
    negligible_constant,
    negligible_sets,
    new_lower_constant,
    normal_cdf,
    sigma_star,
    stat_profile,
    sum_distribution,
    yu_epsilon,
    yu_epsilon_is_exact,
)
from stampforge.sumsets import DomainError


def test_yu_table():
    assert [yu_epsilon(h) for h in (2, 4, 10, 3, 5, 7, 9)] == [0.0830, 0.0830, 0.0830, 0.0724, 0.0789, 0.0806, 0.0813]
    assert yu_epsilon_is_exact(9) and not yu_epsilon_is_exact(11)
    with pytest.raises(DomainError):
        yu_epsilon(1)


def test_mpr_values():
    assert mpr_epsilon(3) == 0.0221 and mpr_epsilon(4) == 0.0115
    c = math.cos(math.pi / 6)
    assert mpr_epsilon(6) == pytest.approx((1.02 * c / (2 + c)) ** 6, rel=1e-15)
    c = math.cos(math.pi / 9)
    assert mpr_epsilon(9) == pytest.approx((1.1 * c / (2 + c)) ** 9, rel=1e-15)


def test_constant_values():
    assert 0.5 * math.sqrt(2 * math.pi * math.e) == pytest.approx(2.066, abs=1e-3)
    assert new_lower_constant(2) == pytest.approx(2 * 2.0663656771, rel=1e-9)
    yu2 = math.factorial(2) / (1 - yu_epsilon(2))
    assert yu2 == pytest.approx(2.18102, abs=1e-5)
    assert new_lower_constant(30, 0.1) > math.factorial(30) / (1 - yu_epsilon(30))


def test_bound_report_ordering():
    r = bound_report(4, 10**6)
    # (h! n)^(1/h) only matches the exact counting bound asymptotically
    assert r.counting_lower_exact <= r.trivial_upper
    assert abs(r.trivial_lower - r.counting_lower_exact) < 0.1 * r.trivial_lower
    assert r.trivial_lower < r.yu_lower
    assert r.mpr_lower is not None
    assert bound_report(2, 100).mpr_lower is None
    d = r.to_dict()
    assert d["asymptotic"] == ["mpr_lower", "yu_lower", "new_lower", "new_upper"]


def test_negligible_sets_small():
    ns = negligible_sets([1, 2], 2)
    assert ns.short_sums == {1, 2}
    assert ns.repeated_sums == {2, 4}
    assert ns.union_size == 3
    assert ns.bound_rhs == 2 + 2 * 2


def test_negligible_random(rng):
    for _ in range(30):
        m = int(rng.integers(1, 9))
        h = int(rng.integers(1, 5))
        A = sorted(set(int(x) for x in rng.integers(0, 60, size=m)))
        ns = negligible_sets(A, h)
        assert ns.union_size <= ns.bound_rhs
        assert ns.union_size <= negligible_constant(h) * len(A) ** (h - 1)


def test_negligible_limits():
    with pytest.raises(DomainError):
        negligible_sets(range(13), 2)


def test_stat_profile_exact():
    p = stat_profile([0, 1])
    assert p.mean == Fraction(1, 2) and p.variance == Fraction(1, 4)
    assert p.third_abs_central == Fraction(1, 8)
    assert p.second_raw == Fraction(1, 2)


def test_sum_distribution_matches_enumeration(rng):
    for _ in range(20):
        A = sorted(set(int(x) for x in rng.integers(-5, 12, size=int(rng.integers(1, 5)))))
        h = int(rng.integers(1, 5))
        dist = sum_distribution(A, h)
        brute = Counter(sum(t) for t in product(A, repeat=h))
        assert dist.total == len(A) ** h and dist.is_normalized()
        assert dist.as_dict() == {z: Fraction(c, dist.total) for z, c in brute.items()}


def test_normal_cdf():
    assert normal_cdf(0) == 0.5
    assert normal_cdf(1.959963984540054) == pytest.approx(0.975, abs=1e-12)
    assert normal_cdf(-1) + normal_cdf(1) == pytest.approx(1.0, abs=1e-15)


def brute_sup(A, h):
    # Kolmogorov distance by direct enumeration of all ordered h-tuples
    m = len(A)
    mu = sum(A) / m
    sd = math.sqrt(sum((a - mu) ** 2 for a in A) / m)
    sums = sorted(sum(t) for t in product(A, repeat=h))
    N = len(sums)
    best = 0.0
    i = 0
    while i < N:
        j = i
        while j < N and sums[j] == sums[i]:
            j += 1
        phi = normal_cdf((sums[i] - h * mu) / (sd * math.sqrt(h)))
        best = max(best, abs(i / N - phi), abs(j / N - phi))
        i = j
    return best


def test_berry_esseen_two_point():
    r = berry_esseen_check([0, 1], 4)
    assert r.sup_distance == pytest.approx(0.1875, abs=1e-12)
    assert r.rhs == pytest.approx(0.56 * 0.125 / (0.125 * 2), rel=1e-12)
    assert r.holds


def test_berry_esseen_against_brute(rng):
    for _ in range(10):
        A = sorted(set(int(x) for x in rng.integers(0, 20, size=int(rng.integers(2, 5)))))
        if len(A) < 2:
            continue
        h = int(rng.integers(1, 6))
        r = berry_esseen_check(A, h)
        assert r.sup_distance == pytest.approx(brute_sup(A, h), abs=1e-12)


def test_berry_esseen_degenerate():
    with pytest.raises(DomainError):
        berry_esseen_check([3], 4)


def test_f_sigma_log_space():
    assert math.exp(log_f_sigma(3.0, 10, 3, 0.1)) == pytest.approx(f_sigma(3.0, 10, 3, 0.1), rel=1e-12)
    assert f_sigma(1e-3, 1e6, 10, 0.0) == math.inf
    with pytest.raises(DomainError):
        log_f_sigma(1.0, 10, 3, 0.5)


def test_minimize_f():
    sig, lf = minimize_f(100, 4, 0.0)
    assert sig == pytest.approx(25.0, rel=1e-6)
    assert sig == pytest.approx(sigma_star(100, 4, 0.0), rel=1e-6)
    assert lf == pytest.approx(closed_form_log_min(100, 4, 0.0), rel=1e-10)
    # the closed form is (1/2 - eps) h! sqrt(2 pi e) n
    assert math.exp(closed_form_log_min(100, 4, 0.0)) == pytest.approx(0.5 * 24 * math.sqrt(2 * math.pi * math.e) * 100)


def test_assumption_check():
    r = assumption_check([1, 2, 3], 100, 4)
    assert r.holds and not r.reflected_holds
    r = assumption_check([40, 60], 100, 4)
    assert not r.holds and r.reflected_holds
    r = assumption_check([0, 50], 100, 2)
    assert r.holds and r.reflected_holds
    assert r.mu == pytest.approx(r.threshold)


def test_support_limit(monkeypatch):
    monkeypatch.setattr(bounds, "SUPPORT_LIMIT", 10)
    with pytest.raises(DomainError):
        sum_distribution([0, 10], 2)


def test_negligible_examples():
    ns = negligible_sets([1, 2], 3)
    assert ns.short_sums == {1, 2, 3, 4} and ns.repeated_sums == {3, 4, 5, 6}
    assert ns.union_size == 6 <= ns.bound_rhs
    ns = negligible_sets([1], 2)
    assert ns.short_sums == {1} and ns.repeated_sums == {2}
    ns = negligible_sets([1, 2, 4], 2)
    assert ns.short_sums == {1, 2, 4} and ns.repeated_sums == {2, 4, 8}


def test_stat_profile_examples():
    p = stat_profile([1, 2, 3])
    assert p.mean == 2 and p.variance == Fraction(2, 3) and p.third_abs_raw == 12
    p = stat_profile([5])
    assert p.variance == 0 and p.third_abs_central == 0


def test_sum_distribution_examples():
    assert sum_distribution([0, 1], 2).as_dict() == {0: Fraction(1, 4), 1: Fraction(1, 2), 2: Fraction(1, 4)}
    assert sum_distribution([1, 2], 3).as_dict() == {3: Fraction(1, 8), 4: Fraction(3, 8), 5: Fraction(3, 8),
                                                    6: Fraction(1, 8)}
    assert sum_distribution([1, 3, 4], 2)[4] == Fraction(2, 9)


def test_berry_esseen_three_point():
    r = berry_esseen_check([1, 2, 3], 9)
    assert r.holds and r.c_be == 0.56
    assert r.coarse_rho == 27.0


def test_assumption_examples():
    r = assumption_check(range(1, 11), 10, 2)
    assert not r.holds and r.reflected_holds  # 2 * 5.5 > 5
    r = assumption_check([1, 2], 4, 2)
    assert not r.holds  # 2 * 1.5 = 3 > 2
    with pytest.raises(DomainError):
        assumption_check([4], 4, 2)


def test_bound_report_examples():
    r = bound_report(2, 100)
    assert r.trivial_lower == pytest.approx(math.sqrt(200)) and r.trivial_upper == 20
    r = bound_report(3, 10**6)
    k = r.counting_lower_exact
    f = lambda k: k + math.comb(k + 1, 2) + math.comb(k + 2, 3)
    assert f(k) >= 10**6 > f(k - 1)


@pytest.mark.parametrize("h", range(3, 21))
def test_literature_constants_ordered(h):
    fact = math.factorial(h)
    assert fact <= fact / (1 - mpr_epsilon(h)) <= fact / (1 - yu_epsilon(h))

"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line.

Run alone with ``pytest -s tests/test_acceptance.py`` to see only those lines.
"""
import math
import time
from itertools import product
from math import comb

import numpy as np
import pytest

from stampforge.bounds import (
    C_BE_DEFAULT,
    C_BE_HARD,
    berry_esseen_check,
    closed_form_log_min,
    log_f_sigma,
    minimize_f,
    mpr_epsilon,
    negligible_constant,
    negligible_sets,
    new_lower_constant,
    sigma_star,
    sum_distribution,
    yu_epsilon,
)
from stampforge.constructions import (
    ceil_root,
    interval_basis,
    jia_shen_basis,
    lift_basis,
    trivial_basis,
)
from stampforge.cyclic import baseline, cyclic_two_basis, jia_shen_modulus
from stampforge.solver import SearchConfig, exact_min_basis, oracle_min_basis
from stampforge.sumsets import CyclicBasis, coverage, cyclic_coverage

SEED = 20240601


@pytest.fixture
def report(capsys):
    def emit(num, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
        return ok

    return emit


def test_01_trivial_construction(report):
    t0 = time.perf_counter()
    bad = []
    for h in range(2, 9):
        for n in (10**2, 10**3, 10**4, 10**5, 10**6):
            S = trivial_basis(n, h)
            if not coverage(S).is_basis or len(S) > h * ceil_root(n, h):
                bad.append((h, n))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    report(1, ok, f"35 (h, n) pairs verified, size <= h*ceil(n^(1/h)); failures={bad}; {dt:.1f}s < 60s")
    assert ok


def _random_cyclic_basis(rng, b, k):
    if k == 1:
        return CyclicBasis(tuple(range(b)), b, 1)
    while True:
        size = int(rng.integers(1, b + 1))
        A = CyclicBasis(tuple(int(x) for x in rng.choice(b, size=size, replace=False)), b, k)
        if cyclic_coverage(A).is_basis:
            return A


def test_02_lift_construction(report):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    done, problems = 0, []
    while done < 50:
        b = int(rng.integers(2, 21))
        k = int(rng.integers(1, 4))
        t = int(rng.integers(1, 4))
        g = int(rng.integers(1, 3))
        if b**t > 10**4:
            continue
        m = int(rng.integers(1, min(b - 1, 10**4 // b**t) + 1))
        A = _random_cyclic_basis(rng, b, k)
        C = interval_basis(-k, m, g)
        lifted = lift_basis(A, C, m, t, g)
        S = lifted.basis
        n = m * b**t
        if S.h != t * k + g or lifted.reach != n:
            problems.append(("order", b, k, t, m, g))
        if not coverage(S).is_basis:
            problems.append(("coverage", b, k, t, m, g))
        if len(S) > t * len(A) + len(C):
            problems.append(("size", b, k, t, m, g))
        for s in range(1, n + 1):
            if not lifted.decompose(s).check(S):
                problems.append(("cert", b, k, t, m, g, s))
                break
        done += 1
    dt = time.perf_counter() - t0
    ok = not problems and dt < 120
    report(2, ok, f"50 random lifts, coverage + a certificate for every target + size bound; "
                  f"problems={problems[:3]}; {dt:.1f}s < 120s")
    assert ok


CYCLIC_CASES = [(u, v) for u in (1, 2) for v in (1, 2, 3)]


def test_03_cyclic_target(report):
    t0 = time.perf_counter()
    rows, failures, unproven = [], [], []
    for u, v in CYCLIC_CASES:
        b = jia_shen_modulus(u, v)
        r = cyclic_two_basis(u, v)
        ok = cyclic_coverage(r.basis).is_basis and len(r.basis) <= r.target
        ok = ok and len(r.basis) <= min(len(baseline(b)), 2 * ceil_root(b, 2) - 1)
        if not ok:
            failures.append((u, v))
        if b <= 100 and not r.proven_optimal:
            unproven.append((b, len(r.basis), r.lower_bound))
        rows.append(f"b={b}:{len(r.basis)}/{r.target}" + (f" opt={r.optimum}" if r.optimum else ""))
    dt = time.perf_counter() - t0
    detail = ", ".join(rows)
    report(3, not failures and not unproven,
           f"targets {'met' if not failures else f'unmet for {failures}'}; {detail}; "
           f"unproven optima (b, size, lower bound)={unproven}; {dt:.1f}s")
    assert not failures
    if unproven:
        pytest.xfail(f"exhaustive optimum out of budget for {unproven}")


JS_CASES = [(h, n) for h in (3, 4, 5) for n in (10**3, 10**4)]


def test_04_jia_shen_accounting(report):
    t0 = time.perf_counter()
    rows, bad = [], []
    for h, n in JS_CASES:
        js = jia_shen_basis(n, h)
        p = js.params
        led = js.ledger
        cyc = len(js.cyclic.basis)
        top = len(js.lifted.top)
        ok = coverage(js.basis).is_basis and js.basis.h == h
        ok = ok and led["component_sum"] == p.t * cyc + top and led["size"] == len(js.basis) <= p.t * cyc + top
        bound = (h - p.g) / 2 * ((3 * p.u + 2) * p.v + p.u) + p.g * p.m ** (1 / p.g) + 2 + 3
        met = cyc <= (3 * p.u + 2) * p.v + p.u
        if met:
            ok = ok and len(js.basis) <= bound
        if not ok:
            bad.append((h, n))
        rows.append(f"(h={h}, n={n}) {len(js.basis)} = {p.t}*{cyc}+{top}-{led['overlap']}"
                    f"{'' if met else ' target unmet'} <= {bound:.6g}")
    dt = time.perf_counter() - t0
    report(4, not bad, f"verified, ledger exact, bound holds: {'; '.join(rows)}; failures={bad}; {dt:.1f}s")
    assert not bad


EXACT = {}


def _exact_table():
    if not EXACT:
        for h in (2, 3):
            for n in range(1, 21):
                st = exact_min_basis(SearchConfig(n, h))
                EXACT[h, n] = (st.optimum_size, st.optimal)
    return EXACT


def test_05_exact_vs_oracle(report):
    t0 = time.perf_counter()
    table = _exact_table()
    mism = []
    for (h, n), (F, optimal) in sorted(table.items()):
        if not optimal or F != oracle_min_basis(n, h):
            mism.append((h, n))
    mono = all(table[h, n][0] <= table[h, n + 1][0] for h in (2, 3) for n in range(1, 20))
    mono = mono and all(table[3, n][0] <= table[2, n][0] for n in range(1, 21))
    spot = table[2, 8][0] == 3 and table[2, 4][0] == 2
    dt = time.perf_counter() - t0
    ok = not mism and mono and spot and dt < 300
    report(5, ok, f"40 values equal the oracle (mismatches={mism}), monotone={mono}, "
                  f"F_2(8)={table[2, 8][0]}, F_2(4)={table[2, 4][0]}; {dt:.1f}s < 300s")
    assert ok


def test_06_counting_bound(report):
    table = _exact_table()
    feasible, tight, literal_fail = [], [], []
    for (h, n), (F, _) in sorted(table.items()):
        # least k whose multisets can reach n, computed here by direct summation
        k = 1
        while sum(comb(k + i - 1, i) for i in range(1, h + 1)) < n:
            k += 1
        if sum(comb(F + i - 1, i) for i in range(1, h + 1)) < n or F < k:
            feasible.append((h, n))
        if k > 1 and sum(comb(k - 1 + i - 1, i) for i in range(1, h + 1)) >= n:
            tight.append((h, n))
        if F > 1 and sum(comb(F - 1 + i - 1, i) for i in range(1, h + 1)) >= n:
            literal_fail.append((h, n, F, k))
    ok = not feasible and not tight
    report(6, ok, f"every F satisfies the counting inequality and F >= the counting minimum, "
                  f"which is itself tight; F strictly above it at {len(literal_fail)} points "
                  f"(h, n, F, minimum) e.g. {literal_fail[:3]}")
    assert ok


def _negligible_brute(A, h):
    short = {sum(c) for i in range(1, h) for c in product(A, repeat=i)}
    rep = {sum(c) for c in product(A, repeat=h) if len(set(c)) < h}
    return short | rep


def test_07_negligible_sets(report):
    rng = np.random.default_rng(SEED + 7)
    worst = 0.0
    bad = []
    for _ in range(100):
        size = int(rng.integers(1, 11))
        h = int(rng.integers(1, 5))
        A = sorted(set(int(x) for x in rng.integers(0, 200, size=size)))
        ns = negligible_sets(A, h)
        union = ns.short_sums | ns.repeated_sums
        a = len(A)
        rhs = sum(a**i for i in range(1, h)) + sum(comb(a, k) for k in range(1, h)) * math.factorial(h)
        explicit = (h - 1 + math.factorial(h) * math.e) * a ** (h - 1)
        if union != _negligible_brute(A, h) or len(union) > rhs or len(union) > explicit:
            bad.append((A, h))
        assert negligible_constant(h) == h - 1 + math.factorial(h) * math.e
        worst = max(worst, len(union) / explicit)
    ok = not bad
    report(7, ok, f"100 random A: |B u R| within both majorants, max ratio to C|A|^(h-1) = {worst:.3g}")
    assert ok


def test_08_berry_esseen(report):
    rng = np.random.default_rng(SEED + 8)
    worst, worst_soft, bad, unnormalized, soft_fail = 0.0, 0.0, [], [], 0
    for _ in range(100):
        while True:
            A = sorted(set(int(x) for x in rng.integers(0, 40, size=int(rng.integers(2, 11)))))
            if len(A) >= 2:
                break
        h = int(rng.integers(4, 17))
        dist = sum_distribution(A, h)
        if sum(dist.as_dict().values()) != 1:
            unnormalized.append((A, h))
        hard = berry_esseen_check(A, h, C_BE_HARD)
        soft = berry_esseen_check(A, h, C_BE_DEFAULT)
        if not hard.holds:
            bad.append((A, h))
        soft_fail += not soft.holds
        worst = max(worst, hard.sup_distance / hard.rhs)
        worst_soft = max(worst_soft, soft.sup_distance / soft.rhs)
    ok = not bad and not unnormalized
    report(8, ok, f"100 random (A, h): distance / hard bound max {worst:.3g}; at C=0.56 max ratio "
                  f"{worst_soft:.3g} with {soft_fail} exceedances; all distributions sum to 1 exactly")
    assert ok


def test_09_f_sigma(report):
    rng = np.random.default_rng(SEED + 9)
    worst_sig, worst_val, worst_grid = 0.0, 0.0, 0.0
    for _ in range(20):
        n = float(10 ** rng.uniform(1, 12))
        h = int(rng.integers(2, 51))
        eps = float(rng.uniform(0, 0.45))
        sig, lf = minimize_f(n, h, eps)
        star = sigma_star(n, h, eps)
        closed = closed_form_log_min(n, h, eps)
        worst_sig = max(worst_sig, abs(sig - star) / star)
        worst_val = max(worst_val, abs(log_f_sigma(star, n, h, eps) - closed) / abs(closed))
        worst_grid = max(worst_grid, abs(lf - closed) / abs(closed))
    const = 0.5 * math.sqrt(2 * math.pi * math.e)
    ok = worst_sig <= 1e-6 and worst_val <= 1e-10 and worst_grid <= 1e-10 and abs(const - 2.066) <= 1e-3
    report(9, ok, f"20 random (n, h, eps): sigma rel err {worst_sig:.2g}, log f(sigma*) rel err {worst_val:.2g}, "
                  f"grid minimum rel err {worst_grid:.2g}; (1/2)sqrt(2 pi e) = {const:.6f}")
    assert ok


def test_10_bound_constants(report):
    printed = {"yu": ["0.0830", "0.0724", "0.0789", "0.0806", "0.0813"], "mpr": ["0.0221", "0.0115"]}
    yu = [f"{yu_epsilon(h):.4f}" for h in (2, 3, 5, 7, 9)]
    mpr = [f"{mpr_epsilon(h):.4f}" for h in (3, 4)]
    new = new_lower_constant(30, 0.1)
    old = math.factorial(30) / (1 - yu_epsilon(30))
    ok = yu == printed["yu"] and mpr == printed["mpr"] and new > old
    report(10, ok, f"yu {yu}, mpr {mpr}; h=30 eps=0.1: new/h! = {new / math.factorial(30):.5g} "
                   f"> yu/h! = {old / math.factorial(30):.5g}")
    assert ok

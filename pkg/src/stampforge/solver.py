"""Exact postage-stamp values F_h(n) and the dual maximal-reach problem.

Search space: subsets of [1, n] containing 1.  Cardinalities are tried
upward from the counting bound, so the first size that admits a basis is
the optimum.  Within a size the depth-first kernel in :mod:`kernels` adds
elements in increasing order, never past the smallest uncovered value, and
drops prefixes whose remaining multisets cannot cover what is missing.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .sumsets import DomainError, IntegerBasis, coverage

CEILINGS = {1: 10_000, 2: 200, 3: 60}
DEFAULT_CEILING = 40
REACH_LIMITS = (8, 4)
ORACLE_LIMITS = (30, 3)


def ceiling(h: int) -> int:
    return CEILINGS.get(h, DEFAULT_CEILING)


def multiset_count(k: int, h: int) -> int:
    """Nonempty multisets of size <= h from k elements: sum_i C(k+i-1, i)."""
    return comb(k + h, h) - 1


def counting_lower_exact(n: int, h: int) -> int:
    """Least k with sum_{i=1}^h C(k+i-1, i) >= n."""
    if n < 1 or h < 1:
        raise DomainError(f"need n >= 1 and h >= 1, got n={n}, h={h}")
    lo, hi = 0, 1
    while multiset_count(hi, h) < n:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if multiset_count(mid, h) >= n:
            hi = mid
        else:
            lo = mid
    return hi


def _caps(k: int, h: int) -> np.ndarray:
    # caps[j]: multisets of size <= h using at least one of the last k - j elements
    total = comb(k + h, h)
    return np.array([total - comb(j + h, h) for j in range(k + 1)], dtype=np.int64)


@dataclass(frozen=True)
class SearchConfig:
    n: int
    h: int
    node_budget: int | None = None
    tie_break: bool = True
    enforce_ceiling: bool = True

    def __post_init__(self):
        if self.n < 1 or self.h < 1:
            raise DomainError(f"need n >= 1 and h >= 1, got n={self.n}, h={self.h}")
        if self.enforce_ceiling and self.n > ceiling(self.h):
            raise DomainError(
                f"n={self.n} exceeds the exact-search ceiling {ceiling(self.h)} for h={self.h}"
            )


@dataclass
class SearchStats:
    optimum_size: int | None
    witness: IntegerBasis | None
    optimal: bool
    lower_bound: int
    nodes_expanded: int = 0
    prunes_by_bound: int = 0
    prunes_by_coverage: int = 0
    elapsed_time: float = 0.0
    per_size: dict = field(default_factory=dict)


def _cover(n, h, k, descending, budget):
    return kernels.stamp_search(n, h, k, n + 1, 0, descending, budget, _caps(k, h))


def exact_min_basis(cfg: SearchConfig) -> SearchStats:
    """F_h(n) over subsets of [1, n], with the lexicographically least witness."""
    n, h = cfg.n, cfg.h
    t0 = time.perf_counter()
    budget = cfg.node_budget if cfg.node_budget is not None else 2**62
    k0 = counting_lower_exact(n, h)
    stats = SearchStats(None, None, False, k0)
    for k in range(k0, n + 1):
        status, best, blen, _, nodes, prb, prg = _cover(n, h, k, True, budget - stats.nodes_expanded)
        stats.nodes_expanded += nodes
        stats.prunes_by_bound += prb
        stats.prunes_by_coverage += prg
        stats.per_size[k] = nodes
        if status == -1:
            break
        if status == 0:
            stats.lower_bound = k + 1
            continue
        elems = [int(x) for x in best[:blen]]
        if cfg.tie_break:
            status, best, blen, _, nodes, prb, prg = _cover(n, h, k, False, 2**62)
            stats.nodes_expanded += nodes
            elems = [int(x) for x in best[:blen]]
        basis = IntegerBasis(elems, n, h)
        if not coverage(basis).is_basis:  # pragma: no cover - kernel invariant
            raise AssertionError(f"search witness {elems} fails coverage")
        stats.optimum_size = len(elems)
        stats.witness = basis
        stats.optimal = True
        break
    if stats.witness is None:
        # budget ran out: fall back to the digit basis, restricted to [1, n]
        from .constructions import trivial_basis

        elems = [e for e in trivial_basis(n, max(h, 2)).elements if 1 <= e <= n] if h > 1 else list(range(1, n + 1))
        stats.witness = IntegerBasis(elems, n, h)
        stats.optimum_size = len(elems)
    stats.elapsed_time = time.perf_counter() - t0
    return stats


def min_basis_size(n: int, h: int, **kwargs) -> int:
    return exact_min_basis(SearchConfig(n, h, **kwargs)).optimum_size


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


def _naive_covers(A, n, h):
    reached = {0}
    hit = set()
    for _ in range(h):
        reached = {s + a for s in reached for a in A if s + a <= n}
        hit |= reached
    return all(x in hit for x in range(1, n + 1))


def oracle_min_basis(n: int, h: int, *, with_witness: bool = False):
    """F_h(n) by plain enumeration of subsets of [1, n] in increasing size.

    Shares no code with the search kernels; meant for cross-checking only.
    """
    if not 1 <= n <= ORACLE_LIMITS[0] or not 1 <= h <= ORACLE_LIMITS[1]:
        raise DomainError(f"oracle limited to n <= {ORACLE_LIMITS[0]}, h <= {ORACLE_LIMITS[1]}")
    for k in range(1, n + 1):
        for A in combinations(range(1, n + 1), k):
            if _naive_covers(A, n, h):
                return (k, A) if with_witness else k
    raise AssertionError("unreachable: [1, n] is always a basis")  # pragma: no cover


# ---------------------------------------------------------------------------
# maximal reach for a fixed size
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReachResult:
    k: int
    h: int
    n: int
    witness: IntegerBasis
    nodes: int


def extremal_reach(k: int, h: int, *, enforce_limits: bool = True) -> ReachResult:
    """Largest n such that some k-subset of [1, n] is an h-fold basis of [1, n].

    The witness is the lexicographically least k-set achieving it.
    """
    if k < 1 or h < 1:
        raise DomainError(f"need k >= 1 and h >= 1, got k={k}, h={h}")
    if enforce_limits and (k > REACH_LIMITS[0] or h > REACH_LIMITS[1]):
        raise DomainError(f"extremal_reach limited to k <= {REACH_LIMITS[0]}, h <= {REACH_LIMITS[1]}")
    width = multiset_count(k, h) + 2
    status, best, blen, reach, nodes, _, _ = kernels.stamp_search(
        0, h, k, width, 1, False, 2**62, _caps(k, h)
    )
    elems = [int(x) for x in best[:blen]]
    witness = IntegerBasis(elems, reach, h, canonical=False)
    if not coverage(witness).is_basis:  # pragma: no cover - kernel invariant
        raise AssertionError(f"reach witness {elems} fails coverage of [1, {reach}]")
    return ReachResult(k, h, int(reach), witness, int(nodes))

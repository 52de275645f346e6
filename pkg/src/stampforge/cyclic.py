"""Small 2-fold bases of Z/bZ for moduli b = (3u^2 + 3u + 1) v^2.

The size promise (3u+2)v + u comes without a construction, so bases are
found rather than built: a square-root baseline, a seeded local search, and
for small moduli an exhaustive search that also certifies the optimum.
Whatever the budget, the returned set has passed the cyclic coverage check.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from . import kernels
from .sumsets import CyclicBasis, DomainError, cyclic_coverage

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 20_000_000
DEFAULT_MOVE_BUDGET = 4_000_000
EXHAUSTIVE_LIMIT = 200
ACCEPT_WORSE = 0.02
DESCENT_MOVES = 20_000
RESTART_MOVES = 500_000
TEMPERATURE = 0.5


def jia_shen_modulus(u: int, v: int) -> int:
    return (3 * u * u + 3 * u + 1) * v * v


def jia_shen_target(u: int, v: int) -> int:
    return (3 * u + 2) * v + u


def baseline(b: int) -> tuple[int, ...]:
    """{0, ..., w-1} together with the multiples of w below b, w = ceil(sqrt b)."""
    if b < 1:
        raise DomainError(f"modulus must be positive, got {b}")
    w = isqrt(b - 1) + 1 if b > 1 else 1
    return tuple(sorted(set(range(w)) | set(range(0, b, w))))


def counting_floor(b: int) -> int:
    """Least k whose k singletons and k(k+1)/2 pair sums can reach b residues."""
    k = 1
    while k * (k + 3) // 2 < b:
        k += 1
    return k


def units(b: int) -> np.ndarray:
    return np.array([x for x in range(1, b) if gcd(x, b) == 1] or [1], dtype=np.int64)


@dataclass(frozen=True)
class CyclicSearchResult:
    basis: CyclicBasis
    target: int | None
    baseline_size: int
    optimum: int | None
    lower_bound: int
    nodes: int
    moves: int
    seed: int

    @property
    def target_met(self) -> bool | None:
        if self.target is None:
            return None
        return len(self.basis) <= self.target

    @property
    def proven_optimal(self) -> bool:
        return self.optimum is not None


def exhaustive_minimum(b: int, upper: int, node_budget: int):
    """Search sizes counting_floor(b) .. upper - 1 in increasing order.

    Returns ``(residues or None, optimum or None, lower_bound, nodes)``.
    ``optimum`` is set when the search settles the question: either a set is
    found at some size (all smaller sizes having been refuted) or every size
    below ``upper`` is refuted, making ``upper`` optimal.  ``lower_bound`` is
    the smallest size not refuted when the budget ran out.
    """
    u = units(b)
    used = 0
    for k in range(counting_floor(b), upper):
        status, elems, nodes = kernels.cyclic_exhaustive(b, k, u, node_budget - used)
        used += nodes
        log.debug("exhaustive b=%d k=%d status=%d nodes=%d", b, k, status, nodes)
        if status == 1:
            return tuple(int(x) for x in elems[:k]), k, k, used
        if status == -1:
            return None, None, k, used
    return None, upper, upper, used


def local_search(b: int, start, *, seed: int = 1, moves: int = DEFAULT_MOVE_BUDGET):
    rng = np.random.default_rng(seed)
    rand_i = rng.integers(0, 2**62, size=2 * moves, dtype=np.int64)
    rand_u = rng.random(moves)
    found, used = kernels.cyclic_local_search(
        b, np.asarray(start, dtype=np.int64), counting_floor(b), rand_i, rand_u, ACCEPT_WORSE, moves
    )
    return tuple(int(x) for x in found), int(used)


def _accept_table(temperature: float) -> np.ndarray:
    return np.exp(-np.arange(0, 48) / temperature)


def anneal(b: int, k: int, rng: np.random.Generator, moves: int):
    """One fixed-size annealing run from a random k-set; ``(residues or None, moves)``."""
    start = np.sort(rng.choice(b, size=k, replace=False))
    rand_i = rng.integers(0, 2**62, size=2 * moves, dtype=np.int64)
    rand_u = rng.random(moves)
    found, ok, used = kernels.cyclic_anneal(b, start, rand_i, rand_u, _accept_table(TEMPERATURE), moves)
    return (tuple(int(x) for x in found) if ok else None), int(used)


def shrink(b: int, best: tuple[int, ...], *, seed: int, moves: int):
    """Try ever smaller sizes by restarted annealing until the move budget is spent."""
    rng = np.random.default_rng([seed, b])
    floor = counting_floor(b)
    used = 0
    while len(best) > floor and used < moves:
        found, n = anneal(b, len(best) - 1, rng, min(RESTART_MOVES, moves - used))
        used += n
        if found is not None:
            best = found
    return best, used


def small_two_basis(b: int, *, target: int | None = None, seed: int = 1,
                    node_budget: int = DEFAULT_NODE_BUDGET,
                    move_budget: int = DEFAULT_MOVE_BUDGET,
                    exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> CyclicSearchResult:
    """Smallest 2-fold basis of Z/bZ this budget can find."""
    base = baseline(b)
    best, moves = local_search(b, base, seed=seed, moves=min(DESCENT_MOVES, move_budget))
    best, more = shrink(b, best, seed=seed, moves=move_budget - moves)
    moves += more
    optimum = None
    lower = counting_floor(b)
    nodes = 0
    if b <= exhaustive_limit and node_budget > 0:
        found, optimum, lower, nodes = exhaustive_minimum(b, len(best), node_budget)
        if found is not None:
            best = found
    if optimum is None and len(best) == counting_floor(b):
        optimum = len(best)
    basis = CyclicBasis(best, b, 2)
    if not cyclic_coverage(basis).is_basis:  # pragma: no cover - kernels guarantee this
        raise AssertionError(f"search returned a non-basis of Z/{b}Z: {best}")
    return CyclicSearchResult(
        basis=basis,
        target=target,
        baseline_size=len(base),
        optimum=optimum,
        lower_bound=optimum if optimum is not None else lower,
        nodes=nodes,
        moves=moves,
        seed=seed,
    )


def cyclic_two_basis(u: int, v: int, **kwargs) -> CyclicSearchResult:
    """Verified 2-fold basis of Z/bZ with b = (3u^2+3u+1)v^2.

    The result records whether the size (3u+2)v + u was reached.  Keyword
    arguments go to :func:`small_two_basis`.
    """
    if u < 1 or v < 1:
        raise DomainError(f"u and v must be positive, got u={u}, v={v}")
    b = jia_shen_modulus(u, v)
    return small_two_basis(b, target=jia_shen_target(u, v), **kwargs)

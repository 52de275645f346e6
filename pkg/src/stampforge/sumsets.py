"""Iterated sumsets, representation counts and basis verification.

Bases use "at most h" semantics throughout: ``x`` is covered when it is the
sum of between 1 and ``h`` elements, repetition allowed.  The empty sum never
counts, so 0 is a target like any other wherever it is in range.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import kernels


class DomainError(ValueError):
    """Raised when an input lies outside an operation's domain."""


def _sorted_distinct(values: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted({int(v) for v in values}))


@dataclass(frozen=True)
class IntegerBasis:
    """A candidate h-fold basis of [1, n].

    With ``canonical=True`` (the default) every element must lie in [0, n].
    Set it to ``False`` to admit arbitrary integers, e.g. the negative
    top-level elements produced by :func:`stampforge.constructions.lift_basis`.
    """

    elements: tuple[int, ...]
    n: int
    h: int
    canonical: bool = True

    def __post_init__(self):
        object.__setattr__(self, "elements", _sorted_distinct(self.elements))
        if self.n < 1 or self.h < 1:
            raise DomainError(f"need n >= 1 and h >= 1, got n={self.n}, h={self.h}")
        if not self.elements:
            raise DomainError("a basis of [1, n] cannot be empty")
        if self.canonical and (self.elements[0] < 0 or self.elements[-1] > self.n):
            raise DomainError(
                f"canonical basis elements must lie in [0, {self.n}]; "
                "pass canonical=False for arbitrary integers"
            )

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class CyclicBasis:
    """A candidate k-fold basis of Z/bZ."""

    residues: tuple[int, ...]
    modulus: int
    order: int

    def __post_init__(self):
        if self.modulus < 1 or self.order < 1:
            raise DomainError("modulus and order must be positive")
        res = _sorted_distinct(self.residues)
        if res and (res[0] < 0 or res[-1] >= self.modulus):
            raise DomainError(f"residues must lie in [0, {self.modulus - 1}]")
        object.__setattr__(self, "residues", res)

    def __len__(self):
        return len(self.residues)


@dataclass(frozen=True)
class CoverageReport:
    """Least summand counts over a contiguous block of targets.

    ``min_summands[j]`` belongs to target ``targets[j]``; 0 marks an
    uncovered target.
    """

    targets: range
    h: int
    min_summands: np.ndarray = field(repr=False)
    uncovered: tuple[int, ...]
    is_basis: bool

    @property
    def n(self) -> int:
        return self.targets.stop - 1

    def summands(self, x: int) -> int | None:
        """Least number of summands for ``x``; ``None`` when uncovered."""
        j = x - self.targets.start
        if not 0 <= j < len(self.targets):
            raise DomainError(f"{x} is not a target of this report")
        v = int(self.min_summands[j])
        return v or None

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.min_summands, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts) if v}


@dataclass(frozen=True)
class RepresentationTable:
    """Ordered-tuple counts r_{iA}(x) for every x."""

    i: int
    counts: dict[int, int]

    def __getitem__(self, x: int) -> int:
        return self.counts.get(x, 0)

    def total(self) -> int:
        return sum(self.counts.values())


# ---------------------------------------------------------------------------
# sumsets and representation counts
# ---------------------------------------------------------------------------


def iterated_sumset(A: Iterable[int], i: int) -> set[int]:
    """Return iA, the set of sums of exactly ``i`` elements of ``A``."""
    A = _sorted_distinct(A)
    if not A:
        raise DomainError("iterated_sumset of an empty set")
    if i < 1:
        raise DomainError(f"i must be positive, got {i}")
    base = A[0]
    offsets = [a - base for a in A]
    cur = 1
    for _ in range(i):
        nxt = 0
        for a in offsets:
            nxt |= cur << a
        cur = nxt
    out = set()
    pos = 0
    while cur:
        if cur & 1:
            out.add(pos + i * base)
        cur >>= 1
        pos += 1
    return out


def _convolution_power(A: tuple[int, ...], i: int) -> tuple[int, np.ndarray]:
    """Integer counts of ordered i-tuples, as (offset, counts) with exact ints."""
    base = A[0]
    span = A[-1] - base
    ind = np.zeros(span + 1, dtype=np.int64)
    ind[[a - base for a in A]] = 1
    exact = len(A) ** i < 2**62
    if not exact:
        ind = ind.astype(object)
    out = ind
    for _ in range(i - 1):
        out = np.convolve(out, ind)
    return i * base, out


def representation_table(A: Iterable[int], i: int) -> RepresentationTable:
    A = _sorted_distinct(A)
    if not A:
        raise DomainError("representation counts of an empty set")
    if i < 1:
        raise DomainError(f"i must be positive, got {i}")
    offset, counts = _convolution_power(A, i)
    nz = np.flatnonzero(counts)
    return RepresentationTable(i, {int(offset + j): int(counts[j]) for j in nz})


def representation_count(A: Iterable[int], i: int, x: int) -> int:
    """r_{iA}(x): the number of ordered i-tuples from ``A`` summing to ``x``."""
    return representation_table(A, i)[int(x)]


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------


def sum_window(elements: tuple[int, ...], lo: int, hi: int) -> tuple[int, int]:
    """Range that partial sums must visit to reach any target in [lo, hi].

    A representation can always be reordered so that every partial sum stays
    inside the returned range: add a nonnegative summand while at or below
    the target, a negative one while above it.  With a single sign the
    partial sums are monotone and the range closes up on the targets.
    """
    neg = min(0, elements[0])
    pos = max(0, elements[-1])
    if neg == 0 or pos == 0:
        return min(0, lo), max(0, hi)
    return min(0, lo + neg), max(0, hi + pos)


def window_levels(elements: tuple[int, ...], lo: int, hi: int, h: int) -> tuple[int, np.ndarray]:
    """Least summand counts for every slot of :func:`sum_window`.

    Returns ``(wlo, ms)`` with ``ms[x - wlo]`` the least count for sum ``x``.
    """
    wlo, whi = sum_window(elements, lo, hi)
    width = whi - wlo + 1
    shifts = np.asarray([e for e in elements if abs(e) < width], dtype=np.int64)
    ms = kernels.sumset_levels(shifts, -wlo, width, h)
    return wlo, ms


def interval_coverage(elements: Iterable[int], lo: int, hi: int, h: int) -> CoverageReport:
    """Coverage of every integer in [lo, hi] by sums of 1..h elements."""
    elements = _sorted_distinct(elements)
    if not elements:
        raise DomainError("coverage of an empty element set")
    if h < 1 or hi < lo:
        raise DomainError(f"need h >= 1 and lo <= hi, got h={h}, [{lo}, {hi}]")
    wlo, ms = window_levels(elements, lo, hi, h)
    block = ms[lo - wlo : hi - wlo + 1].copy()
    missing = np.flatnonzero(block == 0) + lo
    return CoverageReport(
        targets=range(lo, hi + 1),
        h=h,
        min_summands=block,
        uncovered=tuple(int(x) for x in missing),
        is_basis=missing.size == 0,
    )


def coverage(basis: IntegerBasis) -> CoverageReport:
    """Check whether ``basis`` is an h-fold basis of [1, n]."""
    return interval_coverage(basis.elements, 1, basis.n, basis.h)


def cyclic_coverage(basis: CyclicBasis) -> CoverageReport:
    """Check whether every residue mod b is a sum of 1..k residues of the basis."""
    b, k = basis.modulus, basis.order
    if not basis.residues:
        ms = np.zeros(b, dtype=np.int8)
    else:
        ms = kernels.cyclic_levels(np.asarray(basis.residues, dtype=np.int64), b, k)
    missing = np.flatnonzero(ms == 0)
    return CoverageReport(
        targets=range(0, b),
        h=k,
        min_summands=ms,
        uncovered=tuple(int(x) for x in missing),
        is_basis=missing.size == 0,
    )


def is_cyclic_basis(residues: Iterable[int], b: int, k: int) -> bool:
    res = np.asarray(sorted(set(residues)), dtype=np.int64)
    if res.size == 0:
        return False
    return bool(np.all(kernels.cyclic_levels(res, b, k)))


# ---------------------------------------------------------------------------
# explicit representations
# ---------------------------------------------------------------------------


class IntervalRepresenter:
    """Produces a shortest representation of any target in [lo, hi].

    Among shortest representations the one whose last-added summand is
    smallest is taken at every step, which makes the output deterministic.
    """

    def __init__(self, elements: Iterable[int], lo: int, hi: int, h: int):
        self.elements = _sorted_distinct(elements)
        self.lo, self.hi, self.h = lo, hi, h
        self.wlo, self.ms = window_levels(self.elements, lo, hi, h)

    def __call__(self, x: int) -> list[int]:
        if not self.lo <= x <= self.hi:
            raise DomainError(f"{x} outside [{self.lo}, {self.hi}]")
        j = int(self.ms[x - self.wlo])
        if j == 0:
            raise DomainError(f"{x} is not a sum of at most {self.h} elements")
        out = []
        y = x
        while j > 0:
            for e in self.elements:
                prev = y - e
                if j == 1:
                    if prev == 0:
                        break
                    continue
                idx = prev - self.wlo
                if 0 <= idx < self.ms.size and self.ms[idx] == j - 1:
                    break
            else:  # pragma: no cover - excluded by the window argument
                raise AssertionError(f"no predecessor for {y} at level {j}")
            out.append(e)
            y -= e
            j -= 1
        return sorted(out)


@lru_cache(maxsize=64)
def _suffix_reach(residues: tuple[int, ...], b: int, k: int) -> np.ndarray:
    """reach[idx, j, r]: r is a sum of exactly j residues from residues[idx:]."""
    m = len(residues)
    reach = np.zeros((m + 1, k + 1, b), dtype=bool)
    reach[:, 0, 0] = True
    for idx in range(m - 1, -1, -1):
        a = residues[idx]
        for j in range(1, k + 1):
            reach[idx, j] = reach[idx + 1, j] | np.roll(reach[idx, j - 1], a)
    return reach


def cyclic_representation(basis: CyclicBasis, x: int) -> list[int]:
    """Residues of the basis summing to ``x`` mod b, sorted ascending.

    If 0 is a residue the list has exactly k entries (short representations
    are padded with zeros); otherwise it has the least possible length.  Ties
    go to the lexicographically smallest sorted tuple.
    """
    b, k, res = basis.modulus, basis.order, basis.residues
    if not res:
        raise DomainError("empty cyclic basis")
    x %= b
    reach = _suffix_reach(res, b, k)
    if 0 in res:
        length = k if reach[0, k, x] else None
    else:
        length = next((j for j in range(1, k + 1) if reach[0, j, x]), None)
    if length is None:
        raise DomainError(f"{x} is not a sum of at most {k} residues mod {b}")
    out = []
    idx = 0
    rem = x
    for left in range(length, 0, -1):
        while not reach[idx, left - 1, (rem - res[idx]) % b]:
            idx += 1
        out.append(res[idx])
        rem = (rem - res[idx]) % b
    return out

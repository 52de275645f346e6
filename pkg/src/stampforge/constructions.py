"""Explicit bases of [1, n] and the carry-propagating decomposition.

Every function here verifies its output with the coverage engine before
returning it; a failed check raises :class:`ConstructionError`, never a
silently wrong basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cyclic import CyclicSearchResult, cyclic_two_basis
from .sumsets import (
    CyclicBasis,
    DomainError,
    IntegerBasis,
    IntervalRepresenter,
    coverage,
    cyclic_coverage,
    cyclic_representation,
    interval_coverage,
)


class ConstructionError(AssertionError):
    """A construction produced a set that failed verification."""

    def __init__(self, message, elements=()):
        super().__init__(message)
        self.elements = tuple(elements)


def ceil_root(x: int, r: int) -> int:
    """Smallest nonnegative integer y with y**r >= x."""
    if x <= 0:
        return 0
    if r == 1:
        return x
    y = max(1, int(round(x ** (1.0 / r))))
    while y**r < x:
        y += 1
    while y > 1 and (y - 1) ** r >= x:
        y -= 1
    return y


def trivial_basis(n: int, h: int) -> IntegerBasis:
    """Base-b digits basis: {0, n} plus every digit times every power of b.

    b is the least integer with b**h >= n, so the set has at most h*b elements.
    Elements above n (possible at the top power) are kept as the recipe
    prescribes; they are simply never used.
    """
    if h < 2:
        raise DomainError(f"trivial_basis needs h >= 2, got {h}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    b = ceil_root(n, h)
    elems = {0, n}
    for i in range(h):
        step = b**i
        elems.update(step * a for a in range(1, b))
    basis = IntegerBasis(tuple(elems), n, h, canonical=max(elems) <= n)
    if not coverage(basis).is_basis:
        raise ConstructionError(f"trivial basis for n={n}, h={h} failed coverage", basis.elements)
    return basis


def interval_basis(lo: int, hi: int, g: int) -> tuple[int, ...]:
    """A g-fold basis of the integer interval [lo, hi], lo <= 0 < hi.

    For g = 1 this is the interval itself; otherwise the trivial basis of
    [1, hi] plus the singletons lo, ..., 0.
    """
    if not lo <= 0 < hi:
        raise DomainError(f"need lo <= 0 < hi, got [{lo}, {hi}]")
    if g < 1:
        raise DomainError(f"g must be positive, got {g}")
    if g == 1:
        elems = set(range(lo, hi + 1))
    else:
        elems = set(trivial_basis(hi, g).elements) | set(range(lo, 1))
    out = tuple(sorted(elems))
    if not interval_coverage(out, lo, hi, g).is_basis:
        raise ConstructionError(f"interval basis of [{lo}, {hi}] with g={g} failed", out)
    return out


@dataclass(frozen=True)
class Certificate:
    """One explicit representation of ``target`` by basis elements."""

    target: int
    summands: tuple[int, ...]

    @property
    def order_used(self) -> int:
        return len(self.summands)

    def check(self, basis: IntegerBasis) -> bool:
        members = set(basis.elements)
        return (
            sum(self.summands) == self.target
            and self.order_used <= basis.h
            and all(s in members for s in self.summands)
        )


@dataclass(frozen=True)
class LiftedBasis:
    """Output of :func:`lift_basis` together with everything needed to decompose."""

    basis: IntegerBasis
    cyclic: CyclicBasis
    top: tuple[int, ...]
    g: int
    m: int
    t: int
    _top_rep: IntervalRepresenter = field(repr=False, compare=False)

    @property
    def modulus(self) -> int:
        return self.cyclic.modulus

    @property
    def k(self) -> int:
        return self.cyclic.order

    @property
    def reach(self) -> int:
        return self.m * self.modulus**self.t

    @property
    def size_bound(self) -> int:
        return self.t * len(self.cyclic) + len(self.top)

    def decompose(self, s: int) -> Certificate:
        return decompose(self, s)


def lift_basis(A: CyclicBasis, C, m: int, t: int, g: int, *, verify: bool = True) -> LiftedBasis:
    """Scale a k-fold basis of Z/bZ to the first t powers of b and cap it with C.

    ``C`` must be a g-fold basis of [-k, m] and ``m <= b - 1``.  The result is
    a (t*k + g)-fold basis of [1, m*b**t] of size at most t*|A| + |C|.
    """
    b, k = A.modulus, A.order
    C = tuple(sorted(set(int(c) for c in C)))
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if not 1 <= m <= b - 1:
        raise DomainError(f"need 1 <= m <= b - 1, got m={m}, b={b}")
    if not cyclic_coverage(A).is_basis:
        raise DomainError(f"{A.residues} is not a {k}-fold basis of Z/{b}Z")
    if not C or not interval_coverage(C, -k, m, g).is_basis:
        raise DomainError(f"top set is not a {g}-fold basis of [{-k}, {m}]")
    elems = set()
    for i in range(t):
        step = b**i
        elems.update(step * a for a in A.residues)
    top_step = b**t
    elems.update(top_step * c for c in C)
    reach = m * top_step
    basis = IntegerBasis(tuple(elems), reach, t * k + g, canonical=False)
    if verify and not coverage(basis).is_basis:
        raise ConstructionError(f"lifted basis of [1, {reach}] failed coverage", basis.elements)
    rep = IntervalRepresenter(C, -k, m, g)
    return LiftedBasis(basis, A, C, g, m, t, rep)


def decompose(lifted: LiftedBasis, s: int) -> Certificate:
    """Write s as at most t*k + g elements of the lifted basis.

    Digits of s in base b are corrected level by level: the residue
    a_i - carry is represented by k residues of the cyclic basis, whose
    integer sum overshoots by a new carry in [0, k - 1]; the final carry is
    absorbed by the top set.  Zero summands are dropped.
    """
    b, t, k = lifted.modulus, lifted.t, lifted.k
    if not 1 <= s <= lifted.reach:
        raise DomainError(f"{s} outside [1, {lifted.reach}]")
    summands = []
    rest = s
    carry = 0
    for i in range(t):
        rest, digit = divmod(rest, b)
        want = digit - carry
        alphas = cyclic_representation(lifted.cyclic, want)
        total = sum(alphas)
        carry, r = divmod(total - want, b)
        if r != 0 or not 0 <= carry <= k - 1:
            raise ConstructionError(f"carry out of range at level {i} for s={s}")
        step = b**i
        summands.extend(step * a for a in alphas if a)
    top = rest - carry
    step = b**t
    summands.extend(step * c for c in lifted._top_rep(top) if c)
    cert = Certificate(s, tuple(summands))
    if sum(cert.summands) != s or cert.order_used > lifted.basis.h:
        raise ConstructionError(f"invalid certificate for s={s}: {cert.summands}")
    return cert


# ---------------------------------------------------------------------------
# parameters for the cyclic-lift upper bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JiaShenParams:
    n: int
    h: int
    g: int
    t: int
    u: int
    v: int
    b: int
    m: int

    @property
    def target(self) -> int:
        """Size promised for a 2-fold basis of Z/bZ: (3u+2)v + u."""
        return (3 * self.u + 2) * self.v + self.u


def _modulus(u, v):
    return (3 * u * u + 3 * u + 1) * v * v


def jia_shen_params(n: int, h: int) -> JiaShenParams:
    """Integer parameters for the order-h lift with a 2-fold cyclic base.

    Real-valued choices are rounded up: v = ceil(n^(1/2h)),
    u = ceil(n^(1/2h) / sqrt 3), m = max(ceil(n^(g/h)), ceil(n / b^t)).
    v grows until m <= b - 1.
    """
    if h < 3:
        raise DomainError(f"the cyclic lift needs h >= 3, got {h}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    g = 1 if h % 2 else 2
    t = (h - g) // 2
    v = max(1, ceil_root(n, 2 * h))
    u = 1
    while (3 * u * u) ** h < n:
        u += 1
    m_root = max(1, ceil_root(n**g, h))
    for _ in range(64):
        b = _modulus(u, v)
        m = max(m_root, -(-n // b**t))
        if m <= b - 1:
            return JiaShenParams(n, h, g, t, u, v, b, m)
        v += 1
    raise DomainError(f"no admissible parameters for n={n}, h={h}")  # pragma: no cover


@dataclass(frozen=True)
class JiaShenBasis:
    """A verified order-h basis of [1, n] with its size accounting."""

    params: JiaShenParams
    lifted: LiftedBasis
    cyclic: CyclicSearchResult
    basis: IntegerBasis

    @property
    def ledger(self) -> dict:
        p = self.params
        cyc = len(self.cyclic.basis)
        top = len(self.lifted.top)
        return {
            "levels": p.t,
            "cyclic_size": cyc,
            "cyclic_target": p.target,
            "cyclic_target_met": cyc <= p.target,
            "top_size": top,
            "component_sum": p.t * cyc + top,
            "size": len(self.basis),
            "overlap": p.t * cyc + top - len(self.basis),
            "main_term_bound": p.t * p.target + p.g * p.m ** (1 / p.g) + 2,
            # +k+3 with k = 2 absorbs the ceilings in u, v, m and |C|
            "rounded_bound": p.t * p.target + p.g * p.m ** (1 / p.g) + 2 + 3,
        }


def jia_shen_basis(n: int, h: int, *, seed: int = 1, node_budget: int | None = None,
                   move_budget: int | None = None) -> JiaShenBasis:
    """Order-h basis of [1, n] from a searched 2-fold basis of Z/bZ.

    Pipeline: parameters -> cyclic 2-basis -> top interval basis of [-2, m]
    -> lift over t levels -> restrict to [1, n] and verify.
    """
    p = jia_shen_params(n, h)
    kwargs = {"seed": seed}
    if node_budget is not None:
        kwargs["node_budget"] = node_budget
    if move_budget is not None:
        kwargs["move_budget"] = move_budget
    cyc = cyclic_two_basis(p.u, p.v, **kwargs)
    top = interval_basis(-2, p.m, p.g)
    lifted = lift_basis(cyc.basis, top, p.m, p.t, p.g, verify=False)
    basis = IntegerBasis(lifted.basis.elements, n, h, canonical=False)
    if not coverage(basis).is_basis:
        raise ConstructionError(f"cyclic-lift basis for n={n}, h={h} failed coverage", basis.elements)
    return JiaShenBasis(p, lifted, cyc, basis)


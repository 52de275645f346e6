"""Closed-form bounds on F_h(n) and the normal-approximation machinery behind
the probabilistic lower bound.

Everything that can be exact is exact: sum distributions and moments use
integers and ``Fraction``; f(sigma) lives in log-space so that h! never
overflows.  The normal CDF comes from ``math.erfc``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, cos, exp, lgamma, log, pi, sqrt

import numpy as np

from .solver import counting_lower_exact
from .sumsets import DomainError, _convolution_power, _sorted_distinct, iterated_sumset

YU_EVEN = 0.0830
YU_ODD = {3: 0.0724, 5: 0.0789, 7: 0.0806, 9: 0.0813}
MPR_SMALL = {3: 0.0221, 4: 0.0115}
C_BE_DEFAULT = 0.56
C_BE_HARD = 10.0
SUPPORT_LIMIT = 10**7


# ---------------------------------------------------------------------------
# literature constants
# ---------------------------------------------------------------------------


def yu_epsilon(h: int) -> float:
    """epsilon_h in c_h >= h!/(1 - epsilon_h).

    Odd h beyond the tabulated 9 get the limit 0.0830; see :func:`yu_epsilon_is_exact`.
    """
    if h < 2:
        raise DomainError(f"h must be >= 2, got {h}")
    if h % 2 == 0:
        return YU_EVEN
    return YU_ODD.get(h, YU_EVEN)


def yu_epsilon_is_exact(h: int) -> bool:
    return h % 2 == 0 or h in YU_ODD


def _s(h: int) -> float:
    c = cos(pi / h)
    return c / (2 + c)


def mpr_epsilon(h: int) -> float:
    """The earlier epsilon_h: tabulated for h = 3, 4, then [f * s(h)]^h."""
    if h < 3:
        raise DomainError(f"h must be >= 3, got {h}")
    if h in MPR_SMALL:
        return MPR_SMALL[h]
    factor = 1.02 if h <= 7 else 1.1
    return (factor * _s(h)) ** h


def lower_constant(h: int, eps: float) -> float:
    """h!/(1 - eps): a lower bound form for liminf F_h(n)^h / n."""
    return math.factorial(h) / (1 - eps)


def new_lower_constant(h: int, eps: float = 0.0) -> float:
    """(1/2 - eps) h! sqrt(2 pi e)."""
    return (0.5 - eps) * math.factorial(h) * sqrt(2 * pi * math.e)


def new_upper_coefficient(h: int) -> float:
    """Coefficient of n^(1/h) in the cyclic-lift size, o(1) dropped."""
    if h % 2:
        return sqrt(3) * (h - 1) / 2 + 1
    return sqrt(3) * (h - 2) / 2 + 2


@dataclass(frozen=True)
class BoundReport:
    h: int
    n: int
    trivial_lower: float
    counting_lower_exact: int
    trivial_upper: float
    mpr_lower: float | None
    yu_lower: float
    new_lower: float
    new_upper: float
    eps: float
    yu_epsilon_exact: bool
    asymptotic: tuple[str, ...] = ("mpr_lower", "yu_lower", "new_lower", "new_upper")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["asymptotic"] = list(self.asymptotic)
        return d


def bound_report(h: int, n: int, eps: float = 0.0) -> BoundReport:
    """Every bound on F_h(n) at a concrete (h, n).

    Lower-bound constants c are converted to sizes as (c n)^(1/h).  Those
    forms and ``new_upper`` are asymptotic statements evaluated at finite n.
    """
    if h < 2 or n < 1:
        raise DomainError(f"need h >= 2 and n >= 1, got h={h}, n={n}")
    root = n ** (1 / h)
    fact = math.factorial(h)
    return BoundReport(
        h=h,
        n=n,
        trivial_lower=(fact * n) ** (1 / h),
        counting_lower_exact=counting_lower_exact(n, h),
        trivial_upper=h * root,
        mpr_lower=lower_constant(h, mpr_epsilon(h)) ** (1 / h) * root if h >= 3 else None,
        yu_lower=lower_constant(h, yu_epsilon(h)) ** (1 / h) * root,
        new_lower=new_lower_constant(h, eps) ** (1 / h) * root,
        new_upper=new_upper_coefficient(h) * root,
        eps=eps,
        yu_epsilon_exact=yu_epsilon_is_exact(h),
    )


# ---------------------------------------------------------------------------
# short and repeated sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NegligibleSets:
    short_sums: frozenset
    repeated_sums: frozenset
    bound_rhs: int

    @property
    def union_size(self) -> int:
        return len(self.short_sums | self.repeated_sums)


def negligible_sets(A, h: int) -> NegligibleSets:
    """Sums of fewer than h elements, and h-term sums with a repeated element.

    ``bound_rhs`` is sum_{i<h} |A|^i + sum_{k<h} C(|A|, k) h!.
    """
    A = _sorted_distinct(A)
    if not A:
        raise DomainError("empty set")
    if len(A) > 12 or not 1 <= h <= 5:
        raise DomainError(f"enumeration limited to |A| <= 12, 1 <= h <= 5; got |A|={len(A)}, h={h}")
    short = set()
    for i in range(1, h):
        short |= iterated_sumset(A, i)
    repeated = {sum(c) for c in combinations_with_replacement(A, h) if len(set(c)) < h}
    size = len(A)
    rhs = sum(size**i for i in range(1, h)) + sum(comb(size, k) for k in range(1, h)) * math.factorial(h)
    out = NegligibleSets(frozenset(short), frozenset(repeated), rhs)
    if out.union_size > rhs:  # pragma: no cover - a counterexample to the counting argument
        raise AssertionError(f"|B u R| = {out.union_size} exceeds {rhs} for A={A}, h={h}")
    return out


def negligible_constant(h: int) -> float:
    """C with |B u R| <= C |A|^(h-1): (h - 1) + h! e."""
    return (h - 1) + math.factorial(h) * math.e


# ---------------------------------------------------------------------------
# moments and exact sum distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentProfile:
    mean: Fraction
    variance: Fraction
    second_raw: Fraction
    third_abs_central: Fraction
    third_abs_raw: Fraction

    @property
    def sigma(self) -> float:
        return sqrt(self.variance)


def stat_profile(A) -> MomentProfile:
    """Moments of the uniform distribution on the distinct elements of A."""
    A = _sorted_distinct(A)
    if not A:
        raise DomainError("empty set")
    m = len(A)
    mean = Fraction(sum(A), m)
    return MomentProfile(
        mean=mean,
        variance=sum((Fraction(a) - mean) ** 2 for a in A) / m,
        second_raw=Fraction(sum(a * a for a in A), m),
        third_abs_central=sum(abs(Fraction(a) - mean) ** 3 for a in A) / m,
        third_abs_raw=Fraction(sum(abs(a) ** 3 for a in A), m),
    )


@dataclass(frozen=True)
class SumDistribution:
    """Law of X_1 + ... + X_h: P(Z = offset + j) = counts[j] / total."""

    offset: int
    counts: tuple[int, ...]
    total: int

    def __getitem__(self, z: int) -> Fraction:
        j = z - self.offset
        if 0 <= j < len(self.counts):
            return Fraction(self.counts[j], self.total)
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return {self.offset + j: Fraction(c, self.total) for j, c in enumerate(self.counts) if c}

    def is_normalized(self) -> bool:
        return sum(self.counts) == self.total


def sum_distribution(A, h: int) -> SumDistribution:
    A = _sorted_distinct(A)
    if not A:
        raise DomainError("empty set")
    if h < 1:
        raise DomainError(f"h must be positive, got {h}")
    if h * (A[-1] - A[0]) + 1 > SUPPORT_LIMIT:
        raise DomainError(f"support exceeds {SUPPORT_LIMIT} points")
    offset, counts = _convolution_power(A, h)
    return SumDistribution(int(offset), tuple(int(c) for c in counts), len(A) ** h)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / sqrt(2))


@dataclass(frozen=True)
class BerryEsseenResult:
    sup_distance: float
    argsup: float
    rhs: float
    holds: bool
    c_be: float
    rho: float
    sigma: float
    coarse_rho: float


def berry_esseen_check(A, h: int, c_be: float = C_BE_DEFAULT) -> BerryEsseenResult:
    """sup_x |P((Z - h mu)/(sigma sqrt h) <= x) - Phi(x)| against C rho / (sigma^3 sqrt h).

    The CDF of a lattice variable is a step function, so the supremum is
    attained at a jump, approached from the left or from the right.
    """
    prof = stat_profile(A)
    if prof.variance == 0:
        raise DomainError("degenerate distribution: variance is zero")
    dist = sum_distribution(A, h)
    sigma = prof.sigma
    scale = sigma * sqrt(h)
    center = h * prof.mean
    below = 0
    best, arg = 0.0, 0.0
    for j, c in enumerate(dist.counts):
        if not c:
            continue
        x = float((dist.offset + j - center)) / scale
        phi = normal_cdf(x)
        left = abs(below / dist.total - phi)
        below += c
        right = abs(below / dist.total - phi)
        d = max(left, right)
        if d > best:
            best, arg = d, x
    rho = float(prof.third_abs_central)
    rhs = c_be * rho / (sigma**3 * sqrt(h))
    max_abs = max(abs(a) for a in _sorted_distinct(A))
    return BerryEsseenResult(best, arg, rhs, best <= rhs, c_be, rho, sigma, float(max_abs) ** 3)


# ---------------------------------------------------------------------------
# the function minimised over sigma
# ---------------------------------------------------------------------------


def _check_f_args(n, h, eps):
    if h < 2:
        raise DomainError(f"h must be >= 2, got {h}")
    if not 0 <= eps < 0.5:
        raise DomainError(f"eps must lie in [0, 1/2), got {eps}")
    if n <= 0:
        raise DomainError(f"n must be positive, got {n}")


def log_f_sigma(sigma: float, n: float, h: int, eps: float) -> float:
    """log of sigma sqrt(2 pi h) h! exp(((1/2 - eps) n / (sigma sqrt h))^2 / 2)."""
    _check_f_args(n, h, eps)
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    z = (0.5 - eps) * n / (sigma * sqrt(h))
    return log(sigma) + 0.5 * log(2 * pi * h) + lgamma(h + 1) + 0.5 * z * z


def f_sigma(sigma: float, n: float, h: int, eps: float) -> float:
    """f itself; overflows to ``inf`` long before :func:`log_f_sigma` does."""
    try:
        return exp(log_f_sigma(sigma, n, h, eps))
    except OverflowError:
        return math.inf


def sigma_star(n: float, h: int, eps: float) -> float:
    """Stationary point (1/2 - eps) n / sqrt h, from f'(sigma) = 0."""
    _check_f_args(n, h, eps)
    return (0.5 - eps) * n / sqrt(h)


def closed_form_log_min(n: float, h: int, eps: float) -> float:
    """log((1/2 - eps) h! sqrt(2 pi e) n)."""
    _check_f_args(n, h, eps)
    return log(0.5 - eps) + lgamma(h + 1) + 0.5 * log(2 * pi * math.e) + log(n)


def minimize_f(n: float, h: int, eps: float, *, points: int = 257, rtol: float = 1e-12):
    """Grid search over log sigma with repeated zooming; returns (sigma, log f).

    Only the sigma-dependent part s + K e^(-2s), s = log sigma, is compared,
    which keeps rounding far below the target precision.  It is convex in s,
    so zooming on the best grid cell cannot lose the minimum.
    """
    _check_f_args(n, h, eps)
    if eps == 0.5:  # pragma: no cover - excluded above
        raise DomainError("eps = 1/2 makes f monotone")
    K = 0.5 * ((0.5 - eps) * n) ** 2 / h
    lo = log(max(n, 1.0)) - 40.0
    hi = log(max(n, 1.0)) + 40.0
    while hi - lo > rtol:
        s = np.linspace(lo, hi, points)
        g = s + K * np.exp(-2 * s)
        i = int(np.argmin(g))
        lo, hi = s[max(i - 1, 0)], s[min(i + 1, points - 1)]
    sig = exp(0.5 * (lo + hi))
    return sig, log_f_sigma(sig, n, h, eps)


# ---------------------------------------------------------------------------
# the side condition on the mean
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssumptionResult:
    mu: float
    threshold: float
    holds: bool
    reflected_holds: bool
    exact: bool


def assumption_check(A, n: int, h: int) -> AssumptionResult:
    """Is the mean of Z / (sigma sqrt h) at most n / (2 sqrt h sigma)?

    Multiplying through by sigma sqrt h, this is h * mean(A) <= n / 2, which
    is how it is decided (exactly).  When it fails the mirrored statement for
    n - Z, i.e. h * mean(A) >= n / 2, is reported: one of the two always holds.
    """
    prof = stat_profile(A)
    if prof.variance == 0:
        raise DomainError("degenerate distribution: variance is zero")
    scale = prof.sigma * sqrt(h)
    lhs = h * prof.mean
    half = Fraction(n, 2)
    return AssumptionResult(
        mu=float(lhs) / scale,
        threshold=n / (2 * scale),
        holds=lhs <= half,
        reflected_holds=lhs >= half,
        exact=True,
    )

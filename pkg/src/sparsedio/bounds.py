"""Upper bounds on ``M0(X)``, sinc constants and sum-distinct diagnostics.

Logarithms are base two throughout. Every decision is made on integers or
rationals; the few real-valued quantities (the Eisenbrand-Shmonin bound and
the displayed knapsack threshold) are reporting aids only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .instance import Instance
from .linalg import column_rank, height, ternary_kernel


def _require_nonempty(x: Instance):
    if x.t == 0:
        raise ValueError("empty instance")


def bound_rank_height(x: Instance) -> int:
    """``r(X) + floor(log2 H(X))``."""
    _require_nonempty(x)
    hv = height(x)
    return hv.rank + hv.floor_log2_h


def bound_norm(x: Instance) -> int:
    """``floor(2d log2(2 sqrt(d) M))`` with ``M = ||X||_inf``.

    The argument equals ``log2((4 d M^2)^d)``, so the floor is a bit length.
    """
    m = x.max_norm
    if m < 1:
        raise ValueError("need ||X||_inf >= 1")
    return ((4 * x.d * m * m) ** x.d).bit_length() - 1


def bound_knapsack_positive(x: Instance) -> int:
    """``1 + floor(log2 max(X))`` for positive knapsacks."""
    _require_nonempty(x)
    x.require_knapsack()
    return max(x.values).bit_length()


def bound_eisenbrand_shmonin(x: Instance) -> float:
    """Reference bound ``2d log2(4d M)``, rounded to 6 decimals. Not exact."""
    m = x.max_norm
    if m < 1:
        raise ValueError("need ||X||_inf >= 1")
    return round(2 * x.d * math.log2(4 * x.d * m), 6)


@dataclass(frozen=True)
class SincValue:
    n: int
    value: Fraction


@lru_cache(maxsize=None)
def _sigma(n: int) -> Fraction:
    total = sum(
        (-1) ** k * math.comb(n, k) * (n - 2 * k) ** (n - 1)
        for k in range(n // 2 + 1)
        if n - 2 * k > 0
    )
    return Fraction(total, 2 ** (n - 1) * math.factorial(n - 1))


def sinc_sigma(n: int) -> SincValue:
    """``(2/pi) * integral_0^inf (sin x / x)^n dx`` as an exact rational.

    Uses the alternating sum over ``k < n/2`` of
    ``(-1)^k C(n,k) (n-2k)^(n-1)`` divided by ``2^(n-1) (n-1)!``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return SincValue(n, _sigma(n))


@dataclass(frozen=True)
class SumDistinct:
    is_sum_distinct: bool
    lower_bound_ok: bool
    kernel: Optional[tuple[int, ...]]


def sum_distinct_check(x: Instance) -> SumDistinct:
    """Whether all ``2^t`` subset sums differ, plus the sinc lower bound on the max.

    A set is sum-distinct exactly when it has no ternary kernel vector.
    ``lower_bound_ok`` reports ``max(X) > sigma_t * 2^(t-1)``, which must hold
    for every sum-distinct set.
    """
    _require_nonempty(x)
    x.require_knapsack()
    vals = x.values
    if len(set(vals)) != len(vals):
        raise ValueError("sum-distinct check needs distinct generators")
    kernel = ternary_kernel(x)
    t = x.t
    ok = max(vals) > _sigma(t) * 2 ** (t - 1)
    return SumDistinct(kernel is None, ok, kernel)


@dataclass(frozen=True)
class SincThreshold:
    """``t > 1 - log2(sigma_t) + log2(M)``, decided as ``M < sigma_t 2^(t-1)``."""

    holds: bool
    bound: Fraction  # sigma_t * 2^(t-1)
    approx_value: float  # 1 - log2(sigma_t) + log2(M)


def sinc_reduction_threshold(x: Instance) -> SincThreshold:
    _require_nonempty(x)
    if x.d != 1:
        raise ValueError("threshold is defined for d = 1")
    t = x.t
    m = x.max_norm
    bound = _sigma(t) * 2 ** (t - 1)
    approx = 1 - math.log2(_sigma(t)) + math.log2(m)
    return SincThreshold(m < bound, bound, round(approx, 6))


def _enlarged(a: Sequence[Sequence[int]], c: Sequence[int]) -> list[list[int]]:
    rows = [list(r) for r in a]
    t = len(rows[0]) if rows else 0
    if any(len(r) != t for r in rows) or len(c) != t:
        raise ValueError("shape mismatch between A and c")
    cols = [[r[i] for r in rows] + [c[i]] for i in range(t)]
    return [col for col in cols if any(col)]


def ip_sparsity_bound(a: Sequence[Sequence[int]], c: Sequence[int]) -> int:
    """Support bound for some optimum of ``min c^T x, Ax = b, x in Z^t_{>=0}``.

    ``(d + 1) + floor(log2 H)`` of the columns ``(a_i; c_i)``. Zero columns do
    not change ``H`` and are dropped.
    """
    d = len(a)
    cols = _enlarged(a, c)
    if not cols:
        return d + 1
    return d + 1 + height(cols).floor_log2_h


def mip_sparsity_bound(a: Sequence[Sequence[int]], c: Sequence[int], b_mat: Sequence[Sequence[int]]) -> int:
    """The integer-program bound plus ``rank(B)`` for the continuous part."""
    if len(a) != len(b_mat):
        raise ValueError("A and B must have the same number of rows")
    return ip_sparsity_bound(a, c) + column_rank(b_mat)


@dataclass(frozen=True)
class SparsityBounds:
    rank_height_bound: int
    norm_bound: int
    knapsack_bound: Optional[int]
    es_bound: float
    sinc_threshold: Optional[Fraction]
    rank: int
    h_squared: Fraction
    max_norm: int


def bounds_report(x: Instance) -> SparsityBounds:
    _require_nonempty(x)
    hv = height(x)
    return SparsityBounds(
        rank_height_bound=hv.rank + hv.floor_log2_h,
        norm_bound=bound_norm(x),
        knapsack_bound=bound_knapsack_positive(x) if x.is_knapsack() else None,
        es_bound=bound_eisenbrand_shmonin(x),
        sinc_threshold=_sigma(x.t) * 2 ** (x.t - 1) if x.d == 1 else None,
        rank=hv.rank,
        h_squared=hv.h_squared,
        max_norm=x.max_norm,
    )

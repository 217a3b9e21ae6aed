"""Eventual periodicity of ``m0`` for positive knapsacks.

Past the threshold ``N0`` (the largest Frobenius-type gap over all subsets)
``m0`` repeats with period ``L = lcm(X)``, and ``L`` is the minimal such
period. This turns ``M0(X)`` into a finite computation over ``[0, N0 + L]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .instance import Instance, InvariantViolation
from .solver import m0_table, members, semigroup_table


@dataclass(frozen=True)
class FrobeniusData:
    subset: tuple[int, ...]
    g: int
    frobenius: Optional[int]  # None when Sg(gcd) \ Sg(subset) is empty


def _first_full_run(table: np.ndarray, run: int) -> Optional[int]:
    """Start of the first run of ``run`` consecutive True entries."""
    if len(table) < run:
        return None
    window = np.convolve(table.astype(np.int32), np.ones(run, dtype=np.int32), mode="valid")
    hits = np.flatnonzero(window == run)
    return int(hits[0]) if len(hits) else None


def _frobenius_coprime(ys: list[int]) -> Optional[int]:
    a = min(ys)
    if a == 1:
        return None
    pair = [p * q - p - q for p, q in combinations(ys, 2) if math.gcd(p, q) == 1]
    ceiling = min(pair) + a + 1 if pair else 2 * a * max(ys)
    while True:
        table = semigroup_table([(y,) for y in ys], (ceiling,))
        start = _first_full_run(table, a)
        if start is not None:
            return start - 1
        ceiling *= 2


def frobenius(values: Sequence[int], subset: Optional[Sequence[int]] = None) -> FrobeniusData:
    """Largest multiple of ``gcd(values)`` outside ``Sg(values)``.

    The representability table reaches past the best coprime-pair bound;
    without a coprime pair it doubles until ``min`` consecutive members
    appear, after which every larger value is a member.
    """
    values = [int(v) for v in values]
    if not values or any(v <= 0 for v in values):
        raise ValueError("frobenius needs a nonempty list of positive integers")
    g = math.gcd(*values)
    f = _frobenius_coprime([v // g for v in values])
    subset = tuple(range(len(values))) if subset is None else tuple(subset)
    return FrobeniusData(subset, g, None if f is None else f * g)


def subset_frobenius(x: Instance) -> list[FrobeniusData]:
    x.require_knapsack()
    vals = x.values
    return [
        frobenius([vals[i] for i in sub], sub)
        for j in range(1, x.t + 1)
        for sub in combinations(range(x.t), j)
    ]


def n0_threshold(x: Instance) -> int:
    """``max F(X')`` over nonempty subsets; ``-1`` when no subset has a gap."""
    return max((f.frobenius for f in subset_frobenius(x) if f.frobenius is not None), default=-1)


def lcm_period(x: Instance) -> int:
    x.require_knapsack()
    return math.lcm(*x.values)


def _start(n0: int) -> int:
    # b = 0 is excluded: m0(0) = 0 while m0(L) = 1.
    return max(n0, 0) + 1


def verify_period(x: Instance, window: int) -> tuple[bool, Optional[int]]:
    """Check ``m0(b + L) == m0(b)`` for ``b`` in ``(N0, N0 + window]``, ``b >= 1``.

    Returns ``(True, None)`` or ``(False, first_bad_b)``.
    """
    x.require_knapsack()
    if window < 1:
        raise ValueError("window must be positive")
    n0 = n0_threshold(x)
    L = lcm_period(x)
    lo, hi = _start(n0), n0 + window
    if hi < lo:
        return True, None
    table = m0_table(x, (hi + L,))
    bad = np.flatnonzero(table[lo : hi + 1] != table[lo + L : hi + L + 1])
    return (True, None) if len(bad) == 0 else (False, lo + int(bad[0]))


def _divisors(n: int) -> list[int]:
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def _minimal_period(seq: np.ndarray, span: int, candidates: Sequence[int]) -> Optional[int]:
    for p in candidates:
        if np.array_equal(seq[:span], seq[p : p + span]):
            return p
    return None


def _tail_window(x: Instance) -> tuple[np.ndarray, int]:
    """``m0`` on ``[s, s + 3L)`` with ``s`` the first point of the periodic regime."""
    L = lcm_period(x)
    lo = _start(n0_threshold(x))
    table = m0_table(x, (lo + 3 * L,))
    return table[lo : lo + 3 * L], L


def _period_over(seq: np.ndarray, L: int) -> int:
    # seq covers 3L points, so any p <= L is tested on a span of 2L.
    if not np.array_equal(seq[: 2 * L], seq[L : 3 * L]):
        raise InvariantViolation("sequence is not L-periodic past N0")
    p = _minimal_period(seq, 2 * L, _divisors(L))
    assert p is not None  # L is among the divisors and passed above
    return p


def minimal_eventual_period(x: Instance) -> int:
    """Smallest ``p`` with ``m0(b + p) == m0(b)`` for all ``b`` in ``(N0, N0 + 2L]``.

    Once ``L`` passes on that window, any passing ``p <= L`` makes
    ``gcd(p, L)`` pass as well (Fine and Wilf: the window is long enough), so
    only divisors of ``L`` need testing.
    """
    seq, L = _tail_window(x)
    return _period_over(seq, L)


def unit_locus_period(x: Instance) -> int:
    """Minimal period of the indicator of ``{b : m0(b) = 1}`` past ``N0``."""
    seq, L = _tail_window(x)
    return _period_over(seq == 1, L)


@dataclass(frozen=True)
class EventualBound:
    m: int
    N0_bound: int
    witness_subsets: tuple[tuple[int, ...], ...]
    verified: bool


def eventual_bound(x: Instance) -> EventualBound:
    """Eventual bound on ``m0`` from the smallest relatively prime subsets.

    ``m`` is the least size of a subset with gcd 1 and ``N0_bound`` the largest
    ``b`` lying in none of their semigroups. ``verified`` records that
    ``m0 <= m`` on ``(N0_bound, N0_bound + L]`` and that ``m`` is attained there.
    """
    x.require_knapsack()
    vals = x.values
    if math.gcd(*vals) != 1:
        raise ValueError("eventual bound needs gcd(X) = 1")
    for m in range(1, x.t + 1):
        subs = [s for s in combinations(range(x.t), m) if math.gcd(*(vals[i] for i in s)) == 1]
        if subs:
            break
    frob = [frobenius([vals[i] for i in s]).frobenius for s in subs]
    if all(f is None for f in frob):
        n0 = -1
    else:
        ceiling = max(f for f in frob if f is not None) + 1
        union = np.zeros(ceiling + 1, dtype=bool)
        for s in subs:
            union |= semigroup_table([(vals[i],) for i in s], (ceiling,))
        outside = np.flatnonzero(~union)
        n0 = int(outside[-1]) if len(outside) else -1

    L = lcm_period(x)
    lo = max(n0, 0) + 1
    table = m0_table(x, (lo + L,))
    tail = table[lo : lo + L]
    verified = bool(members(tail).all() and (tail <= m).all() and (tail == m).any())
    return EventualBound(m, n0, tuple(subs), verified)


@dataclass(frozen=True)
class KnapsackMax:
    value: int
    argmax: tuple[int, ...]


def M0_knapsack_exact(x: Instance) -> KnapsackMax:
    """Exact ``M0(X)``: the maximum of ``m0`` over members of ``[0, N0 + L]``.

    Beyond ``N0`` the values repeat with period ``L``, so one period past the
    threshold plus the exhaustive head covers every member.
    """
    x.require_knapsack()
    hi = max(n0_threshold(x), 0) + lcm_period(x)
    table = m0_table(x, (hi,))
    mask = members(table)
    best = int(table[mask].max())
    return KnapsackMax(best, tuple(int(b) for b in np.flatnonzero(mask & (table == best))))


@dataclass(frozen=True)
class PeriodReport:
    L: int
    N0_period: int
    verified_window: tuple[int, int]
    verified: bool
    first_violation: Optional[int]
    minimal_period_observed: int
    eventual_bound_m: Optional[int]
    N0_bound: Optional[int]
    M0_exact: int
    M0_argmax: tuple[int, ...]


def period_report(x: Instance, window: Optional[int] = None) -> PeriodReport:
    """Everything above for one knapsack; ``window`` defaults to ``2L``."""
    x.require_knapsack()
    L = lcm_period(x)
    n0 = n0_threshold(x)
    window = 2 * L if window is None else window
    ok, bad = verify_period(x, window)
    if math.gcd(*x.values) == 1:
        eb = eventual_bound(x)
        m, n0b = eb.m, eb.N0_bound
    else:
        m = n0b = None
    top = M0_knapsack_exact(x)
    return PeriodReport(
        L=L,
        N0_period=n0,
        verified_window=(_start(n0), n0 + window),
        verified=ok,
        first_violation=bad,
        minimal_period_observed=minimal_eventual_period(x),
        eventual_bound_m=m,
        N0_bound=n0b,
        M0_exact=top.value,
        M0_argmax=top.argmax,
    )

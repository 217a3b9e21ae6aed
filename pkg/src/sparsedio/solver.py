"""Exact membership and minimal-support computations for ``Sg(X)``.

All routines work inside a box ``[0, b]`` of ``Z^d_{>=0}`` and need
componentwise non-negative generators, which keeps every coefficient bounded.
Reachability over a box is stored as a boolean numpy array; closing it under
``+x`` is done with doubling shifts, so a generator costs ``O(log(b/x))``
vectorized passes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .instance import Instance, Solution, as_rhs

# int16 fill value marking "not a member" inside m0 tables.
_ABSENT = np.iinfo(np.int16).max


def _closure(reach: np.ndarray, x: Sequence[int]) -> None:
    """In place: ``reach |= reach - k*x`` for every ``k >= 0`` within the box."""
    step = list(x)
    shape = reach.shape
    while all(s < n for s, n in zip(step, shape)):
        src = tuple(slice(0, n - s) for s, n in zip(step, shape))
        dst = tuple(slice(s, n) for s, n in zip(step, shape))
        reach[dst] |= reach[src]
        step = [2 * s for s in step]


def _origin(shape: tuple[int, ...]) -> np.ndarray:
    reach = np.zeros(shape, dtype=bool)
    reach[(0,) * len(shape)] = True
    return reach


def semigroup_table(gens: Sequence[Sequence[int]], box: Sequence[int]) -> np.ndarray:
    """Boolean array over ``[0, box]`` marking the members of ``Sg(gens)``."""
    shape = tuple(int(c) + 1 for c in box)
    reach = _origin(shape)
    for g in gens:
        _closure(reach, g)
    return reach


def _check_domain(x: Instance, b: tuple[int, ...]):
    x.require_nonnegative()
    if any(c < 0 for c in b):
        raise ValueError("right-hand side must be componentwise non-negative")


def _lex_min_solution(gens: Sequence[Sequence[int]], b: tuple[int, ...]) -> Optional[list[int]]:
    """Lexicographically smallest ``lambda >= 0`` with ``sum(lambda_i g_i) = b``."""
    shape = tuple(c + 1 for c in b)
    k = len(gens)
    suffix = [None] * (k + 1)
    suffix[k] = _origin(shape)
    for i in range(k - 1, -1, -1):
        reach = suffix[i + 1].copy()
        _closure(reach, gens[i])
        suffix[i] = reach
    if not suffix[0][b]:
        return None
    coeffs = []
    rem = list(b)
    for i, g in enumerate(gens):
        m = 0
        while not suffix[i + 1][tuple(rem)]:
            rem = [r - c for r, c in zip(rem, g)]
            m += 1
        coeffs.append(m)
    return coeffs


def is_member(x: Instance, b) -> tuple[bool, Optional[Solution]]:
    """Decide ``b in Sg(X)``; the witness is the lexicographically smallest solution."""
    b = as_rhs(x, b)
    _check_domain(x, b)
    coeffs = _lex_min_solution(x.generators, b)
    if coeffs is None:
        return False, None
    return True, Solution(tuple(coeffs))


def min_support_solution(x: Instance, b) -> Optional[Solution]:
    """A solution of minimal support, or None if ``b`` is not a member.

    Supports are tried by increasing size and, within a size, in
    lexicographic order of index sets. The coefficients on the winning support
    are the lexicographically smallest ones.
    """
    b = as_rhs(x, b)
    _check_domain(x, b)
    if not any(b):
        return Solution((0,) * x.t)
    usable = [i for i, g in enumerate(x.generators) if all(c <= bc for c, bc in zip(g, b))]
    for j in range(1, len(usable) + 1):
        for sub in combinations(usable, j):
            gens = [x.generators[i] for i in sub]
            if not semigroup_table(gens, b)[b]:
                continue
            coeffs = [0] * x.t
            for i, c in zip(sub, _lex_min_solution(gens, b)):
                coeffs[i] = c
            return Solution(tuple(coeffs))
    return None


def m0(x: Instance, b) -> Optional[int]:
    """Minimal support size over ``P_X(b)``, or None when ``b`` is not in ``Sg(X)``."""
    sol = min_support_solution(x, b)
    return None if sol is None else sol.size


def m0_table(x: Instance, box: Sequence[int], workers: int = 1) -> np.ndarray:
    """``m0`` at every point of ``[0, box]`` as an int16 array.

    Non-members hold ``np.iinfo(np.int16).max``; use :func:`table_value` or
    :func:`members` rather than reading that sentinel directly. Every subset
    of generators is visited once, depth first, and each point keeps the size
    of the smallest subset whose semigroup contains it. With ``workers > 1``
    the top-level branches run in threads and are merged with an elementwise
    minimum, which does not depend on scheduling.
    """
    x.require_nonnegative()
    shape = tuple(int(c) + 1 for c in box)
    if len(shape) != x.d or any(n < 1 for n in shape):
        raise ValueError(f"bad box {tuple(box)} for d = {x.d}")
    gens = [g for g in x.generators if all(c < n for c, n in zip(g, shape))]
    t = len(gens)

    def branch(first: int) -> np.ndarray:
        best = np.full(shape, _ABSENT, dtype=np.int16)
        stack = [(first, _origin(shape), 0)]
        while stack:
            i, base, size = stack.pop()
            reach = base.copy()
            _closure(reach, gens[i])
            np.minimum(best, np.where(reach, size + 1, _ABSENT).astype(np.int16), out=best)
            for k in range(t - 1, i, -1):
                stack.append((k, reach, size + 1))
        return best

    result = np.full(shape, _ABSENT, dtype=np.int16)
    result[(0,) * x.d] = 0
    if workers > 1 and t > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(branch, range(t)))
    else:
        parts = [branch(i) for i in range(t)]
    for part in parts:
        np.minimum(result, part, out=result)
    return result


def table_value(table: np.ndarray, b) -> Optional[int]:
    v = int(table[b])
    return None if v == _ABSENT else v


def members(table: np.ndarray) -> np.ndarray:
    return table != _ABSENT


@dataclass
class SweepResult:
    """Values of ``m0`` over a domain; ``None`` marks non-members."""

    domain: str
    values: dict = field(default_factory=dict)
    observed_period: Optional[tuple[int, int]] = None

    def member_keys(self) -> list:
        return [k for k, v in self.values.items() if v is not None]


def m0_sweep(x: Instance, b_max: int, workers: int = 1) -> SweepResult:
    """``m0(b)`` for ``b = 0..b_max`` on a positive knapsack."""
    x.require_knapsack()
    if b_max < 0:
        raise ValueError("b_max must be non-negative")
    table = m0_table(x, (b_max,), workers=workers)
    return SweepResult(
        domain=f"b in [0, {b_max}]",
        values={b: table_value(table, b) for b in range(b_max + 1)},
    )


def observed_period(seq: Sequence) -> Optional[tuple[int, int]]:
    """Smallest period ``p`` (then earliest start ``s``) seen in ``seq``.

    Positions are 1-based. The tail from ``s`` must satisfy
    ``seq[i] == seq[i + p]`` and ``s + 2p <= len(seq)``, so that more than two
    full periods are observed.
    """
    n = len(seq)
    for p in range(1, n // 2 + 1):
        last_bad = -1
        for i in range(n - p):
            if seq[i] != seq[i + p]:
                last_bad = i
        s = last_bad + 2
        if s + 2 * p <= n:
            return s, p
    return None


def dilation_sequence(x: Instance, b, lambda_max: int) -> SweepResult:
    """``m0(lambda * b)`` for ``lambda = 1..lambda_max`` and the period seen in it.

    The reported period is an observation over the window, not a proof.
    """
    b = as_rhs(x, b)
    ok, _ = is_member(x, b)
    if not ok:
        raise ValueError(f"{b} is not in the semigroup")
    if lambda_max < 1:
        raise ValueError("lambda_max must be positive")
    table = m0_table(x, tuple(lambda_max * c for c in b))
    values = {lam: table_value(table, tuple(lam * c for c in b)) for lam in range(1, lambda_max + 1)}
    return SweepResult(
        domain=f"lambda * {b} for lambda in [1, {lambda_max}]",
        values=values,
        observed_period=observed_period([values[k] for k in range(1, lambda_max + 1)]),
    )


def M0_box(x: Instance, box: Sequence[int]) -> int:
    """Largest ``m0`` over members inside ``[0, box]``.

    A lower bound on ``M0(X)`` in general; exact once the box holds a
    maximizing right-hand side.
    """
    table = m0_table(x, box)
    return int(table[members(table)].max())

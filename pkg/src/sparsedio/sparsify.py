"""Constructive support reduction.

Two reduction steps are provided. The general one subtracts a multiple of a
ternary kernel vector supported on the current support. The knapsack one
looks for a ternary vector in the congruence lattice modulo the largest
support element, lifts it to an integer relation and moves along it until a
coordinate vanishes. Iterating either step while its existence condition holds
drives the support below the matching upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .instance import Instance, InvariantViolation, Solution
from .linalg import siegel_condition, ternary_kernel, ternary_search


@dataclass(frozen=True)
class Step:
    kernel: tuple[int, ...]
    step: int
    zeroed: tuple[int, ...]


@dataclass
class ReductionTrace:
    initial: Solution
    final: Solution
    steps: list[Step] = field(default_factory=list)


def _check_solution(x: Instance, sol: Solution, rhs=None) -> tuple[int, ...]:
    if len(sol.coeffs) != x.t:
        raise ValueError(f"solution has {len(sol.coeffs)} entries, instance has {x.t} generators")
    b = sol.rhs(x)
    if rhs is not None:
        rhs = (rhs,) if isinstance(rhs, int) else tuple(rhs)
        if b != rhs:
            raise ValueError(f"solution sums to {b}, not {rhs}")
    return b


def _finish(x: Instance, old: Solution, new: list[int], kernel, k: int, b) -> tuple[Solution, Step]:
    if any(c < 0 for c in new):
        raise InvariantViolation(f"reduction produced negative coefficients {new}")
    sol = Solution(tuple(new))
    if sol.rhs(x) != b:
        raise InvariantViolation("reduction changed the right-hand side")
    if sol.size >= old.size:
        raise InvariantViolation("reduction did not shrink the support")
    zeroed = tuple(i for i in old.support if new[i] == 0)
    return sol, Step(tuple(kernel), k, zeroed)


def reduce_support_once(x: Instance, sol: Solution, rhs=None) -> Optional[tuple[Solution, Step]]:
    """One ternary-kernel step on ``supp(sol)``, or None if no kernel vector exists.

    The step size is the smallest coefficient touched by the kernel vector,
    and the vector is oriented so that this coefficient drops to zero.
    """
    b = _check_solution(x, sol, rhs)
    supp = sol.support
    y = ternary_kernel(x, restrict_to=supp)
    if y is None:
        return None
    lam = sol.coeffs
    touched = [i for i in supp if y[i]]
    i_min = min(touched, key=lambda i: lam[i])
    if y[i_min] < 0:
        y = tuple(-c for c in y)
    k = lam[i_min]
    new = [c - k * yi for c, yi in zip(lam, y)]
    return _finish(x, sol, new, y, k, b)


def sparsify(x: Instance, sol: Solution, rhs=None) -> tuple[Solution, ReductionTrace]:
    """Reduce while ``|Y| > r(Y) + log2 H(Y)`` holds for the current support ``Y``.

    The final support has at most ``r(X) + floor(log2 H(X))`` elements.
    """
    b = _check_solution(x, sol, rhs)
    trace = ReductionTrace(initial=sol, final=sol)
    cur = sol
    while cur.size and siegel_condition(x.subset(cur.support)):
        out = reduce_support_once(x, cur)
        if out is None:
            raise InvariantViolation(f"no ternary kernel on support {cur.support} despite the height condition")
        cur, step = out
        trace.steps.append(step)
    if cur.rhs(x) != b:
        raise InvariantViolation("right-hand side changed")
    trace.final = cur
    return cur, trace


def _knapsack_gate(x: Instance, sol: Solution) -> bool:
    supp = sol.support
    return len(supp) >= 2 and max(x.generators[i][0] for i in supp) < 1 << (len(supp) - 1)


def knapsack_reduce_once(x: Instance, sol: Solution, rhs=None) -> Optional[tuple[Solution, Step]]:
    """One congruence-lattice step for a positive knapsack.

    Returns None unless the support ``Y`` has ``|Y| >= 2`` and
    ``max(Y) < 2^(|Y|-1)``; under that gate a ternary vector in the
    congruence lattice modulo ``max(Y)`` always exists.
    """
    x.require_knapsack()
    b = _check_solution(x, sol, rhs)
    if not _knapsack_gate(x, sol):
        return None
    lam = sol.coeffs
    vals = x.values
    supp = sol.support
    top = max(supp, key=lambda i: vals[i])
    others = [i for i in supp if i != top]
    modulus = vals[top]
    u = ternary_search([vals[i] for i in others], modulus=modulus)
    if u is None:
        raise InvariantViolation(f"no ternary congruence vector modulo {modulus} on support {supp}")

    p = [0] * x.t
    for i, c in zip(others, u):
        p[i] = c
    p[top] = -sum(c * vals[i] for i, c in zip(others, u)) // modulus

    # u is canonical (first nonzero is +1), so ``plus`` is never empty.
    plus = [i for i in others if p[i] > 0]
    minus = [i for i in others if p[i] < 0]
    k = min(lam[i] for i in plus)
    new = [c - k * pi for c, pi in zip(lam, p)]
    if new[top] < 0:
        # Mixed signs: moving the other way stays in the simplex instead.
        k = min(lam[i] for i in minus)
        new = [c + k * pi for c, pi in zip(lam, p)]
        p = [-c for c in p]
    return _finish(x, sol, new, p, k, b)


def knapsack_sparsify(x: Instance, sol: Solution, rhs=None) -> tuple[Solution, ReductionTrace]:
    """Reduce while ``max(Y) < 2^(|Y|-1)``; ends with ``|Y| <= 1 + floor(log2 max(X))``."""
    x.require_knapsack()
    b = _check_solution(x, sol, rhs)
    trace = ReductionTrace(initial=sol, final=sol)
    cur = sol
    while _knapsack_gate(x, cur):
        out = knapsack_reduce_once(x, cur)
        if out is None:
            raise InvariantViolation("knapsack step failed under its own gate")
        cur, step = out
        trace.steps.append(step)
    if cur.rhs(x) != b:
        raise InvariantViolation("right-hand side changed")
    trace.final = cur
    return cur, trace

"""Sparse non-negative integer solutions of linear Diophantine systems.

Exact bounds on the minimal support, constructive sparsification, and
periodicity of the minimal-support function for knapsacks.
"""

from .instance import Instance, InvariantViolation, RankDeficientError, Solution
from .linalg import HeightValue, height, ternary_kernel
from .solver import m0, min_support_solution, is_member

__all__ = [
    "Instance",
    "Solution",
    "HeightValue",
    "InvariantViolation",
    "RankDeficientError",
    "height",
    "ternary_kernel",
    "m0",
    "min_support_solution",
    "is_member",
]

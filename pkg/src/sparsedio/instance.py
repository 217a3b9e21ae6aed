"""Problem data: generator sets and non-negative coefficient vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class RankDeficientError(ValueError):
    """Columns that were required to be linearly independent are not."""


class InvariantViolation(RuntimeError):
    """A step that a theorem guarantees to succeed did not.

    Raised only on implementation bugs; never part of normal control flow.
    """


@dataclass(frozen=True)
class Instance:
    """A finite multiset of nonzero integer vectors in ``d`` coordinates.

    The generators are the columns of the constraint matrix ``A`` (equivalently
    the rows of ``W``). Order matters for indexing and tie-breaking.
    """

    d: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be positive, got {self.d}")
        gens = tuple(tuple(int(c) for c in g) for g in self.generators)
        for i, g in enumerate(gens):
            if len(g) != self.d:
                raise ValueError(f"generator {i} has length {len(g)}, expected {self.d}")
            if not any(g):
                raise ValueError(f"generator {i} is zero")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, vectors: Iterable[Sequence[int]]) -> Instance:
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            raise ValueError("cannot infer dimension of an empty instance")
        return cls(len(vectors[0]), tuple(vectors))

    @classmethod
    def knapsack(cls, values: Iterable[int]) -> Instance:
        return cls(1, tuple((int(v),) for v in values))

    @property
    def t(self) -> int:
        return len(self.generators)

    @property
    def values(self) -> list[int]:
        """Scalar generators of a one-dimensional instance."""
        if self.d != 1:
            raise ValueError("scalar values only exist for d = 1")
        return [g[0] for g in self.generators]

    @property
    def max_norm(self) -> int:
        return max((abs(c) for g in self.generators for c in g), default=0)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for g in self.generators for c in g)

    def is_knapsack(self) -> bool:
        return self.d == 1 and all(g[0] > 0 for g in self.generators)

    def subset(self, indices: Iterable[int]) -> Instance:
        return Instance(self.d, tuple(self.generators[i] for i in indices))

    def combine(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        """Return ``sum(coeffs[i] * x_i)``."""
        if len(coeffs) != self.t:
            raise ValueError(f"expected {self.t} coefficients, got {len(coeffs)}")
        out = [0] * self.d
        for c, g in zip(coeffs, self.generators):
            if c:
                for j, gj in enumerate(g):
                    out[j] += c * gj
        return tuple(out)

    def require_nonnegative(self):
        if not self.is_nonnegative():
            raise ValueError("generators must be componentwise non-negative")

    def require_knapsack(self):
        if not self.is_knapsack():
            raise ValueError("expected d = 1 with strictly positive generators")


@dataclass(frozen=True)
class Solution:
    """Non-negative integer coefficients ``lambda`` for the generators."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if any(c < 0 for c in coeffs):
            raise ValueError("coefficients must be non-negative")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c)

    @property
    def size(self) -> int:
        return len(self.support)

    def rhs(self, x: Instance) -> tuple[int, ...]:
        return x.combine(self.coeffs)


def as_rhs(x: Instance, b) -> tuple[int, ...]:
    """Normalize a right-hand side given as an int (d = 1) or a sequence."""
    if isinstance(b, int):
        b = (b,)
    b = tuple(int(c) for c in b)
    if len(b) != x.d:
        raise ValueError(f"right-hand side has length {len(b)}, expected {x.d}")
    return b

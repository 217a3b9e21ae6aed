"""Exact integer linear algebra for lattice heights and ternary relations.

Matrices are plain sequences of integer rows. Everything here works on
Python ints, so there is no size limit besides memory and no rounding.
The generator set ``X`` is viewed through ``W(X)``, the ``t x d`` matrix whose
rows are the generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .instance import Instance, RankDeficientError

Matrix = Sequence[Sequence[int]]

# Upper limit on the size of a suffix-sum table in the ternary search. Beyond
# it the search falls back to interval pruning for the leading positions.
_REACH_CAP = 1 << 20


def _rows(x) -> list[list[int]]:
    if isinstance(x, Instance):
        return [list(g) for g in x.generators]
    return [list(r) for r in x]


def _shape(m: list[list[int]]) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    return rows, cols


def transpose(m: Matrix) -> list[list[int]]:
    return [list(c) for c in zip(*m)]


def _bareiss(a: list[list[int]]) -> tuple[int, list[int]]:
    """Fraction-free row echelon reduction in place.

    Returns the rank and the pivot columns. After the call the pivot entry of
    the last pivot row is (up to sign) a leading minor of the input.
    """
    nrows, ncols = _shape(a)
    rank = 0
    prev = 1
    pivots = []
    for col in range(ncols):
        if rank == nrows:
            break
        p = next((i for i in range(rank, nrows) if a[i][col]), None)
        if p is None:
            continue
        if p != rank:
            a[p], a[rank] = a[rank], a[p]
        piv_row = a[rank]
        piv = piv_row[col]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[col]
            for j in range(col + 1, ncols):
                row[j] = (piv * row[j] - f * piv_row[j]) // prev
            row[col] = 0
        prev = piv
        pivots.append(col)
        rank += 1
    return rank, pivots


def column_rank(m: Matrix) -> int:
    """Rank over the rationals (row rank equals column rank)."""
    return _bareiss(_rows(m))[0]


def determinant(m: Matrix) -> int:
    a = _rows(m)
    n, cols = _shape(a)
    if n != cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def gram_determinant(v: Matrix) -> int:
    """``det(V^T V)`` for a matrix with linearly independent columns."""
    rows = _rows(v)
    cols = transpose(rows)
    gram = [[sum(p * q for p, q in zip(ci, cj)) for cj in cols] for ci in cols]
    det = determinant(gram)
    if det == 0:
        raise RankDeficientError("columns are linearly dependent")
    return det


def maximal_minor_gcd(v: Matrix) -> int:
    """gcd of all ``r x r`` minors of a ``t x r`` matrix of rank ``r``.

    This equals the index in ``Z^r`` of the lattice spanned by the rows, which
    is computed by integer column-style elimination instead of enumerating the
    ``C(t, r)`` minors.
    """
    pool = _rows(v)
    _, r = _shape(pool)
    index = 1
    for j in range(r):
        live = [row for row in pool if row[j]]
        rest = [row for row in pool if not row[j]]
        if not live:
            raise RankDeficientError("columns are linearly dependent")
        # Euclid on coordinate j until a single row carries it.
        while len(live) > 1:
            live.sort(key=lambda row: abs(row[j]))
            head = live[0]
            nxt = [head]
            for row in live[1:]:
                q = row[j] // head[j]
                row = [a - q * b for a, b in zip(row, head)]
                (nxt if row[j] else rest).append(row)
            live = nxt
        index *= abs(live[0][j])
        pool = rest
    return index


def independent_columns(w: Matrix) -> list[int]:
    """Greedy choice of a maximal set of linearly independent columns."""
    cols = transpose(_rows(w))
    chosen: list[int] = []
    for j, c in enumerate(cols):
        if column_rank([cols[i] for i in chosen] + [c]) > len(chosen):
            chosen.append(j)
    return chosen


def floor_log2_sqrt(q) -> int:
    """The unique ``k`` with ``4**k <= q < 4**(k+1)``, in integer arithmetic."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"expected a positive rational, got {q}")
    n, d = q.numerator, q.denominator

    def at_least(k: int) -> bool:
        return d << (2 * k) <= n if k >= 0 else d <= n << (-2 * k)

    k = (n.bit_length() - d.bit_length()) // 2
    while not at_least(k):
        k -= 1
    while at_least(k + 1):
        k += 1
    return k


@dataclass(frozen=True)
class HeightValue:
    """``H(X)^2`` as an exact rational together with ``floor(log2 H(X))``."""

    h_squared: Fraction
    floor_log2_h: int
    rank: int
    gram: int
    g: int

    def as_ratio(self) -> str:
        return f"{self.h_squared.numerator}/{self.h_squared.denominator}"


def height(x) -> HeightValue:
    """Determinant of the lattice of integer points in the column span of ``W``.

    Uses ``H^2 = det(V^T V) / g^2`` with ``V`` any maximal set of independent
    columns of ``W`` and ``g`` the gcd of its maximal minors. Zero rows of ``W``
    do not change the value. ``x`` is an :class:`Instance` or a list of vectors.
    """
    w = _rows(x)
    if not w:
        raise ValueError("height of an empty instance")
    cols = independent_columns(w)
    if not cols:
        # W = 0: the lattice is {0}, whose determinant is 1 by convention.
        return HeightValue(Fraction(1), 0, 0, 1, 1)
    v = [[row[j] for j in cols] for row in w]
    gram = gram_determinant(v)
    g = maximal_minor_gcd(v)
    h2 = Fraction(gram, g * g)
    return HeightValue(h2, floor_log2_sqrt(h2), len(cols), gram, g)


def siegel_condition(x) -> bool:
    """Exact test of ``|X| > r(X) + log2 H(X)``, i.e. ``H^2 < 4^(t - r)``."""
    w = _rows(x)
    hv = height(w)
    q = hv.h_squared
    return q.numerator < q.denominator << (2 * (len(w) - hv.rank))


def _encode(vectors: list[list[int]]) -> list[int]:
    """Injective linear map from the box of reachable ternary sums to ints."""
    d = len(vectors[0])
    if d == 1:
        return [v[0] for v in vectors]
    span = max(sum(abs(v[j]) for v in vectors) for j in range(d))
    base = 2 * span + 1
    return [sum(c * base**j for j, c in enumerate(v)) for v in vectors]


def ternary_search(values: Sequence[int], modulus: Optional[int] = None) -> Optional[tuple[int, ...]]:
    """Canonical nonzero ``y`` in ``{-1,0,1}^n`` with ``sum(y_i v_i) == 0``.

    With ``modulus`` the equation is taken modulo it. Candidates are
    normalized so that the first nonzero entry is ``+1``; among those the
    lexicographically smallest under ``-1 < 0 < 1`` is returned.

    The search is depth first in that order. Tables of the sums reachable by
    each suffix make every explored branch feasible, so a witness costs
    ``O(n)`` steps once the tables exist.
    """
    if modulus is not None:
        norm = lambda s: s % modulus  # noqa: E731
    else:
        norm = lambda s: s  # noqa: E731
    vals = [norm(v) for v in values]
    n = len(vals)

    reach: list[Optional[set]] = [None] * (n + 1)
    nontrivial: list[Optional[bool]] = [None] * (n + 1)
    reach[n] = {0}
    nontrivial[n] = False
    for i in range(n - 1, -1, -1):
        nxt = reach[i + 1]
        v = vals[i]
        nontrivial[i] = nontrivial[i + 1] or norm(-v) in nxt
        cur = set(nxt)
        cur.update(norm(s + v) for s in nxt)
        cur.update(norm(s - v) for s in nxt)
        if len(cur) > _REACH_CAP:
            break
        reach[i] = cur

    tail_abs = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail_abs[i] = tail_abs[i + 1] + abs(vals[i])

    y = [0] * n

    def dfs(i: int, s: int, started: bool) -> bool:
        if i == n:
            return started and s == 0
        table = reach[i]
        if table is not None:
            if started and norm(-s) not in table:
                return False
            if not started and nontrivial[i] is False:
                return False
        elif modulus is None and abs(s) > tail_abs[i]:
            return False
        for c in ((-1, 0, 1) if started else (0, 1)):
            y[i] = c
            if dfs(i + 1, norm(s + c * vals[i]), started or c != 0):
                return True
        y[i] = 0
        return False

    return tuple(y) if dfs(0, 0, False) else None


def ternary_kernel(x, restrict_to: Optional[Iterable[int]] = None) -> Optional[tuple[int, ...]]:
    """Nonzero ``y`` in ``{-1,0,1}^t`` with ``sum(y_i x_i) = 0``, or None.

    When ``restrict_to`` is given, ``y`` is supported inside those indices.
    The result is canonical (see :func:`ternary_search`), so repeated calls
    and callers in different threads agree on the witness.
    """
    w = _rows(x)
    idx = sorted(set(range(len(w)) if restrict_to is None else restrict_to))
    sub = [w[i] for i in idx]
    if not sub:
        return None
    found = ternary_search(_encode(sub))
    if found is None:
        return None
    y = [0] * len(w)
    for i, c in zip(idx, found):
        y[i] = c
    return tuple(y)

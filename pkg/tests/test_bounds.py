import math
from fractions import Fraction
from itertools import combinations

import pytest

import oracles
from sparsedio import Instance
from sparsedio.bounds import (
    bound_eisenbrand_shmonin,
    bound_knapsack_positive,
    bound_norm,
    bound_rank_height,
    bounds_report,
    ip_sparsity_bound,
    sinc_reduction_threshold,
    mip_sparsity_bound,
    sinc_sigma,
    sum_distinct_check,
)

K = Instance.knapsack
V = Instance.of


@pytest.mark.parametrize("x, expected", [
    (V([(1, 1), (2, 1)]), 2),
    (V([(1, 1), (2, 1), (4, 1)]), 3),
    (V([(1, 0, 1), (2, 0, 1), (0, 1, 1), (0, 2, 1)]), 4),
    (K([4, 6, 15]), 5),
])
def test_bound_rank_height(x, expected):
    assert bound_rank_height(x) == expected


@pytest.mark.parametrize("x, expected", [
    (K([4, 6, 15]), 9),
    (K([1]), 2),
    (V([(1, 1), (2, 1), (4, 1)]), 14),
    (V([(1, 1), (2, 1)]), 10),
])
def test_bound_norm(x, expected):
    assert bound_norm(x) == expected
    # float cross-check away from integer boundaries
    real = 2 * x.d * math.log2(2 * math.sqrt(x.d) * x.max_norm)
    if abs(real - round(real)) > 1e-9:
        assert expected == math.floor(real)


@pytest.mark.parametrize("values, expected", [([4, 6, 15], 4), ([1], 1), ([2**10], 11), ([7, 2**40], 41)])
def test_bound_knapsack_positive(values, expected):
    assert bound_knapsack_positive(K(values)) == expected


@pytest.mark.parametrize("x", [V([(1, 1)]), K([3, -2])])
def test_bound_knapsack_positive_rejects(x):
    with pytest.raises(ValueError):
        bound_knapsack_positive(x)


@pytest.mark.parametrize("x, expected", [
    (K([4, 6, 15]), 11.813781),
    (K([1]), 4.0),
    (V([(1, 1), (2, 1), (4, 1)]), 20.0),
])
def test_bound_eisenbrand_shmonin(x, expected):
    assert bound_eisenbrand_shmonin(x) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_norm_bound_improves_reference(d):
    # log2(2 sqrt d) < log2(4d) <=> 4d < 16 d^2, exact for every d >= 1.
    assert 4 * d < 16 * d * d
    if d == 1:
        for m in range(2, 101):
            x = K([m])
            assert bound_norm(x) < bound_eisenbrand_shmonin(x)


SIGMA = {1: Fraction(1), 2: Fraction(1), 3: Fraction(3, 4), 4: Fraction(2, 3),
         5: Fraction(115, 192), 6: Fraction(11, 20), 7: Fraction(5887, 11520), 8: Fraction(151, 315)}
# numerators / denominators of sigma_n / 2 (OEIS A049330 / A049331)
HALF_NUM = [1, 1, 3, 1, 115, 11, 5887, 151]
HALF_DEN = [2, 2, 8, 3, 384, 40, 23040, 630]


@pytest.mark.parametrize("n", sorted(SIGMA))
def test_sinc_sigma_exact(n):
    s = sinc_sigma(n)
    assert s.value == SIGMA[n]
    half = s.value / 2
    assert (half.numerator, half.denominator) == (HALF_NUM[n - 1], HALF_DEN[n - 1])


@pytest.mark.parametrize("n", [1, 3, 4, 6, 9])
def test_sinc_sigma_quadrature(n):
    assert abs(float(sinc_sigma(n).value) - oracles.sinc_quadrature(n)) < 1e-6


def test_sinc_sigma_decreasing():
    vals = [sinc_sigma(n).value for n in range(1, 14)]
    assert all(0 < v <= 1 for v in vals)
    assert all(vals[i] > vals[i + 1] for i in range(1, 12))


def test_sinc_sigma_rejects_zero():
    with pytest.raises(ValueError):
        sinc_sigma(0)


@pytest.mark.parametrize("values, expected", [([1, 2, 4], True), ([1, 2, 3], False), ([3, 5, 6, 7], True)])
def test_sum_distinct(values, expected):
    res = sum_distinct_check(K(values))
    assert res.is_sum_distinct is expected
    assert oracles.subset_sums_distinct(values) is expected
    if expected:
        assert res.lower_bound_ok


def test_sum_distinct_rejects_non_knapsack():
    with pytest.raises(ValueError):
        sum_distinct_check(V([(1, 2)]))
    with pytest.raises(ValueError):
        sum_distinct_check(K([2, 2]))


def test_sum_distinct_exhaustive_small():
    strict_failures = []
    for t in range(1, 5):
        for values in combinations(range(1, 16), t):
            res = sum_distinct_check(K(values))
            assert res.is_sum_distinct == oracles.subset_sums_distinct(values)
            if res.is_sum_distinct:
                assert max(values) >= sinc_sigma(t).value * 2 ** (t - 1)
                if not res.lower_bound_ok:
                    strict_failures.append(values)
    # Equality cases of the sinc bound; strict inequality holds from t = 3 on.
    assert strict_failures == [(1,), (1, 2)]


@pytest.mark.parametrize("values, holds", [([4, 6, 15], False), ([1] * 5, True), ([1, 2, 4], False)])
def test_sinc_reduction_threshold(values, holds):
    thr = sinc_reduction_threshold(K(values))
    assert thr.holds is holds
    t = len(values)
    real = 1 - math.log2(float(SIGMA[t])) + math.log2(max(values))
    assert thr.approx_value == pytest.approx(real, abs=1e-6)
    assert (t > real) is holds


@pytest.mark.parametrize("a, c, expected", [
    ([[4, 6, 15]], [1, 0, 0], 4),
    ([[1, 0], [0, 1]], [0, 0], 3),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 0, 0], 4),
    ([[1, 2, 4]], [0, 0, 0], 4),
])
def test_ip_sparsity_bound(a, c, expected):
    assert ip_sparsity_bound(a, c) == expected


def test_ip_sparsity_bound_shape_mismatch():
    with pytest.raises(ValueError):
        ip_sparsity_bound([[1, 2]], [1])


@pytest.mark.parametrize("a, c, b, expected", [
    ([[4, 6, 15]], [1, 0, 0], [[0]], 4),
    ([[4, 6, 15]], [1, 0, 0], [[1]], 5),
    ([[1, 0], [0, 1]], [0, 0], [[1, 0], [0, 1]], 5),
])
def test_mip_sparsity_bound(a, c, b, expected):
    assert mip_sparsity_bound(a, c, b) == expected


def test_mip_sparsity_bound_shape_mismatch():
    with pytest.raises(ValueError):
        mip_sparsity_bound([[1, 2]], [0, 0], [[1], [1]])


def test_bounds_report():
    rep = bounds_report(K([4, 6, 15]))
    assert (rep.rank_height_bound, rep.norm_bound, rep.knapsack_bound) == (5, 9, 4)
    assert rep.es_bound == pytest.approx(11.813781, abs=1e-6)
    assert rep.sinc_threshold == 3

    rep = bounds_report(V([(1, 1), (2, 1)]))
    assert (rep.rank_height_bound, rep.norm_bound, rep.knapsack_bound) == (2, 10, None)
    assert rep.sinc_threshold is None

    rep = bounds_report(K([1]))
    assert (rep.rank_height_bound, rep.norm_bound, rep.knapsack_bound) == (1, 2, 1)


import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancepareto.chance import (
    ConfidenceLevel,
    chance_value,
    f_lambda,
    item_scores,
    lambda_breakpoints,
    normal_isf,
    normal_quantile,
)
from chancepareto.objectives import Solution
from conftest import make_instance, random_instances
from oracles import bisect_quantile, bisect_upper_quantile, normal_cdf

BETAS = (0.2, 0.1, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14, 1e-16)

# Frozen from bisect_quantile / bisect_upper_quantile in tests/oracles.py.
Q_0975 = 1.9599639845400318
Q_TAIL_1E16 = 8.222082216130424


def test_median_is_zero():
    assert normal_quantile(0.5) == 0.0
    assert ConfidenceLevel.from_alpha(0.5).k_alpha == 0.0


def test_frozen_values():
    assert abs(normal_quantile(0.975) - Q_0975) <= 1e-10
    assert abs(normal_isf(1e-16) - Q_TAIL_1E16) <= 1e-10
    assert abs(ConfidenceLevel.from_beta(1e-16).k_alpha - Q_TAIL_1E16) <= 1e-10


def test_float_alpha_near_one_matches_oracle_on_same_input():
    alpha = 1 - 1e-16  # rounds to 1 - 2**-53
    assert abs(normal_quantile(alpha) - bisect_quantile(alpha)) <= 1e-10


@pytest.mark.parametrize("beta", BETAS)
def test_grid_against_bisection(beta):
    assert abs(normal_isf(beta) - bisect_upper_quantile(beta)) <= 1e-10
    assert abs(normal_quantile(1 - beta) - bisect_quantile(1 - beta)) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-300, 1 - 1e-16))
def test_antisymmetry(a):
    b = 1.0 - a
    if 1.0 - b == a:
        assert normal_quantile(b) == -normal_quantile(a)


def test_monotone():
    ps = np.linspace(1e-6, 1 - 1e-6, 20001)
    q = [normal_quantile(p) for p in ps]
    assert all(x < y for x, y in zip(q, q[1:]))


def test_composition_with_cdf():
    for alpha in np.linspace(0.5, 1 - 1e-12, 500):
        assert abs(normal_cdf(normal_quantile(alpha)) - alpha) <= 1e-9


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
def test_domain(bad):
    with pytest.raises(ValueError):
        normal_quantile(bad)


def test_confidence_level_domain():
    with pytest.raises(ValueError):
        ConfidenceLevel.from_alpha(0.4)
    with pytest.raises(ValueError):
        ConfidenceLevel.from_beta(0.6)


def test_chance_value_hand_example():
    # mu(x) = 10, v(x) = 4, K = 2 -> 14
    inst = make_instance([4, 6, 100], [1, 3, 100])
    cl = ConfidenceLevel(alpha=0.97, k_alpha=2.0, beta=0.03)
    assert chance_value(inst, Solution([1, 1, 0]), cl) == 14.0


def test_chance_value_empty_and_median(small_instance):
    cl = ConfidenceLevel.from_beta(1e-8)
    assert chance_value(small_instance, Solution.zeros(8), cl) == 0.0
    x = Solution([1, 0, 1, 1, 0, 0, 1, 0])
    assert chance_value(small_instance, x, ConfidenceLevel.from_alpha(0.5)) == sum(
        small_instance.mu[[0, 2, 3, 6]]
    )


def test_chance_value_increasing_in_alpha(small_instance):
    x = Solution.ones(8)
    vals = [chance_value(small_instance, x, ConfidenceLevel.from_beta(b)) for b in (0.5,) + BETAS]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_f_lambda_examples():
    inst = make_instance([5, 2], [1, 3])
    x = Solution([1, 0])
    assert f_lambda(inst, x, 0.4) == pytest.approx(2.6)
    assert f_lambda(inst, x, 0.0) == 1.0
    assert f_lambda(inst, x, 1.0) == 5.0
    assert f_lambda(inst, 1, 0.5) == 2.5
    with pytest.raises(ValueError):
        f_lambda(inst, x, 1.5)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1), st.lists(st.booleans(), min_size=8, max_size=8))
def test_f_lambda_linear(lam, bits):
    inst = random_instances(1, (8, 8), seed=5)[0]
    total = sum(f_lambda(inst, i, lam) for i in range(8) if bits[i])
    assert f_lambda(inst, Solution(bits), lam) == pytest.approx(total, rel=1e-12)


def test_breakpoint_hand_example():
    bp = lambda_breakpoints(make_instance([5, 2], [1, 3]))
    assert bp.values == (0.0, pytest.approx(0.4), 1.0)
    assert bp.midpoints == (pytest.approx(0.2), pytest.approx(0.7))


def test_breakpoints_identical_items():
    bp = lambda_breakpoints(make_instance([3] * 5, [4] * 5))
    assert bp.values == (0.0, 1.0)
    assert bp.midpoints == (0.5,)


def test_breakpoints_ties_give_none():
    # equal mu or equal var never qualifies
    bp = lambda_breakpoints(make_instance([3, 3, 4], [1, 2, 2]))
    assert bp.values == (0.0, 1.0)


def test_breakpoints_full_count():
    # mu decreasing, var increasing: every pair qualifies, ratios distinct
    n = 6
    mu = [2.0**i for i in range(n)][::-1]
    var = [1.0 + 3.0**i for i in range(n)]
    bp = lambda_breakpoints(make_instance(mu, var))
    assert len(bp.interior) == n * (n - 1) // 2


def test_breakpoints_in_open_unit_interval():
    for inst in random_instances(20):
        bp = lambda_breakpoints(inst)
        assert all(0 < lam < 1 for lam in bp.interior)
        assert list(bp.values) == sorted(bp.values)
        assert len(bp.interior) <= inst.n * (inst.n - 1) // 2
        assert all(0 < m < 1 for m in bp.midpoints)


def test_item_order_constant_between_breakpoints():
    rng = np.random.default_rng(0)
    for inst in random_instances(10, (4, 8), seed=11):
        bp = lambda_breakpoints(inst)
        for lo, hi in zip(bp.values[:-1], bp.values[1:]):
            lams = lo + (hi - lo) * rng.uniform(0.001, 0.999, size=100)
            orders = {tuple(np.lexsort((np.arange(inst.n), item_scores(inst, lam)))) for lam in lams}
            assert len(orders) == 1

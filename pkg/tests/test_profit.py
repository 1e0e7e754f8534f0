import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccqmkp.instance import Instance, generate_instance
from ccqmkp.profit import (ChanceParams, chebyshev_estimate, chebyshev_factor, is_feasible,
                           knapsack_cc_profit, knapsack_moments, per_term_variance,
                           solution_fitness, task_fitness)


@pytest.mark.parametrize("delta, v", [(0, 0.0), (3, 3.0), (25, 625 / 3)])
def test_uniform_term_variance(delta, v):
    assert per_term_variance(delta) == pytest.approx(v)


def test_twopoint_term_variance():
    assert per_term_variance(3, "twopoint") == 9.0


@pytest.mark.parametrize("mu, v, alpha, expected", [(100, 0, 0.99, 100), (100, 4, 0.9, 94), (18, 9, 0.9, 9)])
def test_chebyshev_estimate(mu, v, alpha, expected):
    assert chebyshev_estimate(mu, v, alpha) == pytest.approx(expected)


def test_factor_forms():
    assert chebyshev_factor(0.9) == pytest.approx(3.0)
    assert chebyshev_factor(0.9, "eq4") == pytest.approx(1 / 3)
    for bad in (0.5, 1.0, 0.3):
        with pytest.raises(ValueError):
            chebyshev_factor(bad)
    with pytest.raises(ValueError):
        ChanceParams(-1, 0.9)


def test_moments_of_example(tiny3, chance3):
    mom = knapsack_moments(tiny3, [1, 1, 0], 1, chance3)
    assert (mom.mu_item, mom.mu_pair, mom.v_item, mom.v_pair) == pytest.approx((14, 4, 6, 3))
    assert knapsack_moments(tiny3, [1, 1, 0], 2, chance3) == knapsack_moments(tiny3, [0, 0, 0], 2, chance3)
    doubled = knapsack_moments(tiny3, [1, 1, 0], 1, ChanceParams(6.0, 0.9))
    assert (doubled.mu_item, doubled.mu_pair) == (mom.mu_item, mom.mu_pair)
    assert (doubled.v_item, doubled.v_pair) == pytest.approx((4 * mom.v_item, 4 * mom.v_pair))


def test_single_item_estimate_against_monte_carlo(tiny3, chance3):
    est = knapsack_cc_profit(tiny3, [1, 0, 0], 1, chance3)
    assert est == pytest.approx(6 - 3 * math.sqrt(3))
    assert knapsack_cc_profit(tiny3, [1, 0, 0], 2, chance3) == 0.0
    samples = np.random.default_rng(0).uniform(6 - 3, 6 + 3, 10**6)
    assert est <= np.quantile(samples, 1 - chance3.alpha)


def test_zero_delta_is_deterministic_profit(tiny3):
    assert knapsack_cc_profit(tiny3, [1, 1, 1], 1, ChanceParams(0, 0.9)) == 6 + 8 + 10 + 4 + 6


def test_task_fitness_examples(tiny3, chance3):
    roomy = Instance(tiny3.weights, tiny3.item_profits, tiny3.pair_profits, [20.0, 20.0])
    assert task_fitness(roomy, [1, 1, 0], 1) == 18
    assert task_fitness(roomy, [0, 0, 0], 1) == 0
    assert task_fitness(roomy, [1, 1, 0], 1, "chebyshev", chance3) == pytest.approx(18 - 3 * 3)
    assert task_fitness(tiny3, [1, 1, 0], 1) == pytest.approx(4.4 - 6)
    big = Instance([50, 1], [7, 9], {(0, 1): 3.0}, [40.0, 40.0])
    assert task_fitness(big, [1, 0], 1) == -10
    with pytest.raises(ValueError):
        task_fitness(tiny3, [1, 1, 0], 3)


def test_solution_fitness_examples(tiny3, chance3):
    assert solution_fitness(tiny3, [0, 0, 0], chance3) == (0.0, True)
    fv = solution_fitness(tiny3, [1, 2, 0], chance3)
    assert fv.feasible and fv.value == pytest.approx(14 - 6 * math.sqrt(3))
    five = Instance([7, 2], [1, 1], {}, [2.0, 2.0])
    assert solution_fitness(five, [1, 0], chance3) == (-5.0, False)


def test_feasibility_is_strict():
    inst = Instance([4], [1], {}, [4.0])
    assert not is_feasible(inst, [1])
    assert is_feasible(inst, [0])
    assert not is_feasible(inst, [2])


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), scale=st.floats(0.01, 100))
def test_overload_penalty_ignores_profits(seed, scale):
    rng = np.random.default_rng(seed)
    inst = generate_instance(12, 3, "weak", 0.5, seed)
    slots = rng.integers(0, 4, inst.n)
    scaled = Instance(inst.weights, inst.item_profits * scale,
                      {k: v * scale for k, v in inst.pair_profits.items()}, inst.capacities)
    for k in range(1, 4):
        load = inst.weights[slots == k].sum()
        cap = inst.capacities[k - 1]
        if load >= cap:
            assert task_fitness(inst, slots, k) == cap - load
            assert task_fitness(scaled, slots, k, "chebyshev", ChanceParams(5, 0.95)) == cap - load

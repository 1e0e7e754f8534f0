import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccqmkp.instance import Instance, generate_instance
from ccqmkp.oracle import exhaustive_best
from ccqmkp.profit import ChanceParams, solution_fitness


def test_deterministic_example(tiny3):
    res = exhaustive_best(tiny3, ChanceParams(0.0, 0.9))
    assert res.best_value == 14.0
    assert res.best_assignment == (1, 2, 0)
    assert res.enumerated == 27 and res.best_feasible


def test_chance_example(tiny3, chance3):
    res = exhaustive_best(tiny3, chance3)
    assert res.best_value == pytest.approx(6 - 3 * math.sqrt(3) + 8 - 3 * math.sqrt(3), abs=1e-12)
    assert res.best_value == pytest.approx(3.6077, abs=1e-4)
    assert res.best_assignment == (1, 2, 0)


def test_single_item_that_never_fits():
    inst = Instance([1], [5], {}, [0.8])
    res = exhaustive_best(inst, ChanceParams(0.0, 0.9))
    assert (res.best_value, res.best_assignment, res.enumerated) == (0.0, (0,), 2)


def test_refuses_large_spaces():
    inst = generate_instance(15, 2, seed=0)
    with pytest.raises(ValueError, match="10000000"):
        exhaustive_best(inst, ChanceParams(0.0, 0.9))


def brute(inst, chance):
    best, arg = -math.inf, None
    for slots in itertools.product(range(inst.m + 1), repeat=inst.n):
        v = solution_fitness(inst, list(slots), chance).value
        if v > best + 1e-12:
            best, arg = v, slots
    return best, arg


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6), m=st.integers(1, 3),
       delta=st.sampled_from([0.0, 3.0, 10.0]))
def test_matches_slow_enumeration(seed, n, m, delta):
    inst = generate_instance(n, m, "weak", 0.5, seed)
    chance = ChanceParams(delta, 0.9)
    res = exhaustive_best(inst, chance)
    best, _ = brute(inst, chance)
    assert res.best_value == pytest.approx(best, abs=1e-9)
    assert solution_fitness(inst, list(res.best_assignment), chance).value == pytest.approx(best, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_invariant_to_item_relabeling(seed):
    inst = generate_instance(6, 2, "strong", 0.6, seed)
    perm = np.random.default_rng(seed).permutation(6)
    inv = np.argsort(perm)
    relabeled = Instance(inst.weights[perm], inst.item_profits[perm],
                         {(int(inv[i]), int(inv[j])): p for (i, j), p in inst.pair_profits.items()},
                         inst.capacities)
    chance = ChanceParams(3.0, 0.9)
    a = exhaustive_best(inst, chance)
    b = exhaustive_best(relabeled, chance)
    assert a.best_value == pytest.approx(b.best_value, abs=1e-9)
    mapped = [b.best_assignment[inv[i]] for i in range(6)]
    assert solution_fitness(inst, mapped, chance).value == pytest.approx(a.best_value, abs=1e-9)


def test_bounds_random_assignments():
    inst = generate_instance(8, 2, "weak", 0.4, seed=3)
    chance = ChanceParams(3.0, 0.9)
    best = exhaustive_best(inst, chance).best_value
    rng = np.random.default_rng(0)
    for _ in range(200):
        assert solution_fitness(inst, rng.integers(0, 3, 8), chance).value <= best + 1e-9

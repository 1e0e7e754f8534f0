import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccqmkp._backend import REBUILD_INTERVAL
from ccqmkp.instance import Instance, generate_instance
from ccqmkp.profit import ChanceParams, _sums, knapsack_load, solution_fitness
from ccqmkp.solution import (Assignment, apply_move, build_preference_table, density_matrix,
                             parse_solution, profit_density)


def scratch_caches(inst, slots):
    """Recompute both cache arrays from the instance definition."""
    ic = np.zeros((3, inst.m + 1), dtype=np.int64)
    fc = np.zeros((2, inst.m + 1))
    ic[1, 0] = int(np.sum(np.asarray(slots) == 0))
    for k in range(1, inst.m + 1):
        mu_item, mu_pair, count, pairs = _sums(inst, np.asarray(slots), k)
        ic[:, k] = knapsack_load(inst, slots, k), count, pairs
        fc[:, k] = mu_item, mu_pair
    return ic, fc


def assert_caches_match(a):
    ic, fc = scratch_caches(a.instance, a.slots)
    assert np.array_equal(a.icache, ic)
    np.testing.assert_allclose(a.fcache, fc, rtol=0, atol=1e-9)


def test_hand_update(tiny3):
    a = Assignment(tiny3, [1, 1, 0])
    assert (a.mu_item[0], a.mu_pair[0], a.pair_counts[0]) == (14, 4, 1)
    apply_move(a, 1, 0)
    assert (a.mu_item[0], a.mu_pair[0], a.pair_counts[0]) == (6, 0, 0)
    assert a.unassigned_count == 2


def test_noop_move_keeps_caches(tiny3):
    a = Assignment(tiny3, [1, 2, 1])
    before = a.icache.copy(), a.fcache.copy()
    a.move(0, 1)
    assert np.array_equal(a.icache, before[0]) and np.array_equal(a.fcache, before[1])
    assert a.moves == 0


def test_invalid_moves(tiny3):
    a = Assignment(tiny3)
    for item, state in [(-1, 0), (3, 0), (0, 3), (0, -1)]:
        with pytest.raises(ValueError):
            a.move(item, state)
    with pytest.raises(ValueError):
        Assignment(tiny3, [0, 0])
    with pytest.raises(ValueError):
        Assignment(tiny3, [0, 0, 5])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 30), m=st.integers(1, 5),
       steps=st.integers(0, 300))
def test_random_moves_match_recompute(seed, n, m, steps):
    inst = generate_instance(n, m, "weak", 0.4, seed)
    rng = np.random.default_rng(seed)
    a = Assignment(inst, rng.integers(0, m + 1, n))
    for _ in range(steps):
        a.move(int(rng.integers(n)), int(rng.integers(m + 1)))
    assert_caches_match(a)
    assert a.item_counts.sum() + a.unassigned_count == n
    chance = ChanceParams(4.0, 0.8)
    assert a.fitness(chance).value == pytest.approx(solution_fitness(inst, a.slots, chance).value, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), item=st.integers(0, 19), state=st.integers(0, 3))
def test_move_then_inverse_restores_integer_caches(seed, item, state):
    inst = generate_instance(20, 3, "strong", 0.5, seed)
    a = Assignment(inst, np.random.default_rng(seed).integers(0, 4, 20))
    before = a.icache.copy()
    old = int(a.slots[item])
    a.move(item, state)
    a.move(item, old)
    assert np.array_equal(a.icache, before)


def test_rebuild_interval_resets_counter(tiny3):
    a = Assignment(tiny3)
    for t in range(REBUILD_INTERVAL + 5):
        a.move(t % 3, (t // 3) % 3)
    assert a.moves < REBUILD_INTERVAL
    assert_caches_match(a)


def test_copy_is_independent(tiny3):
    a = Assignment(tiny3, [1, 0, 2])
    b = a.copy()
    b.move(0, 2)
    assert a.slots.tolist() == [1, 0, 2] and a != b


def test_text_form(tiny3):
    a = Assignment(tiny3, [1, 0, 2])
    assert a.to_text() == "1 0 2"
    assert parse_solution("1 0 2", tiny3) == a
    with pytest.raises(ValueError):
        parse_solution("1 x 2", tiny3)


def test_profit_density_examples(tiny3):
    x0 = [1, 1, 2]
    assert profit_density(tiny3, x0, 2, 1) == pytest.approx(3.2)
    assert profit_density(tiny3, x0, 2, 2) == pytest.approx(2.0)
    for i in range(3):
        for k in (1, 2):
            assert profit_density(tiny3, [0, 0, 0], i, k) == tiny3.item_profits[i] / tiny3.weights[i]
    with pytest.raises(ValueError):
        profit_density(tiny3, x0, 3, 1)
    with pytest.raises(ValueError):
        profit_density(tiny3, x0, 0, 0)


def test_density_matrix_agrees_with_scalar():
    inst = generate_instance(25, 4, "weak", 0.5, seed=5)
    x0 = np.random.default_rng(1).integers(0, 5, 25)
    mat = density_matrix(inst, x0)
    for i in range(25):
        for k in range(1, 5):
            assert mat[i, k - 1] == pytest.approx(profit_density(inst, x0, i, k))


def test_round_robin_preferences():
    # densities 2, 1, 3 -> sorted order items 3, 1, 2 (1-based)
    inst = Instance([1, 1, 1], [2, 1, 3], {}, [1.0, 1.0])
    table = build_preference_table(inst, [0, 0, 0])
    assert table.reference_empty
    assert table.pref.tolist() == [2, 1, 1]
    assert table.groups(2) == [[], [1, 2], [0]]


def test_round_robin_ties_favour_lower_index():
    inst = Instance([2, 3, 1], [6, 9, 3], {}, [1.0, 1.0, 1.0])
    assert build_preference_table(inst, [0, 0, 0]).pref.tolist() == [1, 2, 3]


def test_density_preference(tiny3):
    table = build_preference_table(tiny3, [1, 1, 2])
    assert not table.reference_empty
    assert table.pref[2] == 1


def test_density_tie_goes_to_lowest_knapsack():
    inst = Instance([1, 1], [1, 1], {}, [1.0, 1.0, 1.0])
    assert build_preference_table(inst, [3, 0]).pref.tolist() == [1, 1]


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 5))
def test_preferences_in_range_and_single_knapsack(seed, m):
    inst = generate_instance(15, m, "weak", 0.3, seed)
    x0 = np.random.default_rng(seed).integers(0, m + 1, 15)
    for ref in (x0, np.zeros(15, dtype=np.int64)):
        pref = build_preference_table(inst, ref).pref
        assert pref.min() >= 1 and pref.max() <= m
        if m == 1:
            assert np.all(pref == 1)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.sampled_from([0.5, 2.0, 4.0, 8.0]))
def test_preference_scale_equivariance(seed, c):
    # power-of-two scale factors keep every float comparison exact
    inst = generate_instance(15, 3, "weak", 0.4, seed)
    scaled = Instance(inst.weights, inst.item_profits * c,
                      {k: v * c for k, v in inst.pair_profits.items()}, inst.capacities)
    x0 = np.random.default_rng(seed).integers(0, 4, 15)
    for ref in (x0, np.zeros(15, dtype=np.int64)):
        assert np.array_equal(build_preference_table(inst, ref).pref,
                              build_preference_table(scaled, ref).pref)

import time

import pytest

from ccqmkp._backend import Rng
from ccqmkp.budget import Budget
from ccqmkp.ea import EaConfig, run_mu_plus_lambda
from ccqmkp.hybrid import HybridConfig, run_hybrid_mu_plus_lambda, run_hybrid_one_plus_one
from ccqmkp.instance import generate_instance
from ccqmkp.mfo import MfoConfig, best_member, run_mfo
from ccqmkp.oracle import exhaustive_best
from ccqmkp.profit import ChanceParams
from ccqmkp.solution import Assignment

ONE = HybridConfig(global_algorithm="one_plus_one")
MU = HybridConfig(global_algorithm="mu_plus_lambda")


@pytest.mark.parametrize("seed", range(4))
def test_tiny_oracle_instance(tiny3, chance3, seed):
    best = exhaustive_best(tiny3, chance3).best_value
    a = run_hybrid_one_plus_one(tiny3, chance3, ONE, MfoConfig(), Budget(10**4, None), seed)
    assert a.fitness(chance3).value == pytest.approx(best, abs=1e-9)
    b = run_hybrid_mu_plus_lambda(tiny3, chance3, MU, EaConfig(), MfoConfig(), Budget(10**4, None), seed)
    assert b.fitness(chance3).value == pytest.approx(best, abs=1e-9)


def test_single_local_phase_returns_its_best():
    inst = generate_instance(40, 3, "strong", 0.3, seed=2)
    chance = ChanceParams(5.0, 0.9)
    budget = Budget(500, None)
    got = run_hybrid_one_plus_one(inst, chance, ONE, MfoConfig(), budget, 9)
    local = run_mfo(inst, chance, Assignment(inst), MfoConfig(), Budget(500, None), Rng(9))
    assert budget.used_evaluations == 500
    assert got == best_member(local)


def test_zero_local_phase_is_plain_mu_plus_lambda():
    inst = generate_instance(40, 3, "weak", 0.3, seed=4)
    chance = ChanceParams(5.0, 0.9)
    cfg = HybridConfig(eval_local=0, eval_global=500, global_algorithm="mu_plus_lambda")
    got = run_hybrid_mu_plus_lambda(inst, chance, cfg, EaConfig(), MfoConfig(), Budget(3210, None), 5)
    # the plain EA driven in the same phase-sized slices, sharing one stream
    rng, total, pop = Rng(5), Budget(3210, None), [Assignment(inst)]
    while not total.exhausted:
        pop = run_mu_plus_lambda(inst, chance, EaConfig(), pop, total.slice(500), rng)
    assert got == pop[0]


@pytest.mark.parametrize("runner", ["one", "mu"])
def test_budget_accounting_and_determinism(runner):
    inst = generate_instance(30, 3, "strong", 0.3, seed=1)
    chance = ChanceParams(10.0, 0.95)

    def go(evals):
        b = Budget(evals, None)
        if runner == "one":
            out = run_hybrid_one_plus_one(inst, chance, ONE, MfoConfig(), b, 3)
        else:
            out = run_hybrid_mu_plus_lambda(inst, chance, MU, EaConfig(), MfoConfig(), b, 3)
        return out, b

    for evals in (1, 500, 999, 1000, 2750):
        out, b = go(evals)
        assert b.used_evaluations == evals
        assert go(evals)[0] == out


def test_best_ever_is_monotone_in_budget():
    # the same seed with a larger budget replays the shorter run first
    inst = generate_instance(50, 4, "strong", 0.25, seed=7)
    chance = ChanceParams(25.0, 0.95)
    values = [run_hybrid_one_plus_one(inst, chance, ONE, MfoConfig(), Budget(e, None), 1).fitness(chance).value
              for e in (500, 1000, 2000, 4000, 8000)]
    assert values == sorted(values)


def test_wall_time_cutoff():
    inst = generate_instance(200, 5, "strong", 0.25, seed=3)
    chance = ChanceParams(10.0, 0.9)
    t0 = time.perf_counter()
    b = Budget(10**9, 0.3)
    run_hybrid_one_plus_one(inst, chance, ONE, MfoConfig(), b, 0)
    assert time.perf_counter() - t0 < 3.0
    assert b.used_evaluations < 10**9


def test_config_validation(tiny3, chance3):
    with pytest.raises(ValueError):
        HybridConfig(eval_global=0)
    with pytest.raises(ValueError):
        HybridConfig(global_algorithm="ga")
    with pytest.raises(ValueError):
        run_hybrid_one_plus_one(tiny3, chance3, MU, MfoConfig(), Budget(10, None))
    with pytest.raises(ValueError):
        run_hybrid_mu_plus_lambda(tiny3, chance3, ONE, EaConfig(), MfoConfig(), Budget(10, None))

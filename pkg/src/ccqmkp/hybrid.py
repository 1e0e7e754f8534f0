"""Alternation of MFO local phases and EA global phases on one shared budget."""
from __future__ import annotations

from dataclasses import dataclass

from ._backend import make_rng
from .budget import Budget
from .ea import EaConfig, run_mu_plus_lambda, run_one_plus_one
from .instance import Instance
from .mfo import MfoConfig, best_member, run_mfo
from .profit import ChanceParams
from .solution import Assignment

__all__ = ["Budget", "HybridConfig", "run_hybrid_one_plus_one", "run_hybrid_mu_plus_lambda"]

GLOBAL_ALGORITHMS = ("one_plus_one", "mu_plus_lambda")


@dataclass(frozen=True)
class HybridConfig:
    eval_local: int = 500
    eval_global: int = 500
    global_algorithm: str = "one_plus_one"

    def __post_init__(self):
        # eval_local = 0 turns the controller into the plain EA (used in tests)
        if self.eval_local < 0 or self.eval_global < 1:
            raise ValueError("phase lengths must be >= 1")
        if self.global_algorithm not in GLOBAL_ALGORITHMS:
            raise ValueError(f"global_algorithm must be one of {GLOBAL_ALGORITHMS}")


def _key(a: Assignment, chance: ChanceParams):
    fv = a.fitness(chance)
    return fv.value, fv.feasible


class _BestEver:
    def __init__(self, chance: ChanceParams):
        self.chance = chance
        self.best = None
        self.key = None

    def offer(self, a: Assignment) -> None:
        key = _key(a, self.chance)
        if self.key is None or key > self.key:
            self.best, self.key = a.copy(), key


def run_hybrid_one_plus_one(instance: Instance, chance: ChanceParams, cfg: HybridConfig,
                            mfo_cfg: MfoConfig, budget: Budget, seed=0) -> Assignment:
    """Local phase, then (1+1) EA phase, repeated; returns the best solution seen."""
    if cfg.global_algorithm != "one_plus_one":
        raise ValueError("configuration is not for the (1+1) hybrid")
    rng = make_rng(seed)
    x = Assignment(instance)
    tracker = _BestEver(chance)
    tracker.offer(x)
    while not budget.exhausted:
        if cfg.eval_local > 0:
            local = run_mfo(instance, chance, x, mfo_cfg, budget.slice(cfg.eval_local), rng)
            x = best_member(local)
            tracker.offer(x)
            if budget.exhausted:
                break
        x = run_one_plus_one(instance, chance, x, budget.slice(cfg.eval_global), rng)
        tracker.offer(x)
    return tracker.best


def run_hybrid_mu_plus_lambda(instance: Instance, chance: ChanceParams, cfg: HybridConfig,
                              ea_cfg: EaConfig, mfo_cfg: MfoConfig, budget: Budget,
                              seed=0) -> Assignment:
    """Local phase merged into the (mu+lambda) population, then an EA phase, repeated."""
    if cfg.global_algorithm != "mu_plus_lambda":
        raise ValueError("configuration is not for the (mu+lambda) hybrid")
    rng = make_rng(seed)
    population = [Assignment(instance)]
    x = population[0]
    tracker = _BestEver(chance)
    tracker.offer(x)
    while not budget.exhausted:
        if cfg.eval_local > 0:
            local = run_mfo(instance, chance, x, mfo_cfg, budget.slice(cfg.eval_local), rng)
            merged = population + [ind.assignment for ind in local]
            order = sorted(range(len(merged)), key=lambda r: (-_key(merged[r], chance)[0], r))
            population = [merged[r] for r in order[:ea_cfg.mu]]
            tracker.offer(population[0])
            if budget.exhausted:
                break
        population = run_mu_plus_lambda(instance, chance, ea_cfg, population,
                                        budget.slice(cfg.eval_global), rng)
        x = population[0]
        tracker.offer(x)
    return tracker.best

"""Preference-based multi-factorial local optimizer.

Every knapsack is a task. An individual's task fitness on knapsack ``k`` is that
knapsack's profit (or its negative overload), its factorial rank is its position
when the population is sorted on that task, its skill factor is the task where
it ranks best and its scalar fitness is the reciprocal of that rank.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import make_rng
from ._pycore import kt_slots, selected_positions
from .budget import Budget, chunk_size
from .instance import Instance
from .profit import TASK_MODES, ChanceParams, FitnessValue
from .solution import Assignment, PreferenceTable, StateBlock, build_preference_table


@dataclass(frozen=True)
class MfoConfig:
    mu_local: int = 20
    lambda_local: int = 10
    pr_kt: float = 0.1
    task_fitness_mode: str = "expected"

    def __post_init__(self):
        if self.mu_local < 1 or self.lambda_local < 1:
            raise ValueError("mu_local and lambda_local must be >= 1")
        if not 0.0 <= self.pr_kt <= 1.0:
            raise ValueError("pr_kt must lie in [0, 1]")
        if self.task_fitness_mode not in TASK_MODES:
            raise ValueError(f"task_fitness_mode must be one of {TASK_MODES}")


@dataclass
class MfoIndividual:
    assignment: Assignment
    task_fitness: np.ndarray
    factorial_rank: np.ndarray
    skill_factor: int
    scalar_fitness: float
    fitness: FitnessValue | None = None


def preference_mutation(x: Assignment, prefs: PreferenceTable, rng, positions=None) -> Assignment:
    """Toggle each selected item (probability 1/n) between its preferred knapsack and 0."""
    pref = prefs.pref if isinstance(prefs, PreferenceTable) else np.asarray(prefs)
    if len(pref) != x.instance.n:
        raise ValueError("preference table length must equal n")
    child = x.copy()
    chosen = selected_positions(x.instance.n, rng) if positions is None else positions
    for i in chosen:
        child.move(i, 0 if child.slots[i] == pref[i] else int(pref[i]))
    return child


def factorial_ranks(g: np.ndarray) -> np.ndarray:
    """Rank 1 = largest value per column; equal values favour the lower row."""
    g = np.asarray(g, dtype=np.float64)
    count, m = g.shape
    ranks = np.empty((count, m), dtype=np.int64)
    rows = np.arange(count)
    for k in range(m):
        order = np.lexsort((rows, -g[:, k]))
        ranks[order, k] = rows + 1
    return ranks


def metrics_from_task_values(g) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(ranks, skill factors (1-based), scalar fitness)`` for a ``(pop, m)`` task matrix."""
    ranks = factorial_ranks(g)
    best = np.argmin(ranks, axis=1)
    scalar = 1.0 / ranks[np.arange(len(ranks)), best]
    return ranks, best + 1, scalar


def evaluate_mfo_metrics(population, instance: Instance, chance: ChanceParams,
                         config: MfoConfig | None = None) -> list[MfoIndividual]:
    """Task fitnesses, factorial ranks, skill factors and scalar fitness of a population."""
    config = config or MfoConfig()
    members = [a if isinstance(a, Assignment) else Assignment(instance, a) for a in population]
    if not members:
        raise ValueError("population must be nonempty")
    g = np.array([a.task_values(chance, config.task_fitness_mode) for a in members])
    ranks, skill, scalar = metrics_from_task_values(g)
    return [MfoIndividual(a, g[r], ranks[r], int(skill[r]), float(scalar[r]), a.fitness(chance))
            for r, a in enumerate(members)]


def kt_crossover(x: MfoIndividual, y: MfoIndividual, rng) -> tuple[Assignment, Assignment]:
    """Knowledge transfer between parents with different skill factors.

    Each side first drops, with probability 1/2 per item, the items it holds in the
    other's skill knapsack; then each side's skill-knapsack items (post-removal) are
    copied into the other with probability 1/2 per item.
    """
    tx, ty = int(x.skill_factor), int(y.skill_factor)
    if tx == ty:
        raise ValueError("knowledge transfer needs parents with different skill factors")
    wx, wy = kt_slots(x.assignment.slots.tolist(), y.assignment.slots.tolist(), tx, ty, rng)
    return _rewrite(x.assignment, wx), _rewrite(y.assignment, wy)


def _rewrite(base: Assignment, slots) -> Assignment:
    child = base.copy()
    for i, s in enumerate(slots):
        child.move(i, s)
    return child


def run_mfo(instance: Instance, chance: ChanceParams, x0: Assignment, config: MfoConfig,
            budget: Budget, rng=None) -> list[MfoIndividual]:
    """Local optimization around ``x0`` within its preference-induced search space.

    Seeds ``x0`` plus ``mu_local`` preference mutants (one evaluation each, ``x0`` free),
    then runs batches of ``lambda_local`` offspring with plus-selection on scalar
    fitness. Returns the final population sorted best first.
    """
    rng = make_rng(rng)
    factor, tvar = chance.kernel_args()
    chebyshev = config.task_fitness_mode == "chebyshev"
    mu, lam = config.mu_local, config.lambda_local
    prefs = build_preference_table(instance, x0).pref
    core = instance.core
    block = StateBlock(instance, mu + 1 + lam, tasks=True)
    block.load(0, x0)
    npop = 1
    while npop <= mu and budget.grant(1):
        core.pref_mutate_row(*block.state, npop, 0, prefs, rng)
        budget.charge(1)
        npop += 1
    block.birth[:npop] = np.arange(npop)
    core.eval_rows(block.icache, block.fcache, block.fit, block.feas, block.g, 0, npop,
                   factor, tvar, chebyshev)
    core.metrics(block.g, npop, block.ranks, block.skill, block.scalar)
    next_birth = npop
    step = chunk_size(lam)
    while True:
        k = budget.grant(step)
        if k == 0:
            break
        npop, next_birth = core.mfo(*block.state, block.fit, block.feas, block.birth, block.g,
                                    block.ranks, block.skill, block.scalar, prefs, npop, mu, lam,
                                    config.pr_kt, chebyshev, k, next_birth, rng, factor, tvar)
        budget.charge(k)
    final = evaluate_mfo_metrics([block.assignment(r) for r in range(npop)], instance, chance, config)
    order = sorted(range(npop), key=lambda r: (-final[r].scalar_fitness, -final[r].fitness.value, r))
    return [final[r] for r in order]


def best_member(population) -> Assignment:
    """Highest-value member (feasible preferred on equal value; earlier on full ties)."""
    best = max(range(len(population)),
               key=lambda r: (population[r].fitness.value, population[r].fitness.feasible, -r))
    return population[best].assignment

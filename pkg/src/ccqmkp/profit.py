"""Stochastic profit model and from-scratch fitness evaluation.

Each expected profit (item or active pair) is perturbed independently and
uniformly on ``[mu - delta, mu + delta]``. A knapsack's chance-constrained
profit is the one-sided Chebyshev (Cantelli) bound
``mu - sqrt(alpha / (1 - alpha)) * sqrt(v)``: the knapsack earns at least that
much with probability >= alpha.

Everything here recomputes sums directly from the instance. The solvers use the
incremental kernels instead; this module is the reference they are checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .instance import Instance

CHEB_FORMS = ("eq3", "eq4")
DISPERSION_MODELS = ("uniform", "twopoint")
TASK_MODES = ("expected", "chebyshev")


def per_term_variance(delta: float, model: str = "uniform") -> float:
    """Variance of one profit term with dispersion ``delta``.

    ``uniform`` is the continuous uniform on ``[mu-delta, mu+delta]`` (delta**2 / 3);
    ``twopoint`` puts mass 1/2 on each endpoint (delta**2).
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if model == "uniform":
        return delta * delta / 3.0
    if model == "twopoint":
        return delta * delta
    raise ValueError(f"dispersion model must be one of {DISPERSION_MODELS}")


def chebyshev_factor(alpha: float, form: str = "eq3") -> float:
    if not 0.5 < alpha < 1.0:
        raise ValueError(f"alpha must lie strictly inside (0.5, 1), got {alpha}")
    if form == "eq3":
        return math.sqrt(alpha / (1.0 - alpha))
    if form == "eq4":
        return math.sqrt((1.0 - alpha) / alpha)
    raise ValueError(f"Chebyshev form must be one of {CHEB_FORMS}")


def chebyshev_estimate(mu: float, v: float, alpha: float, form: str = "eq3") -> float:
    """Profit guaranteed with confidence ``alpha`` given mean ``mu`` and variance ``v``."""
    if v < 0:
        raise ValueError("variance must be >= 0")
    return mu - chebyshev_factor(alpha, form) * math.sqrt(v)


@dataclass(frozen=True)
class ChanceParams:
    delta: float
    alpha: float
    cheb_form: str = "eq3"
    dispersion: str = "uniform"

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        chebyshev_factor(self.alpha, self.cheb_form)
        per_term_variance(self.delta, self.dispersion)

    @property
    def factor(self) -> float:
        return chebyshev_factor(self.alpha, self.cheb_form)

    @property
    def term_variance(self) -> float:
        return per_term_variance(self.delta, self.dispersion)

    def kernel_args(self) -> tuple[float, float]:
        return self.factor, self.term_variance


@dataclass(frozen=True)
class KnapsackMoments:
    mu_item: float
    mu_pair: float
    v_item: float
    v_pair: float

    @property
    def mean(self) -> float:
        return self.mu_item + self.mu_pair

    @property
    def variance(self) -> float:
        return self.v_item + self.v_pair


class FitnessValue(NamedTuple):
    value: float
    feasible: bool


def _slots(instance: Instance, assignment) -> np.ndarray:
    slots = getattr(assignment, "slots", assignment)
    slots = np.asarray(slots)
    if slots.shape != (instance.n,):
        raise ValueError(f"assignment must have length {instance.n}")
    if slots.size and (slots.min() < 0 or slots.max() > instance.m):
        raise ValueError(f"assignment states must lie in 0..{instance.m}")
    return slots.astype(np.int64, copy=False)


def _check_k(instance: Instance, k: int) -> None:
    if not 1 <= k <= instance.m:
        raise ValueError(f"knapsack id must be in 1..{instance.m}, got {k}")


def knapsack_load(instance: Instance, assignment, k: int) -> int:
    _check_k(instance, k)
    slots = _slots(instance, assignment)
    return int(instance.weights[slots == k].sum())


def _sums(instance: Instance, slots: np.ndarray, k: int) -> tuple[float, float, int, int]:
    members = np.flatnonzero(slots == k).tolist()
    mu_item = 0.0
    for i in members:
        mu_item += float(instance.item_profits[i])
    mu_pair = 0.0
    pairs = 0
    for a, i in enumerate(members):
        for j in members[a + 1:]:
            p = instance.pair_profits.get((i, j))
            if p is not None:
                mu_pair += p
                pairs += 1
    return mu_item, mu_pair, len(members), pairs


def knapsack_moments(instance: Instance, assignment, k: int,
                     chance: ChanceParams) -> KnapsackMoments:
    _check_k(instance, k)
    mu_item, mu_pair, count, pairs = _sums(instance, _slots(instance, assignment), k)
    tv = chance.term_variance
    return KnapsackMoments(mu_item, mu_pair, count * tv, pairs * tv)


def knapsack_cc_profit(instance: Instance, assignment, k: int, chance: ChanceParams) -> float:
    mom = knapsack_moments(instance, assignment, k, chance)
    return chebyshev_estimate(mom.mean, mom.variance, chance.alpha, chance.cheb_form)


def task_fitness(instance: Instance, assignment, k: int, mode: str = "expected",
                 chance: ChanceParams | None = None) -> float:
    """Per-knapsack fitness: profit when under capacity, else the (negative) slack."""
    if mode not in TASK_MODES:
        raise ValueError(f"mode must be one of {TASK_MODES}")
    load = knapsack_load(instance, assignment, k)
    cap = float(instance.capacities[k - 1])
    if not load < cap:
        return cap - load
    if mode == "expected":
        mu_item, mu_pair, _, _ = _sums(instance, _slots(instance, assignment), k)
        return mu_item + mu_pair
    if chance is None:
        raise ValueError("chebyshev task fitness needs chance parameters")
    return knapsack_cc_profit(instance, assignment, k, chance)


def solution_fitness(instance: Instance, assignment, chance: ChanceParams) -> FitnessValue:
    """Sum of per-knapsack chance-constrained profits, overloaded knapsacks contributing ``C_k - w_k``."""
    slots = _slots(instance, assignment)
    value = 0.0
    feasible = True
    for k in range(1, instance.m + 1):
        load = knapsack_load(instance, slots, k)
        cap = float(instance.capacities[k - 1])
        if load < cap:
            value += knapsack_cc_profit(instance, slots, k, chance)
        else:
            value += cap - load
            feasible = False
    return FitnessValue(value, feasible)


def is_feasible(instance: Instance, assignment: Sequence[int]) -> bool:
    """Independent constraint check: valid states and every knapsack strictly under capacity."""
    try:
        slots = _slots(instance, assignment)
    except ValueError:
        return False
    loads = np.bincount(slots, weights=instance.weights, minlength=instance.m + 1)[1:]
    return bool(np.all(loads < instance.capacities))

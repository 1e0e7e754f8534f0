"""Mutation operators and the (1+1) / (mu+lambda) evolutionary algorithms.

The loops themselves run in the backend kernels; the operator functions here
draw random numbers in exactly the same order, so a kernel step and
``make_offspring`` on the same stream produce the same child.
"""
from __future__ import annotations

from dataclasses import dataclass

from ._backend import make_rng
from ._pycore import selected_positions
from .budget import Budget, chunk_size
from .instance import Instance
from .profit import ChanceParams
from .solution import Assignment, StateBlock


@dataclass(frozen=True)
class EaConfig:
    mu: int = 20
    lambda_: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        if self.mu < 1 or self.lambda_ < 1:
            raise ValueError("mu and lambda must be >= 1")


def random_reset_mutation(x: Assignment, rng, positions=None) -> Assignment:
    """Reset each position with probability 1/n to a uniform state in ``0..m``.

    ``positions`` forces the selected positions (the states are still drawn).
    """
    child = x.copy()
    m = x.instance.m
    chosen = selected_positions(x.instance.n, rng) if positions is None else positions
    for i in chosen:
        child.move(i, rng.below(m + 1))
    return child


def swap_mutation(x: Assignment, rng, pair=None) -> Assignment:
    """Exchange the states of two distinct uniformly chosen positions (``pair`` forces them)."""
    child = x.copy()
    n = x.instance.n
    if pair is None:
        if n < 2:
            return child
        i = rng.below(n)
        j = rng.below(n - 1)
        if j >= i:
            j += 1
    else:
        i, j = pair
        if i == j:
            raise ValueError("swap positions must differ")
    si, sj = int(child.slots[i]), int(child.slots[j])
    if si != sj:
        child.move(i, sj)
        child.move(j, si)
    return child


def make_offspring(x: Assignment, rng) -> Assignment:
    """Random-resetting or swap mutation, chosen by a fair coin."""
    if rng.random() < 0.5:
        return random_reset_mutation(x, rng)
    return swap_mutation(x, rng)


def run_one_plus_one(instance: Instance, chance: ChanceParams, start: Assignment,
                     budget: Budget, rng=None) -> Assignment:
    """(1+1) EA from ``start``; accepts offspring whose fitness is >= the parent's.

    ``rng`` is a seed or an existing backend stream. The start's own evaluation is free.
    """
    rng = make_rng(rng)
    x = start.copy()
    factor, tvar = chance.kernel_args()
    core = instance.core
    fitness, feasible = core.evaluate(x.icache, x.fcache, factor, tvar)
    while True:
        k = budget.grant(chunk_size(1))
        if k == 0:
            break
        fitness, feasible, x.moves = core.one_plus_one(
            x.slots, x.icache, x.fcache, x.moves, fitness, feasible, k, rng, factor, tvar)
        budget.charge(k)
    return x


def run_mu_plus_lambda(instance: Instance, chance: ChanceParams, config: EaConfig,
                       initial_population, budget: Budget, rng=None) -> list[Assignment]:
    """(mu+lambda) EA with uniform parent choice; returns the population, best first.

    Populations smaller than ``mu`` are padded with mutants of their best member,
    each costing one evaluation. Population order encodes age (earlier = older).
    """
    initial = list(initial_population)
    if not initial:
        raise ValueError("initial population must be nonempty")
    rng = make_rng(rng if rng is not None else config.rng_seed)
    mu, lam = config.mu, config.lambda_
    factor, tvar = chance.kernel_args()
    core = instance.core
    block = StateBlock(instance, max(mu, len(initial)) + lam)
    for r, a in enumerate(initial):
        block.load(r, a)
        block.fit[r], block.feas[r] = core.evaluate(a.icache, a.fcache, factor, tvar)
        block.birth[r] = r
    count = len(initial)
    _sort_rows(block, count)
    count = min(count, mu)
    next_birth = count
    while count < mu and budget.grant(1):
        core.offspring_row(*block.state, block.fit, block.feas, count, 0, rng, factor, tvar)
        block.birth[count] = next_birth
        next_birth += 1
        budget.charge(1)
        count += 1
    _sort_rows(block, count)
    if count == mu:
        step = chunk_size(lam)
        while True:
            k = budget.grant(step)
            if k == 0:
                break
            next_birth = core.mu_lambda(*block.state, block.fit, block.feas, block.birth,
                                        mu, lam, k, next_birth, rng, factor, tvar)
            budget.charge(k)
    return [block.assignment(r) for r in range(count)]


def _sort_rows(block: StateBlock, count: int) -> None:
    order = sorted(range(count), key=lambda r: (-block.fit[r], block.birth[r]))
    for a in (block.slots, block.icache, block.fcache, block.moves, block.fit, block.feas, block.birth):
        a[:count] = a[order]

"""Exhaustive solver for tiny instances (ground truth for tests)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance
from .profit import ChanceParams

MAX_ENUMERATION = 10_000_000
_CHUNK = 1 << 16


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    best_assignment: tuple[int, ...]
    best_feasible: bool
    enumerated: int


def _chunk_values(instance: Instance, digits: np.ndarray, factor: float, tvar: float):
    w = instance.weights.astype(np.float64)
    p = instance.item_profits
    pairs = list(instance.pair_profits.items())
    total = np.zeros(len(digits))
    feasible = np.ones(len(digits), dtype=bool)
    for k in range(1, instance.m + 1):
        inside = digits == k
        load = inside @ w
        mean = inside @ p
        terms = inside.sum(axis=1).astype(np.float64)
        for (i, j), q in pairs:
            both = inside[:, i] & inside[:, j]
            mean = mean + np.where(both, q, 0.0)
            terms += both
        cap = instance.capacities[k - 1]
        ok = load < cap
        total += np.where(ok, mean - factor * np.sqrt(terms * tvar), cap - load)
        feasible &= ok
    return total, feasible


def exhaustive_best(instance: Instance, chance: ChanceParams) -> OracleResult:
    """Evaluate every assignment in ``{0..m}^n``; ties go to the lexicographically smallest."""
    n, base = instance.n, instance.m + 1
    space = base ** n
    if space > MAX_ENUMERATION:
        raise ValueError(f"search space (m+1)^n = {space} exceeds the oracle bound of {MAX_ENUMERATION}")
    factor, tvar = chance.kernel_args()
    powers = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best_value, best_code, best_feas = -np.inf, 0, False
    for lo in range(0, space, _CHUNK):
        codes = np.arange(lo, min(space, lo + _CHUNK), dtype=np.int64)
        digits = (codes[:, None] // powers) % base
        values, feas = _chunk_values(instance, digits, factor, tvar)
        r = int(np.argmax(values))
        if values[r] > best_value:
            best_value, best_code, best_feas = float(values[r]), int(codes[r]), bool(feas[r])
    best = tuple(int(d) for d in (best_code // powers) % base)
    return OracleResult(best_value, best, best_feas, space)

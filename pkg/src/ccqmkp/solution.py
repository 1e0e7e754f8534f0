"""Integer-vector solutions with cached per-knapsack aggregates, and item preferences."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import REBUILD_INTERVAL
from .instance import Instance
from .profit import ChanceParams, FitnessValue


class Assignment:
    """Length-``n`` vector over ``{0..m}`` plus incrementally maintained aggregates.

    ``icache`` rows hold per-knapsack load, item count and active pair count;
    ``fcache`` rows hold expected item profit and expected pair profit. Column 0 of
    ``icache[1]`` counts unassigned items; the other column-0 entries stay zero.
    """

    __slots__ = ("instance", "slots", "icache", "fcache", "moves")

    def __init__(self, instance: Instance, slots=None):
        n, m = instance.n, instance.m
        if slots is None:
            arr = np.zeros(n, dtype=np.int64)
        else:
            arr = np.array(slots, dtype=np.int64)
            if arr.shape != (n,):
                raise ValueError(f"assignment must have length {n}")
            if arr.size and (arr.min() < 0 or arr.max() > m):
                raise ValueError(f"assignment states must lie in 0..{m}")
        self.instance = instance
        self.slots = arr
        self.icache = np.zeros((3, m + 1), dtype=np.int64)
        self.fcache = np.zeros((2, m + 1), dtype=np.float64)
        self.moves = 0
        instance.core.rebuild(self.slots, self.icache, self.fcache)

    @classmethod
    def from_state(cls, instance: Instance, slots, icache, fcache, moves: int = 0) -> "Assignment":
        """Wrap copies of existing state arrays without recomputing them."""
        obj = cls.__new__(cls)
        obj.instance = instance
        obj.slots = np.array(slots, dtype=np.int64)
        obj.icache = np.array(icache, dtype=np.int64)
        obj.fcache = np.array(fcache, dtype=np.float64)
        obj.moves = int(moves)
        return obj

    def copy(self) -> "Assignment":
        return Assignment.from_state(self.instance, self.slots, self.icache, self.fcache, self.moves)

    def move(self, item: int, state: int) -> None:
        if not 0 <= item < self.instance.n:
            raise ValueError(f"item index {item} out of range")
        if not 0 <= state <= self.instance.m:
            raise ValueError(f"state {state} out of range 0..{self.instance.m}")
        self.moves += self.instance.core.move(self.slots, self.icache, self.fcache, int(item), int(state))
        if self.moves >= REBUILD_INTERVAL:
            self.rebuild()

    def rebuild(self) -> None:
        self.instance.core.rebuild(self.slots, self.icache, self.fcache)
        self.moves = 0

    @property
    def loads(self) -> np.ndarray:
        return self.icache[0, 1:]

    @property
    def item_counts(self) -> np.ndarray:
        return self.icache[1, 1:]

    @property
    def unassigned_count(self) -> int:
        return int(self.icache[1, 0])

    @property
    def pair_counts(self) -> np.ndarray:
        return self.icache[2, 1:]

    @property
    def mu_item(self) -> np.ndarray:
        return self.fcache[0, 1:]

    @property
    def mu_pair(self) -> np.ndarray:
        return self.fcache[1, 1:]

    def items_in(self, k: int) -> list[int]:
        return np.flatnonzero(self.slots == k).tolist()

    def is_empty(self) -> bool:
        return not self.slots.any()

    def fitness(self, chance: ChanceParams) -> FitnessValue:
        """Chance-constrained fitness from the cached aggregates."""
        value, feasible = self.instance.core.evaluate(self.icache, self.fcache, *chance.kernel_args())
        return FitnessValue(value, feasible)

    def task_values(self, chance: ChanceParams, mode: str = "expected") -> np.ndarray:
        out = np.empty(self.instance.m, dtype=np.float64)
        self.instance.core.task_values(self.icache, self.fcache, *chance.kernel_args(),
                                       mode == "chebyshev", out)
        return out

    def to_text(self) -> str:
        return format_solution(self.slots)

    def __len__(self):
        return self.instance.n

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return np.array_equal(self.slots, other.slots)

    __hash__ = None

    def __repr__(self):
        return f"Assignment([{self.to_text()}])"


def apply_move(assignment: Assignment, item: int, new_state: int) -> Assignment:
    assignment.move(item, new_state)
    return assignment


def format_solution(slots) -> str:
    return " ".join(str(int(s)) for s in slots)


def parse_solution(text: str, instance: Instance) -> Assignment:
    try:
        values = [int(t) for t in text.split()]
    except ValueError:
        raise ValueError("solution must be whitespace-separated integers") from None
    return Assignment(instance, values)


def profit_density(instance: Instance, reference, item: int, k: int) -> float:
    """Profit per unit weight of ``item`` placed in knapsack ``k``, other items as in ``reference``."""
    if not 0 <= item < instance.n:
        raise ValueError(f"item index {item} out of range")
    if not 1 <= k <= instance.m:
        raise ValueError(f"knapsack id must be in 1..{instance.m}")
    slots = np.asarray(getattr(reference, "slots", reference))
    indptr, nbr, nval = instance.csr()
    gain = float(instance.item_profits[item])
    for e in range(indptr[item], indptr[item + 1]):
        if slots[nbr[e]] == k:
            gain += nval[e]
    return gain / float(instance.weights[item])


def density_matrix(instance: Instance, reference) -> np.ndarray:
    """``(n, m)`` matrix of :func:`profit_density` for every item and knapsack."""
    slots = np.asarray(getattr(reference, "slots", reference), dtype=np.int64)
    indptr, nbr, nval = instance.csr()
    rows = np.repeat(np.arange(instance.n), np.diff(indptr))
    acc = np.zeros((instance.n, instance.m + 1))
    np.add.at(acc, (rows, slots[nbr]), nval)
    gains = instance.item_profits[:, None] + acc[:, 1:]
    return gains / instance.weights[:, None]


@dataclass(frozen=True)
class PreferenceTable:
    """Preferred knapsack (1..m) of every item relative to a reference solution."""

    pref: np.ndarray
    reference_empty: bool

    def group(self, k: int) -> list[int]:
        return np.flatnonzero(self.pref == k).tolist()

    def groups(self, m: int) -> list[list[int]]:
        """Item groups per knapsack; index 0 (no preference) is always empty."""
        return [[]] + [self.group(k) for k in range(1, m + 1)]


def build_preference_table(instance: Instance, reference) -> PreferenceTable:
    slots = np.asarray(getattr(reference, "slots", reference), dtype=np.int64)
    if slots.shape != (instance.n,):
        raise ValueError(f"reference must have length {instance.n}")
    if not slots.any():
        ratio = (instance.item_profits / instance.weights).tolist()
        order = sorted(range(instance.n), key=lambda i: (-ratio[i], i))
        pref = np.empty(instance.n, dtype=np.int64)
        for rank, i in enumerate(order):
            pref[i] = rank % instance.m + 1
        return PreferenceTable(pref, True)
    pref = np.argmax(density_matrix(instance, slots), axis=1).astype(np.int64) + 1
    return PreferenceTable(pref, False)


class StateBlock:
    """Row-stacked population state in the layout the kernels operate on."""

    def __init__(self, instance: Instance, rows: int, tasks: bool = False):
        n, m1 = instance.n, instance.m + 1
        self.instance = instance
        self.slots = np.zeros((rows, n), dtype=np.int64)
        self.icache = np.zeros((rows, 3, m1), dtype=np.int64)
        self.fcache = np.zeros((rows, 2, m1), dtype=np.float64)
        self.moves = np.zeros(rows, dtype=np.int64)
        self.fit = np.zeros(rows, dtype=np.float64)
        self.feas = np.zeros(rows, dtype=np.uint8)
        self.birth = np.zeros(rows, dtype=np.int64)
        if tasks:
            self.g = np.zeros((rows, instance.m), dtype=np.float64)
            self.ranks = np.zeros((rows, instance.m), dtype=np.int64)
            self.skill = np.zeros(rows, dtype=np.int64)
            self.scalar = np.zeros(rows, dtype=np.float64)

    @property
    def state(self):
        return self.slots, self.icache, self.fcache, self.moves

    def load(self, row: int, assignment: Assignment) -> None:
        self.slots[row] = assignment.slots
        self.icache[row] = assignment.icache
        self.fcache[row] = assignment.fcache
        self.moves[row] = assignment.moves

    def assignment(self, row: int) -> Assignment:
        return Assignment.from_state(self.instance, self.slots[row], self.icache[row],
                                     self.fcache[row], self.moves[row])

"""Shared evaluation/wall-time budget."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

DEFAULT_MAX_EVALUATIONS = 5_000_000
DEFAULT_MAX_WALL_TIME = 1200.0
# wall-time is polled at least this often (in evaluations) inside a phase
CHECK_EVERY = 1000


@dataclass
class Budget:
    """Evaluation counter with an optional wall-clock cap (seconds; ``None`` disables it).

    :meth:`slice` hands a phase its own sub-budget; charges propagate to the parent.
    """

    max_evaluations: int = DEFAULT_MAX_EVALUATIONS
    max_wall_time: float | None = DEFAULT_MAX_WALL_TIME
    used_evaluations: int = 0
    start: float = field(default_factory=time.perf_counter)
    parent: "Budget | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.max_evaluations < 0:
            raise ValueError("max_evaluations must be >= 0")
        if self.max_wall_time is not None and self.max_wall_time < 0:
            raise ValueError("max_wall_time must be >= 0 or None")

    @property
    def remaining(self) -> int:
        return self.max_evaluations - self.used_evaluations

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    @property
    def time_up(self) -> bool:
        return self.max_wall_time is not None and self.elapsed >= self.max_wall_time

    @property
    def exhausted(self) -> bool:
        return self.remaining <= 0 or self.time_up

    def grant(self, want: int = CHECK_EVERY) -> int:
        """How many evaluations the caller may spend next (0 once exhausted)."""
        if self.exhausted:
            return 0
        return max(0, min(want, self.remaining))

    def charge(self, count: int = 1) -> None:
        if count < 0:
            raise ValueError("count must be >= 0")
        if count > self.remaining:
            raise RuntimeError(f"charging {count} evaluations exceeds the remaining {self.remaining}")
        self.used_evaluations += count
        if self.parent is not None:
            self.parent.charge(count)

    def slice(self, count: int) -> "Budget":
        """Sub-budget of at most ``count`` evaluations sharing this budget's clock."""
        return Budget(max(0, min(count, self.remaining)), self.max_wall_time,
                      start=self.start, parent=self)


def chunk_size(step: int) -> int:
    """Largest multiple of ``step`` not above :data:`CHECK_EVERY` (at least ``step``)."""
    return max(step, CHECK_EVERY // step * step)

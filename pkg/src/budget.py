# src/budget.py
from __future__ import annotations

import time
from typing import Optional

from .errors import BudgetExhausted


class BudgetTracker:
    """
    Cooperative budget: searches call tick() once per node and stop when it
    raises. Node caps are per tracker; child() starts a new node count on
    the same deadline, so one wall clock can cover a whole plane run.
    """

    def __init__(self, max_nodes: int, wall_clock_ms: int, clock=None, deadline: Optional[float] = None):
        self.max_nodes = max_nodes
        self.wall_clock_ms = wall_clock_ms
        self.nodes = 0
        self._clock = clock or time.monotonic
        self._started = self._clock()
        self._deadline = deadline if deadline is not None else self._started + wall_clock_ms / 1000.0

    @classmethod
    def from_budget(cls, budget) -> "BudgetTracker":
        return cls(budget.max_nodes, budget.wall_clock_ms)

    def child(self) -> "BudgetTracker":
        return BudgetTracker(self.max_nodes, self.wall_clock_ms, self._clock, deadline=self._deadline)

    def elapsed_ms(self) -> int:
        return int((self._clock() - self._started) * 1000)

    def out_of_time(self) -> bool:
        return self._clock() > self._deadline

    def tick(self, n: int = 1) -> None:
        self.nodes += n
        if self.nodes > self.max_nodes:
            raise BudgetExhausted("max_nodes", self.spent())
        # the clock is read every 256 nodes
        if (n > 1 or (self.nodes & 0xFF) == 0) and self._clock() > self._deadline:
            raise BudgetExhausted("wall_clock_ms", self.spent())

    def spent(self) -> dict:
        return {"nodes": self.nodes, "elapsed_ms": self.elapsed_ms()}

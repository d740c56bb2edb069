# src/exact_cover.py
"""
Exact covers of a point set by blocks (Algorithm X over a column -> rows
membership map, always branching on the column with the fewest rows).

Counting is the fast path; the covers themselves are only built when
collect=True.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Set, Tuple

from .budget import BudgetTracker


class ExactCover:
    def __init__(self, num_columns: int, rows: Sequence[Sequence[int]]):
        self.rows: List[Tuple[int, ...]] = [tuple(r) for r in rows]
        self.columns: Dict[int, Set[int]] = {c: set() for c in range(num_columns)}
        for i, row in enumerate(self.rows):
            for c in row:
                self.columns[c].add(i)

    def _select(self, r: int) -> List[Set[int]]:
        removed = []
        for c in self.rows[r]:
            for other in self.columns[c]:
                for c2 in self.rows[other]:
                    if c2 != c:
                        self.columns[c2].remove(other)
            removed.append(self.columns.pop(c))
        return removed

    def _deselect(self, r: int, removed: List[Set[int]]) -> None:
        for c in reversed(self.rows[r]):
            self.columns[c] = removed.pop()
            for other in self.columns[c]:
                for c2 in self.rows[other]:
                    if c2 != c:
                        self.columns[c2].add(other)

    def count(self, *, collect: bool = False, tracker: Optional[BudgetTracker] = None) -> Tuple[int, List[List[int]]]:
        covers: List[List[int]] = []
        partial: List[int] = []

        def search() -> int:
            if tracker is not None:
                tracker.tick()
            if not self.columns:
                if collect:
                    covers.append(sorted(partial))
                return 1
            c = min(self.columns, key=lambda k: (len(self.columns[k]), k))
            if not self.columns[c]:
                return 0
            total = 0
            for r in sorted(self.columns[c]):
                partial.append(r)
                removed = self._select(r)
                total += search()
                self._deselect(r, removed)
                partial.pop()
            return total

        n = search()
        return n, sorted(covers)


def count_exact_covers(
    num_points: int,
    blocks: Sequence[Sequence[int]],
    *,
    collect: bool = False,
    tracker: Optional[BudgetTracker] = None,
) -> Tuple[int, List[List[int]]]:
    """(count, covers) where covers lists block indices and is empty unless collect."""
    return ExactCover(num_points, blocks).count(collect=collect, tracker=tracker)


def naive_count(num_points: int, blocks: Sequence[Sequence[int]], *, limit: Optional[int] = None) -> Optional[int]:
    """
    Plain DFS on the lowest uncovered point, over bitmasks. Returns None once
    more than limit nodes have been visited.
    """
    through: List[List[int]] = [[] for _ in range(num_points)]
    for b in blocks:
        m = sum(1 << p for p in b)
        for p in b:
            through[p].append(m)
    full = (1 << num_points) - 1
    visited = 0

    def dfs(covered: int) -> int:
        nonlocal visited
        visited += 1
        if limit is not None and visited > limit:
            raise _Stop()
        if covered == full:
            return 1
        free = ~covered & full
        low = (free & -free).bit_length() - 1
        total = 0
        for m in through[low]:
            if not m & covered:
                total += dfs(covered | m)
        return total

    try:
        return dfs(0)
    except _Stop:
        return None


class _Stop(Exception):
    pass

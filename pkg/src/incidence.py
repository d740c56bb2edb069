# src/incidence.py
"""
Incidence structures, designs and projective planes.

Points are 0-based internally. Blocks are kept as strictly increasing tuples;
the packed bit-matrix and the Python-int masks are derived on first use and
cached. Everything here is immutable once built.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DuplicateBlocks,
    EmptyStructure,
    NotDivisible,
    NotLinear,
    PairCovered,
    WrongCounts,
)
from .utils import mask_of, pack_rows


@dataclass(frozen=True)
class IncidenceStructure:
    num_points: int
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_points < 0:
            raise ValueError(f"num_points must be non-negative, got {self.num_points}")
        if self.num_points == 0:
            raise EmptyStructure("an incidence structure needs at least one point")
        for i, blk in enumerate(self.blocks):
            for a, b in zip(blk, blk[1:]):
                if a >= b:
                    raise ValueError(f"block {i} is not strictly increasing: {blk}")
            if blk and (blk[0] < 0 or blk[-1] >= self.num_points):
                raise ValueError(f"block {i} has an index outside [0, {self.num_points}): {blk}")

    @classmethod
    def from_blocks(
        cls,
        num_points: int,
        blocks: Iterable[Iterable[int]],
        *,
        simple: bool = True,
    ) -> "IncidenceStructure":
        """Sort and deduplicate each block; reject repeated blocks when simple."""
        canon = []
        for blk in blocks:
            pts = tuple(sorted(set(int(x) for x in blk)))
            canon.append(pts)
        if simple:
            seen: Dict[Tuple[int, ...], int] = {}
            for i, blk in enumerate(canon):
                if blk in seen:
                    raise DuplicateBlocks(f"blocks {seen[blk]} and {i} are identical: {blk}")
                seen[blk] = i
        return cls(num_points, tuple(canon))

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @cached_property
    def bits(self) -> np.ndarray:
        """Packed bit-matrix, one uint64 row of ceil(v/64) words per block."""
        return pack_rows(self.blocks, self.num_points)

    @cached_property
    def masks(self) -> Tuple[int, ...]:
        return tuple(mask_of(blk) for blk in self.blocks)

    @cached_property
    def point_blocks(self) -> Tuple[Tuple[int, ...], ...]:
        """For each point, the indices of the blocks through it."""
        through: List[List[int]] = [[] for _ in range(self.num_points)]
        for i, blk in enumerate(self.blocks):
            for p in blk:
                through[p].append(i)
        return tuple(tuple(x) for x in through)

    def block_sizes(self) -> List[int]:
        return [len(b) for b in self.blocks]

    def relabel(self, images: Sequence[int]) -> "IncidenceStructure":
        """Apply a point bijection (point i goes to images[i]); blocks are re-sorted."""
        if len(images) != self.num_points:
            raise ValueError("relabeling must cover every point")
        return IncidenceStructure(
            self.num_points,
            tuple(tuple(sorted(images[p] for p in blk)) for blk in self.blocks),
        )

    def induced(self, points: Sequence[int], *, min_size: int = 1) -> "IncidenceStructure":
        """
        Restrict to a sorted point subset, re-indexed 0..len(points)-1 in
        ascending order. Block traces shorter than min_size are dropped.
        """
        index = {p: i for i, p in enumerate(sorted(points))}
        traces = []
        for blk in self.blocks:
            t = tuple(index[p] for p in blk if p in index)
            if len(t) >= min_size:
                traces.append(t)
        return IncidenceStructure(len(index), tuple(traces))

    @classmethod
    def from_one_based(cls, num_points: int, blocks: Iterable[Iterable[int]]) -> "IncidenceStructure":
        return cls.from_blocks(num_points, ([p - 1 for p in blk] for blk in blocks))


@dataclass(frozen=True)
class DesignParams:
    t: int
    v: int
    k: int
    lam: int
    r: int = field(init=False)
    b: int = field(init=False)

    def __post_init__(self) -> None:
        for name in ("t", "v", "k", "lam"):
            if getattr(self, name) <= 0:
                raise ValueError(f"design parameter {name} must be positive")
        if self.k < 2:
            raise ValueError("block size k must be at least 2")
        num = self.lam * (self.v - 1)
        if num % (self.k - 1):
            raise NotDivisible(f"r = {self.lam}*({self.v}-1)/({self.k}-1) is not an integer")
        r = num // (self.k - 1)
        if (self.v * r) % self.k:
            raise NotDivisible(f"b = {self.v}*{r}/{self.k} is not an integer")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "b", self.v * r // self.k)

    @classmethod
    def unital(cls, q: int) -> "DesignParams":
        return cls(2, q ** 3 + 1, q + 1, 1)

    @classmethod
    def plane(cls, n: int) -> "DesignParams":
        return cls(2, n * n + n + 1, n + 1, 1)


@dataclass(frozen=True)
class ProjectivePlane:
    name: str
    order: int
    structure: IncidenceStructure

    @property
    def num_points(self) -> int:
        return self.structure.num_points

    @property
    def lines(self) -> Tuple[Tuple[int, ...], ...]:
        return self.structure.blocks

    @property
    def line_masks(self) -> Tuple[int, ...]:
        return self.structure.masks

    @cached_property
    def join(self) -> np.ndarray:
        """join[p, q] = index of the line through p and q (-1 on the diagonal)."""
        v = self.num_points
        table = np.full((v, v), -1, dtype=np.int32)
        for li, line in enumerate(self.lines):
            idx = np.asarray(line, dtype=np.intp)
            table[np.ix_(idx, idx)] = li
        np.fill_diagonal(table, -1)
        return table

    def line_through(self, p: int, q: int) -> int:
        return int(self.join[p, q])

    def meet(self, a: int, b: int) -> int:
        """Point common to lines a and b."""
        common = self.line_masks[a] & self.line_masks[b]
        return common.bit_length() - 1

    def dual(self) -> "ProjectivePlane":
        name = self.name[:-2] if self.name.endswith("^T") else self.name + "^T"
        return ProjectivePlane(name, self.order, dual(self.structure))


def verify_plane(s: IncidenceStructure, n: int, name: str = "") -> ProjectivePlane:
    v = n * n + n + 1
    if s.num_points != v:
        raise WrongCounts(f"expected {v} points for order {n}, found {s.num_points}")
    if s.num_blocks != v:
        raise WrongCounts(f"expected {v} lines for order {n}, found {s.num_blocks}")
    for i, blk in enumerate(s.blocks):
        if len(blk) != n + 1:
            raise WrongCounts(f"line {i} has {len(blk)} points, expected {n + 1}")
    a = incidence_matrix(s).astype(np.int32)
    pp = a.T @ a
    degrees = np.diag(pp)
    bad = np.nonzero(degrees != n + 1)[0]
    if bad.size:
        p = int(bad[0])
        raise WrongCounts(f"point {p} lies on {int(degrees[p])} lines, expected {n + 1}")
    np.fill_diagonal(pp, 1)
    off = np.argwhere(pp != 1)
    if off.size:
        p, q = (int(x) for x in off[0])
        raise PairCovered((p, q), int(pp[p, q]))
    ll = a @ a.T
    np.fill_diagonal(ll, 1)
    off = np.argwhere(ll != 1)
    if off.size:
        x, y = (int(t) for t in off[0])
        raise NotLinear(f"lines {x} and {y} meet in {int(ll[x, y])} points")
    logging.debug("verified plane %s of order %d", name or "<unnamed>", n)
    return ProjectivePlane(name, n, s)


def design_violation(s: IncidenceStructure, p: DesignParams) -> Optional[str]:
    """First violated design condition, or None when s is a 2-(v,k,lambda) design."""
    if p.t != 2:
        raise ValueError("only 2-designs are supported")
    if s.num_points != p.v:
        return f"structure has {s.num_points} points, parameters say {p.v}"
    if s.num_blocks != p.b:
        return f"structure has {s.num_blocks} blocks, parameters say b={p.b}"
    for i, blk in enumerate(s.blocks):
        if len(blk) != p.k:
            return f"block {i} has size {len(blk)}, expected k={p.k}"
    a = incidence_matrix(s).astype(np.int32)
    pp = a.T @ a
    degrees = np.diag(pp).copy()
    np.fill_diagonal(pp, p.lam)
    off = np.argwhere(pp != p.lam)
    if off.size:
        x, y = (int(t) for t in off[0])
        return f"points {x} and {y} lie together in {int(pp[x, y])} blocks, expected {p.lam}"
    bad = np.nonzero(degrees != p.r)[0]
    if bad.size:
        x = int(bad[0])
        return f"point {x} lies in {int(degrees[x])} blocks, expected r={p.r}"
    return None


def verify_design(s: IncidenceStructure, p: DesignParams) -> bool:
    problem = design_violation(s, p)
    if problem:
        logging.debug("not a 2-(%d,%d,%d) design: %s", p.v, p.k, p.lam, problem)
        return False
    return True


def dual(s: IncidenceStructure) -> IncidenceStructure:
    if s.num_blocks == 0 or s.num_points == 0:
        raise EmptyStructure("the dual of a structure without points or blocks is undefined")
    return IncidenceStructure(s.num_blocks, s.point_blocks)


def incidence_matrix(s: IncidenceStructure) -> np.ndarray:
    """b x v 0/1 matrix; entry (i, j) is 1 when block i contains point j."""
    m = np.zeros((s.num_blocks, s.num_points), dtype=np.uint8)
    for i, blk in enumerate(s.blocks):
        if blk:
            m[i, list(blk)] = 1
    return m

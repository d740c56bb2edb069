# src/permgroup.py
"""
Permutations, permutation groups and a Schreier-Sims stabilizer chain.

Convention: compose(a, b) applies a first, then b, so
compose(a, b).images[i] == b.images[a.images[i]].

The chain keeps, per level, a base point, the strong generators fixing the
earlier base points, and a transversal mapping each orbit point to a coset
representative (with its inverse). Group orders are exact Python ints.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from random import Random
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .budget import BudgetTracker
from .errors import BudgetExhausted, DegreeMismatch
from .models import SearchBudget

Perm = Tuple[int, ...]


def _mult(p: Perm, q: Perm) -> Perm:
    return tuple([q[i] for i in p])


def _inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _is_id(p: Perm) -> bool:
    return all(i == j for i, j in enumerate(p))


@dataclass(frozen=True, order=True)
class Permutation:
    images: Perm

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def is_identity(self) -> bool:
        return _is_id(self.images)

    def cycles(self) -> List[Tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [i], self.images[i]
            seen.add(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def power(self, k: int) -> "Permutation":
        base = self if k >= 0 else inverse(self)
        result = identity(self.degree)
        for _ in range(abs(k)):
            result = compose(result, base)
        return result

    def one_based(self) -> List[int]:
        return [x + 1 for x in self.images]

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> "Permutation":
        return cls(tuple(x - 1 for x in images))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def compose(a: Permutation, b: Permutation) -> Permutation:
    if a.degree != b.degree:
        raise DegreeMismatch(f"cannot compose degrees {a.degree} and {b.degree}")
    return Permutation(_mult(a.images, b.images))


def inverse(a: Permutation) -> Permutation:
    return Permutation(_inv(a.images))


def conjugate(a: Permutation, h: Permutation) -> Permutation:
    """h^-1 a h"""
    return compose(compose(inverse(h), a), h)


# ---------------------------------
# Stabilizer chain
# ---------------------------------


@dataclass
class _Level:
    base_point: int
    gens: List[Perm] = field(default_factory=list)
    # orbit point -> (u, u^-1) with u mapping base_point to that point
    transversal: Dict[int, Tuple[Perm, Perm]] = field(default_factory=dict)
    checked: set = field(default_factory=set)

    def extend_orbit(self, ident: Perm) -> None:
        if not self.transversal:
            self.transversal[self.base_point] = (ident, ident)
        frontier = list(self.transversal)
        seen = set(frontier)
        while frontier:
            nxt = []
            for pt in frontier:
                u = self.transversal[pt][0]
                for g in self.gens:
                    img = g[pt]
                    if img not in self.transversal:
                        w = _mult(u, g)
                        self.transversal[img] = (w, _inv(w))
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt


class StabChain:
    def __init__(self, degree: int, generators: Sequence[Perm]):
        self.degree = degree
        self.ident: Perm = tuple(range(degree))
        self.levels: List[_Level] = []
        gens = [g for g in generators if not _is_id(g)]
        for g in gens:
            self._ensure_moves_base(g)
        for i, lvl in enumerate(self.levels):
            prefix = [l.base_point for l in self.levels[:i]]
            lvl.gens = [g for g in gens if all(g[b] == b for b in prefix)]
            lvl.extend_orbit(self.ident)
        self._schreier_sims()

    def _ensure_moves_base(self, g: Perm) -> None:
        if all(g[l.base_point] == l.base_point for l in self.levels):
            moved = next(i for i, x in enumerate(g) if x != i)
            self.levels.append(_Level(moved))

    def sift(self, g: Perm, start: int = 0) -> Tuple[Perm, int]:
        """Strip g through levels start..; returns (residue, level where it stopped)."""
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            img = g[lvl.base_point]
            rep = lvl.transversal.get(img)
            if rep is None:
                return g, j
            g = _mult(g, rep[1])
        return g, len(self.levels)

    def _schreier_sims(self) -> None:
        i = len(self.levels) - 1
        while i >= 0:
            lvl = self.levels[i]
            restart = None
            for beta in list(lvl.transversal):
                u_beta = lvl.transversal[beta][0]
                for s_idx, s in enumerate(lvl.gens):
                    key = (beta, s_idx)
                    if key in lvl.checked:
                        continue
                    lvl.checked.add(key)
                    inv_rep = lvl.transversal[s[beta]][1]
                    h = _mult(_mult(u_beta, s), inv_rep)
                    residue, j = self.sift(h, i + 1)
                    if _is_id(residue):
                        continue
                    if j == len(self.levels):
                        moved = next(x for x, y in enumerate(residue) if x != y)
                        self.levels.append(_Level(moved))
                    for l in range(i + 1, j + 1):
                        self.levels[l].gens.append(residue)
                        self.levels[l].extend_orbit(self.ident)
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1

    @property
    def base(self) -> List[int]:
        return [l.base_point for l in self.levels]

    def order(self) -> int:
        out = 1
        for lvl in self.levels:
            out *= len(lvl.transversal)
        return out

    def contains(self, g: Perm) -> bool:
        if len(g) != self.degree:
            return False
        residue, _ = self.sift(g)
        return _is_id(residue)

    def random_element(self, rng: Random) -> Perm:
        g = self.ident
        for lvl in reversed(self.levels):
            pts = sorted(lvl.transversal)
            g = _mult(g, lvl.transversal[pts[rng.randrange(len(pts))]][0])
        return g

    def strong_generators(self) -> List[Perm]:
        out, seen = [], set()
        for lvl in self.levels:
            for g in lvl.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out


class PermGroup:
    def __init__(self, degree: int, generators: Iterable[Permutation] = ()):
        self.degree = degree
        gens = tuple(generators)
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a group of degree {degree}")
        self.generators: Tuple[Permutation, ...] = gens

    @cached_property
    def chain(self) -> StabChain:
        chain = StabChain(self.degree, [g.images for g in self.generators])
        logging.debug("stabilizer chain: base=%s order=%d", chain.base, chain.order())
        return chain

    @property
    def order(self) -> int:
        return self.chain.order()

    def contains(self, g: Permutation) -> bool:
        return self.chain.contains(g.images)

    def random_element(self, rng: Random) -> Permutation:
        return Permutation(self.chain.random_element(rng))

    def orbits(self) -> List[List[int]]:
        return orbits(self)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "order": str(self.order),
            "generators": [g.one_based() for g in self.generators],
        }

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"


@dataclass(frozen=True)
class Subgroup:
    parent: PermGroup = field(compare=False, repr=False)
    elements: Tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.elements[0].degree

    @property
    def generators(self) -> Tuple[Permutation, ...]:
        return self.elements

    def key(self) -> Tuple[Perm, ...]:
        return tuple(e.images for e in self.elements)

    def small_generating_set(self) -> List[Permutation]:
        """Greedy: add elements until their closure is the whole subgroup."""
        gens: List[Permutation] = []
        have = {identity(self.degree).images}
        for e in self.elements:
            if e.images in have:
                continue
            gens.append(e)
            have = set(closure([g.images for g in gens], self.degree, cap=self.order) or ())
            if len(have) == self.order:
                break
        return gens

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "generators": [g.one_based() for g in self.small_generating_set()],
        }


GroupLike = Union[PermGroup, Subgroup]


def orbits(group: GroupLike) -> List[List[int]]:
    """Orbits as sorted lists, ordered by their minimum element."""
    n = group.degree
    gens = [g.images for g in group.generators]
    seen = [False] * n
    out: List[List[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        orb, frontier = [start], [start]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = g[x]
                    if not seen[y]:
                        seen[y] = True
                        orb.append(y)
                        nxt.append(y)
            frontier = nxt
        out.append(sorted(orb))
    return out


def orbit_of(point: int, gens: Sequence[Perm]) -> List[int]:
    seen = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def build_chain(group: PermGroup) -> Tuple[int, Callable[[Permutation], bool]]:
    chain = group.chain
    return chain.order(), (lambda g: chain.contains(g.images))


def closure(gens: Sequence[Perm], degree: int, cap: Optional[int] = None) -> Optional[List[Perm]]:
    """All elements generated by gens, or None as soon as there are more than cap."""
    ident = tuple(range(degree))
    elems = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mult(x, g)
                if y not in elems:
                    elems.add(y)
                    order.append(y)
                    nxt.append(y)
                    if cap is not None and len(elems) > cap:
                        return None
        frontier = nxt
    return order


def brute_force_order(group: PermGroup, limit: int = 5000) -> Optional[int]:
    elems = closure([g.images for g in group.generators], group.degree, cap=limit)
    return None if elems is None else len(elems)


def _element_order(p: Perm) -> int:
    seen = [False] * len(p)
    out = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        length, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        out = math.lcm(out, length)
    return out


def _power(p: Perm, k: int) -> Perm:
    out = tuple(range(len(p)))
    base = p
    while k:
        if k & 1:
            out = _mult(out, base)
        base = _mult(base, base)
        k >>= 1
    return out


@dataclass
class SubgroupSearch:
    subgroups: List[Subgroup]
    exhausted: bool
    seed: int
    target_order: int
    samples: int = 0


def subgroup_violation(elems: Sequence[Perm], order: int) -> Optional[str]:
    """First reason elems is not a subgroup of the given order, or None."""
    have = set(elems)
    if len(have) != order:
        return f"{len(have)} elements, expected {order}"
    for a in have:
        for b in have:
            if _mult(a, b) not in have:
                return "not closed under composition"
    for x in range(len(next(iter(have)))):
        size = len({e[x] for e in have})
        if order % size:
            return f"orbit of {x} has {size} points, which does not divide {order}"
    return None


def _make_subgroup(parent: PermGroup, elems: Sequence[Perm], order: int) -> Subgroup:
    problem = subgroup_violation(elems, order)
    if problem is None and not all(parent.chain.contains(e) for e in elems):
        problem = "element outside the parent group"
    if problem:
        raise RuntimeError(f"sampled subgroup rejected: {problem}")
    return Subgroup(parent, tuple(Permutation(e) for e in sorted(elems)))


def enumerate_small_subgroups(
    group: PermGroup,
    target_order: int,
    budget: SearchBudget,
    *,
    conjugacy_filter: bool = False,
    extension_tries: int = 8,
    tracker: Optional[BudgetTracker] = None,
) -> SubgroupSearch:
    """
    Randomized sampler for subgroups of a given small order.

    Random elements come from the stabilizer chain; powers of each give
    cyclic subgroups whose orders divide the target; each cyclic subgroup is
    then grown by closures with other sampled elements, keeping closures
    whose order divides the target. Subgroups of exactly the target order
    are kept, deduplicated by element set, after their closure and orbit
    sizes are checked. There is no completeness claim.
    """
    order = group.order
    if target_order < 1 or order % target_order:
        return SubgroupSearch([], False, budget.seed, target_order)
    rng = Random(budget.seed)
    tracker = tracker or BudgetTracker.from_budget(budget)
    n = group.degree
    found: Dict[Tuple[Perm, ...], Subgroup] = {}
    cyclic: Dict[frozenset, List[Perm]] = {}
    pool: List[Perm] = []
    exhausted = False
    samples = 0

    def record(elems: List[Perm]) -> None:
        key = tuple(sorted(elems))
        if key in found:
            return
        if conjugacy_filter and found and _conjugate_to_found(key, found, group, rng):
            return
        found[key] = _make_subgroup(group, elems, target_order)
        logging.debug("subgroup of order %d found after %d samples", target_order, samples)

    def grow(start: List[Perm]) -> None:
        current = start
        for _ in range(extension_tries):
            if len(current) == target_order or not pool:
                break
            x = pool[rng.randrange(len(pool))]
            if x in current:
                continue
            tracker.tick()
            elems = closure(list(_generators_of(current)) + [x], n, cap=target_order)
            if elems is None or target_order % len(elems):
                continue
            current = elems
        if len(current) == target_order:
            record(current)

    try:
        if target_order == 1:
            record([tuple(range(n))])
        while len(found) < budget.max_subgroups and target_order > 1:
            tracker.tick()
            samples += 1
            g = group.chain.random_element(rng)
            m = _element_order(g)
            for d in range(2, target_order + 1):
                if target_order % d or m % d:
                    continue
                c = _power(g, m // d)
                elems = closure([c], n, cap=target_order)
                key = frozenset(elems)
                if key in cyclic:
                    # seen before: grow again with other extensions
                    elems = cyclic[key]
                else:
                    cyclic[key] = elems
                    pool.append(c)
                if d == target_order:
                    record(elems)
                else:
                    grow(elems)
                if len(found) >= budget.max_subgroups:
                    break
    except BudgetExhausted as ex:
        exhausted = True
        logging.warning(
            "subgroup sampling for order %d stopped (%s) with %d subgroups", target_order, ex.reason, len(found)
        )
    subgroups = sorted(found.values(), key=lambda s: s.key())
    return SubgroupSearch(subgroups, exhausted, budget.seed, target_order, samples)


def _generators_of(elems: List[Perm]) -> List[Perm]:
    # a closure is generated by its non-identity elements; keep the list short
    ident = tuple(range(len(elems[0])))
    gens: List[Perm] = []
    have = {ident}
    for e in elems:
        if e in have:
            continue
        gens.append(e)
        have = set(closure(gens, len(ident)) or ())
        if len(have) == len(elems):
            break
    return gens


def _conjugate_to_found(key: Tuple[Perm, ...], found: Dict, group: PermGroup, rng: Random, tries: int = 4) -> bool:
    elems = set(key)
    for _ in range(tries):
        h = group.chain.random_element(rng)
        hinv = _inv(h)
        image = tuple(sorted(_mult(_mult(hinv, e), h) for e in elems))
        if image in found:
            return True
    return False

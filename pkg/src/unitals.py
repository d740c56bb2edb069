# src/unitals.py
"""
Unitals in projective planes of square order q^2.

A unital is a set of q^3+1 points meeting every line in 1 or q+1 points.
Its secant-line traces form a 2-(q^3+1, q+1, 1) design; its tangent lines
form a unital of the dual plane.

Two searches live here:

- search_orbit_unions: unions of orbits of a subgroup H of the plane's
  collineation group, found by a DFS over the H-orbits;
- embed_design_in_plane: backtracking for an injection of a unital design
  into a plane that sends every block into a line.

Both are budgeted. Running out of budget is reported on the result
(exhausted=True) together with whatever was found so far.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .autom import automorphism_group, canonical_certificate
from .budget import BudgetTracker
from .dedupe import unique_by
from .errors import BudgetExhausted, NotAUnital
from .geometry import square_root_order
from .incidence import DesignParams, IncidenceStructure, ProjectivePlane, design_violation
from .models import DesignReport, SearchBudget
from .permgroup import PermGroup, Permutation, Subgroup, enumerate_small_subgroups, orbit_of, orbits
from .utils import indices_of, intersection_counts, mask_of, pack_rows


# ---------------------------------
# Checking
# ---------------------------------


def unital_violation(plane: ProjectivePlane, pts: Iterable[int]) -> Optional[str]:
    """First reason pts is not a unital of plane, or None."""
    q = square_root_order(plane.order)
    chosen = set(pts)
    if len(chosen) != q ** 3 + 1:
        return f"{len(chosen)} points, a unital has {q ** 3 + 1}"
    if any(p < 0 or p >= plane.num_points for p in chosen):
        return "point label outside the plane"
    counts = line_intersections(plane, chosen)
    bad = np.nonzero((counts != 1) & (counts != q + 1))[0]
    if bad.size:
        li = int(bad[0])
        return f"line {li + 1} meets the set in {int(counts[li])} points"
    return None


def line_intersections(plane: ProjectivePlane, pts: Iterable[int]) -> np.ndarray:
    """|line & pts| for every line, on the packed bit-matrix."""
    query = pack_rows([sorted(pts)], plane.num_points)[0]
    return intersection_counts(plane.structure.bits, query)


def is_unital(plane: ProjectivePlane, pts: Iterable[int]) -> bool:
    problem = unital_violation(plane, pts)
    if problem:
        logging.debug("not a unital of %s: %s", plane.name, problem)
        return False
    return True


@dataclass(frozen=True)
class Unital:
    plane: ProjectivePlane = field(repr=False)
    q: int
    points: Tuple[int, ...]

    @classmethod
    def of(cls, plane: ProjectivePlane, pts: Iterable[int]) -> "Unital":
        points = tuple(sorted(set(pts)))
        problem = unital_violation(plane, points)
        if problem:
            raise NotAUnital(f"{plane.name}: {problem}")
        return cls(plane, square_root_order(plane.order), points)

    @cached_property
    def mask(self) -> int:
        return mask_of(self.points)

    def one_based(self) -> List[int]:
        return [p + 1 for p in self.points]


def design_from_unital(u: Unital) -> IncidenceStructure:
    """Secant traces, re-indexed 0..q^3 in ascending order of the unital points."""
    return u.plane.structure.induced(u.points, min_size=2)


def check_design(u: Unital) -> Optional[str]:
    return design_violation(design_from_unital(u), DesignParams.unital(u.q))


def tangent_lines(u: Unital) -> List[int]:
    m = u.mask
    return [li for li, lm in enumerate(u.plane.line_masks) if (lm & m).bit_count() == 1]


@lru_cache(maxsize=64)
def _dual_plane(plane: ProjectivePlane) -> ProjectivePlane:
    return plane.dual()


def dual_unital(u: Unital) -> Unital:
    tangents = tangent_lines(u)
    dp = _dual_plane(u.plane)
    problem = unital_violation(dp, tangents)
    if problem:
        raise RuntimeError(f"tangent lines of a unital in {u.plane.name} fail in the dual plane: {problem}")
    return Unital(dp, u.q, tuple(tangents))


def design_certificate(u: Unital) -> str:
    return canonical_certificate(design_from_unital(u)).hex()


# ---------------------------------
# Orbit-union search
# ---------------------------------


@dataclass
class OrbitUnionResult:
    plane: str
    subgroup: Optional[Subgroup]
    unitals: List[Unital]
    exhausted: bool = False
    reason: Optional[str] = None
    nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "plane": self.plane,
            "subgroup": self.subgroup.to_dict() if self.subgroup is not None else None,
            "unitals": [u.one_based() for u in self.unitals],
            "exhausted": self.exhausted,
            "reason": self.reason,
            "nodes": self.nodes,
        }


def _orbits_of(plane: ProjectivePlane, H: Optional[Subgroup]) -> List[List[int]]:
    if H is None:
        return [[p] for p in range(plane.num_points)]
    if H.degree != plane.num_points:
        raise ValueError(f"subgroup acts on {H.degree} points, {plane.name} has {plane.num_points}")
    return orbits(H)


def search_orbit_unions(
    plane: ProjectivePlane,
    H: Optional[Subgroup],
    budget: SearchBudget,
    *,
    tracker: Optional[BudgetTracker] = None,
) -> OrbitUnionResult:
    """
    H-invariant unitals of plane, deduplicated by design certificate and
    ordered by it. H=None means the trivial group.
    """
    q = square_root_order(plane.order)
    target, cap = q ** 3 + 1, q + 1
    tracker = tracker or BudgetTracker.from_budget(budget)
    line_masks = plane.line_masks

    # orbits meeting some line in more than q+1 points can never be used
    usable: List[Tuple[int, List[Tuple[int, int]]]] = []
    all_orbits = _orbits_of(plane, H)
    for orb in all_orbits:
        if len(orb) > target:
            continue
        om = mask_of(orb)
        hits = []
        for li, lm in enumerate(line_masks):
            c = (lm & om).bit_count()
            if c:
                hits.append((li, c))
        if all(c <= cap for _, c in hits):
            usable.append((om, hits))
    usable.sort(key=lambda t: (-t[0].bit_count(), (t[0] & -t[0]).bit_length()))
    sizes = [om.bit_count() for om, _ in usable]
    logging.debug(
        "%s: %d orbits (%d usable) under a subgroup of order %s",
        plane.name, len(all_orbits), len(usable), H.order if H else 1,
    )

    # reach[i] has bit s set when s is a sum of sizes of orbits i..end
    reach = [0] * (len(usable) + 1)
    reach[-1] = 1
    for i in range(len(usable) - 1, -1, -1):
        reach[i] = reach[i + 1] | (reach[i + 1] << sizes[i])

    counts = [0] * len(line_masks)
    found: List[Unital] = []

    def dfs(i: int, size: int, chosen: int) -> None:
        tracker.tick()
        if size == target:
            if all(c == 1 or c == cap for c in counts):
                found.append(Unital(plane, q, tuple(indices_of(chosen))))
            return
        if i == len(usable) or not (reach[i] >> (target - size)) & 1:
            return
        om, hits = usable[i]
        if size + sizes[i] <= target:
            ok = True
            for li, c in hits:
                counts[li] += c
                if counts[li] > cap:
                    ok = False
            if ok:
                dfs(i + 1, size + sizes[i], chosen | om)
            for li, c in hits:
                counts[li] -= c
        dfs(i + 1, size, chosen)

    exhausted, reason = False, None
    try:
        dfs(0, 0, 0)
    except BudgetExhausted as ex:
        exhausted, reason = True, ex.reason
        logging.warning(
            "orbit-union search in %s stopped (%s) after %d nodes, %d unitals so far",
            plane.name, ex.reason, tracker.nodes, len(found),
        )
    unique = unique_by(found, key=design_certificate)
    return OrbitUnionResult(plane.name, H, unique, exhausted, reason, tracker.nodes)


@dataclass
class SearchHit:
    unital: Unital
    report: DesignReport
    subgroup_order: int
    subgroup_generators: List[List[int]]
    seed: int

    def to_dict(self) -> dict:
        return {
            "plane": self.unital.plane.name,
            "points": self.unital.one_based(),
            "subgroup": {"order": self.subgroup_order, "generators": self.subgroup_generators},
            "seed": self.seed,
            "certificate": self.report.certificate,
            "report": self.report.to_dict(),
        }


@dataclass
class PlaneSearchResult:
    plane: str
    orders: List[int]
    budget: SearchBudget
    hits: List[SearchHit] = field(default_factory=list)
    subgroups_tried: int = 0
    exhausted: bool = False
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "plane": self.plane,
            "orders": self.orders,
            "budget": self.budget.to_dict(),
            "subgroups_tried": self.subgroups_tried,
            "exhausted": self.exhausted,
            "reason": self.reason,
            "results": [h.to_dict() for h in self.hits],
        }


def search_plane(
    plane: ProjectivePlane,
    orders: Iterable[int],
    budget: SearchBudget,
    *,
    group: Optional[PermGroup] = None,
) -> PlaneSearchResult:
    from .analytics import analyze

    wanted = sorted(set(orders))
    result = PlaneSearchResult(plane.name, wanted, budget)
    if not wanted:
        return result
    # one wall clock for the whole plane; node caps stay per subgroup
    clock = BudgetTracker.from_budget(budget)
    group = group or automorphism_group(plane.structure)
    by_cert: Dict[str, SearchHit] = {}
    for order in wanted:
        if clock.out_of_time():
            break
        sampled = enumerate_small_subgroups(group, order, budget, tracker=clock.child())
        result.exhausted |= sampled.exhausted
        logging.info("%s: %d subgroups of order %d", plane.name, len(sampled.subgroups), order)
        for H in sampled.subgroups:
            if clock.out_of_time():
                break
            result.subgroups_tried += 1
            found = search_orbit_unions(plane, H, budget, tracker=clock.child())
            if found.exhausted:
                result.exhausted, result.reason = True, found.reason
            for u in found.unitals:
                cert = design_certificate(u)
                if cert in by_cert:
                    continue
                report = analyze(plane, u, unital_id=f"search.{len(by_cert) + 1}")
                by_cert[cert] = SearchHit(u, report, H.order, H.to_dict()["generators"], budget.seed)
    if clock.out_of_time():
        result.exhausted, result.reason = True, "wall_clock_ms"
        logging.warning("%s: plane search stopped after %d subgroups (wall clock)", plane.name, result.subgroups_tried)
    result.hits = [by_cert[c] for c in sorted(by_cert)]
    for i, hit in enumerate(result.hits, start=1):
        hit.report.unital_id = f"search.{i}"
    return result


# ---------------------------------
# Embedding a design into a plane
# ---------------------------------


@dataclass
class EmbedResult:
    plane: str
    injection: Optional[Tuple[int, ...]]
    exhausted: bool = False
    reason: Optional[str] = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.injection is not None

    def status(self) -> str:
        if self.found:
            return "found"
        return "not found within budget" if self.exhausted else "not found"

    def to_dict(self) -> dict:
        return {
            "plane": self.plane,
            "status": self.status(),
            "injection": [p + 1 for p in self.injection] if self.injection else None,
            "exhausted": self.exhausted,
            "reason": self.reason,
            "nodes": self.nodes,
        }


def verify_embedding(d: IncidenceStructure, plane: ProjectivePlane, injection: Sequence[int]) -> Optional[str]:
    if len(set(injection)) != d.num_points:
        return "map is not injective"
    for bi, blk in enumerate(d.blocks):
        img = mask_of(injection[p] for p in blk)
        if not any(lm & img == img for lm in plane.line_masks):
            return f"block {bi + 1} is not inside a line"
    return unital_violation(plane, injection)


class _Embedder:
    def __init__(self, d: IncidenceStructure, plane: ProjectivePlane, tracker: BudgetTracker):
        self.d = d
        self.plane = plane
        self.tracker = tracker
        self.v = d.num_points
        self.img = [-1] * d.num_points
        self.used = 0
        self.block_line = [-1] * d.num_blocks
        self.block_mapped = [0] * d.num_blocks
        self.line_owner: Dict[int, int] = {}
        # cover[P]: owned lines through P; free: points with cover 0
        self.cover = [0] * plane.num_points
        self.free = (1 << plane.num_points) - 1

    def _own(self, bi: int, li: int) -> None:
        self.block_line[bi] = li
        self.line_owner[li] = bi
        for P in self.plane.lines[li]:
            self.cover[P] += 1
            if self.cover[P] == 1:
                self.free &= ~(1 << P)

    def _disown(self, bi: int) -> None:
        li = self.block_line[bi]
        del self.line_owner[li]
        self.block_line[bi] = -1
        for P in self.plane.lines[li]:
            self.cover[P] -= 1
            if self.cover[P] == 0:
                self.free |= 1 << P

    def candidates(self, x: int) -> int:
        """Unused points lying on every fixed line of x's blocks and on no other owned line."""
        lines = [self.block_line[bi] for bi in self.d.point_blocks[x] if self.block_line[bi] >= 0]
        if not lines:
            return self.free & ~self.used
        cand = ~self.used
        for li in lines:
            cand &= self.plane.line_masks[li]
        k = len(lines)
        return mask_of(P for P in indices_of(cand) if self.cover[P] == k)

    def choose(self) -> Optional[Tuple[int, int]]:
        """
        Next point to map with its candidates, or None when some unmapped
        point has none left. Forced points go first, then the point on the
        most blocks already touched by the map.
        """
        best = None
        for x in range(self.v):
            if self.img[x] >= 0:
                continue
            cand = self.candidates(x)
            n = cand.bit_count()
            if n == 0:
                return None
            blocks = self.d.point_blocks[x]
            fixed = sum(1 for bi in blocks if self.block_line[bi] >= 0)
            touched = sum(1 for bi in blocks if self.block_mapped[bi])
            key = (n > 1, -(touched + fixed), n, x)
            if best is None or key < best[0]:
                best = (key, x, cand)
        return best[1], best[2]

    def place(self, x: int, P: int) -> Optional[List[int]]:
        """Map x to P; returns the blocks whose line got fixed, or None when inconsistent."""
        own = set(self.d.point_blocks[x])
        for li in self.plane.structure.point_blocks[P]:
            owner = self.line_owner.get(li)
            if owner is not None and owner not in own:
                return None
        bit = 1 << P
        newly: List[int] = []
        for bi in self.d.point_blocks[x]:
            li = self.block_line[bi]
            if li >= 0:
                if not self.plane.line_masks[li] & bit:
                    self._undo(newly)
                    return None
                continue
            if not self.block_mapped[bi]:
                continue
            other = next(self.img[y] for y in self.d.blocks[bi] if self.img[y] >= 0)
            li = self.plane.line_through(P, other)
            if li in self.line_owner:
                self._undo(newly)
                return None
            mapped_here = mask_of(self.img[y] for y in self.d.blocks[bi] if self.img[y] >= 0) | bit
            if (self.plane.line_masks[li] & (self.used | bit)) != mapped_here:
                self._undo(newly)
                return None
            self._own(bi, li)
            newly.append(bi)
        self.img[x] = P
        self.used |= bit
        for bi in self.d.point_blocks[x]:
            self.block_mapped[bi] += 1
        return newly

    def _undo(self, blocks: List[int]) -> None:
        for bi in reversed(blocks):
            self._disown(bi)

    def unplace(self, x: int, newly: List[int]) -> None:
        self.used &= ~(1 << self.img[x])
        self.img[x] = -1
        for bi in self.d.point_blocks[x]:
            self.block_mapped[bi] -= 1
        self._undo(newly)

    def dfs(self, placed: int) -> Optional[Tuple[int, ...]]:
        self.tracker.tick()
        if placed == self.v:
            witness = tuple(self.img)
            if verify_embedding(self.d, self.plane, witness) is None:
                return witness
            return None
        picked = self.choose()
        if picked is None:
            return None
        x, cand = picked
        for P in indices_of(cand):
            newly = self.place(x, P)
            if newly is None:
                continue
            out = self.dfs(placed + 1)
            if out is not None:
                return out
            self.unplace(x, newly)
        return None

    def run(self, flags: Sequence[Tuple[int, int]]) -> Optional[Tuple[int, ...]]:
        # block 0 goes onto the line of a flag, its first point onto the flag's point
        x0 = self.d.blocks[0][0]
        for li, P in flags:
            self._own(0, li)
            newly = self.place(x0, P)
            if newly is not None:
                out = self.dfs(1)
                if out is not None:
                    return out
                self.unplace(x0, newly)
            self._disown(0)
        return None


def embed_design_in_plane(
    d: IncidenceStructure,
    plane: ProjectivePlane,
    budget: SearchBudget,
    *,
    plane_group: Optional[PermGroup] = None,
) -> EmbedResult:
    """
    Look for an injection of the points of d into plane sending every block
    into a line (distinct blocks into distinct lines).

    The first block and its first point are seeded onto a flag: one flag per
    flag orbit when plane_group is given, otherwise every flag in turn. The
    DFS then checks ahead: a branch dies as soon as some unmapped point has
    no candidate left, and points with a single candidate are mapped first.
    Witnesses are verified before they are returned.
    """
    q = square_root_order(plane.order)
    params = DesignParams.unital(q)
    problem = design_violation(d, params)
    if problem:
        raise ValueError(f"not a 2-({params.v},{params.k},1) design: {problem}")
    tracker = BudgetTracker.from_budget(budget)
    if plane_group is not None:
        flags = flag_orbit_representatives(plane, plane_group)
    else:
        flags = [(li, P) for li, line in enumerate(plane.lines) for P in line]
    emb = _Embedder(d, plane, tracker)
    try:
        witness = emb.run(flags)
    except BudgetExhausted as ex:
        logging.warning("embedding into %s stopped (%s) after %d nodes", plane.name, ex.reason, tracker.nodes)
        return EmbedResult(plane.name, None, True, ex.reason, tracker.nodes)
    return EmbedResult(plane.name, witness, False, None, tracker.nodes)


def _line_images(plane: ProjectivePlane, group: PermGroup) -> List[List[int]]:
    index = {line: i for i, line in enumerate(plane.lines)}
    return [[index[tuple(sorted(g(p) for p in line))] for line in plane.lines] for g in group.generators]


def line_orbit_representatives(plane: ProjectivePlane, group: PermGroup) -> List[int]:
    """Smallest line index of each orbit of group on the lines of plane."""
    gens = [tuple(images) for images in _line_images(plane, group)]
    reps, seen = [], set()
    for li in range(len(plane.lines)):
        if li in seen:
            continue
        seen.update(orbit_of(li, gens))
        reps.append(li)
    return reps


def flag_orbit_representatives(plane: ProjectivePlane, group: PermGroup) -> List[Tuple[int, int]]:
    """Smallest (line, point) flag of each orbit of group on the flags of plane."""
    flags = [(li, P) for li, line in enumerate(plane.lines) for P in line]
    index = {f: i for i, f in enumerate(flags)}
    gens = []
    for g, images in zip(group.generators, _line_images(plane, group)):
        gens.append(tuple(index[(images[li], g(P))] for li, P in flags))
    reps, seen = [], set()
    for i, f in enumerate(flags):
        if i in seen:
            continue
        seen.update(orbit_of(i, gens))
        reps.append(f)
    return reps


def invariant_under(u: Unital, gens: Iterable[Permutation]) -> bool:
    pts: Set[int] = set(u.points)
    return all({g(p) for p in pts} == pts for g in gens)

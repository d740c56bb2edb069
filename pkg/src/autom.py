# src/autom.py
"""
Automorphisms, canonical certificates and isomorphism of incidence structures.

The structure is viewed as its bipartite point-block graph (vertices
0..v-1 are points, v..v+b-1 are blocks). A search tree in the usual
individualize-and-refine style does the work:

- refinement: 1-dimensional colour refinement to the coarsest equitable
  ordered partition; every split is logged in a trace;
- target cell: the non-singleton cell joined non-trivially to the most
  non-singleton cells, earliest on ties; children are taken in ascending
  vertex order. On projective planes this keeps individualized points in
  general position, so the first path is short;
- pruning: children in the same orbit of the automorphisms found so far
  that fix the node's individualized vertices are explored once; nodes whose
  trace differs from the first path and exceeds the best path are cut;
- leaves: an automorphism is recorded whenever a leaf relabels the graph
  exactly like the first or the best leaf. The canonical leaf minimises
  (trace sequence, relabelled blocks).

Automorphisms are reported on points only; block images follow from them.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Tuple

from .incidence import IncidenceStructure, ProjectivePlane
from .permgroup import PermGroup, Permutation, orbit_of

# 1: smallest-cell targets. 2: most non-trivial joins.
CERTIFICATE_VERSION = 2


@dataclass(frozen=True)
class Coloring:
    """Colours over points followed by blocks."""

    colors: Tuple[int, ...]
    num_points: int

    def __post_init__(self) -> None:
        pts = set(self.colors[: self.num_points])
        blks = set(self.colors[self.num_points:])
        if pts & blks:
            raise ValueError("points and blocks must not share a colour")
        used = pts | blks
        if used != set(range(len(used))):
            raise ValueError("colours must form a contiguous range starting at 0")

    @classmethod
    def uniform(cls, s: IncidenceStructure) -> "Coloring":
        return cls((0,) * s.num_points + (1,) * s.num_blocks, s.num_points)

    @classmethod
    def from_point_classes(cls, s: IncidenceStructure, classes: Sequence[Iterable[int]]) -> "Coloring":
        """
        Colour the given point classes 0, 1, ... in order; points in no class
        come next, blocks last. Empty classes are skipped.
        """
        color = [-1] * s.num_points
        k = 0
        for cls_pts in classes:
            members = list(cls_pts)
            if not members:
                continue
            for p in members:
                color[p] = k
            k += 1
        if any(c < 0 for c in color):
            color = [k if c < 0 else c for c in color]
            k += 1
        return cls(tuple(color) + (k,) * s.num_blocks, s.num_points)

    def point_cells(self) -> List[List[int]]:
        return _cells_of(self.colors[: self.num_points], 0)

    def block_cells(self) -> List[List[int]]:
        return _cells_of(self.colors[self.num_points:], 0)


def _cells_of(colors: Sequence[int], offset: int) -> List[List[int]]:
    groups: Dict[int, List[int]] = {}
    for i, c in enumerate(colors):
        groups.setdefault(c, []).append(i + offset)
    return [groups[c] for c in sorted(groups)]


@dataclass(frozen=True)
class Certificate:
    data: bytes

    @property
    def version(self) -> int:
        return self.data[0]

    def hex(self) -> str:
        return self.data.hex()

    @classmethod
    def from_hex(cls, text: str) -> "Certificate":
        return cls(bytes.fromhex(text))


# ---------------------------------
# Ordered partitions and refinement
# ---------------------------------


class _Partition:
    __slots__ = ("lab", "pos", "start", "size", "ncells")

    def __init__(self, lab: List[int], pos: List[int], start: List[int], size: List[int], ncells: int):
        self.lab = lab
        self.pos = pos
        self.start = start
        self.size = size
        self.ncells = ncells

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> "_Partition":
        n = len(colors)
        lab = sorted(range(n), key=lambda v: (colors[v], v))
        pos = [0] * n
        start = [0] * n
        size = [0] * n
        ncells = 0
        i = 0
        while i < n:
            j = i
            while j < n and colors[lab[j]] == colors[lab[i]]:
                j += 1
            size[i] = j - i
            for k in range(i, j):
                pos[lab[k]] = k
                start[lab[k]] = i
            ncells += 1
            i = j
        return cls(lab, pos, start, size, ncells)

    def copy(self) -> "_Partition":
        return _Partition(self.lab[:], self.pos[:], self.start[:], self.size[:], self.ncells)

    def cell_starts(self) -> List[int]:
        out, i, n = [], 0, len(self.lab)
        while i < n:
            out.append(i)
            i += self.size[i]
        return out

    def target_cell(self, adj: Sequence[Sequence[int]]) -> Optional[int]:
        # equitable: one representative per cell gives the cell's counts
        best, best_score = None, -1
        for s in self.cell_starts():
            if self.size[s] == 1:
                continue
            counts: Dict[int, int] = {}
            for x in adj[self.lab[s]]:
                c = self.start[x]
                counts[c] = counts.get(c, 0) + 1
            score = sum(1 for c, k in counts.items() if k < self.size[c])
            if score > best_score:
                best, best_score = s, score
        return best

    def individualize(self, v: int, trace: List[tuple]) -> int:
        x = self.start[v]
        xs = self.size[x]
        if xs == 1:
            return x
        p = self.pos[v]
        other = self.lab[x]
        self.lab[x], self.lab[p] = v, other
        self.pos[v], self.pos[other] = x, p
        self.size[x] = 1
        self.size[x + 1] = xs - 1
        for k in range(x + 1, x + xs):
            self.start[self.lab[k]] = x + 1
        self.ncells += 1
        trace.append((x,))
        return x


def _refine(part: _Partition, adj: Sequence[Sequence[int]], queue: Deque[int], trace: List[tuple]) -> None:
    in_queue = set(queue)
    lab, pos, start, size = part.lab, part.pos, part.start, part.size
    while queue:
        w = queue.popleft()
        in_queue.discard(w)
        counts: Dict[int, int] = {}
        for u in lab[w: w + size[w]]:
            for x in adj[u]:
                counts[x] = counts.get(x, 0) + 1
        for cell in sorted({start[x] for x in counts}):
            cs = size[cell]
            if cs == 1:
                continue
            members = lab[cell: cell + cs]
            keyed = sorted(members, key=lambda m: counts.get(m, 0))
            if counts.get(keyed[0], 0) == counts.get(keyed[-1], 0):
                continue
            lab[cell: cell + cs] = keyed
            pieces: List[Tuple[int, int, int]] = []
            i, end = cell, cell + cs
            while i < end:
                c = counts.get(lab[i], 0)
                j = i
                while j < end and counts.get(lab[j], 0) == c:
                    pos[lab[j]] = j
                    start[lab[j]] = i
                    j += 1
                size[i] = j - i
                pieces.append((i, j - i, c))
                i = j
            part.ncells += len(pieces) - 1
            trace.append((w, cell) + tuple(x for _, sz, c in pieces for x in (c, sz)))
            if cell in in_queue:
                for s, _, _ in pieces[1:]:
                    queue.append(s)
                    in_queue.add(s)
            else:
                largest = max(range(len(pieces)), key=lambda t: (pieces[t][1], -t))
                for t, (s, _, _) in enumerate(pieces):
                    if t != largest:
                        queue.append(s)
                        in_queue.add(s)


def _adjacency(s: IncidenceStructure) -> List[Tuple[int, ...]]:
    v = s.num_points
    adj: List[Tuple[int, ...]] = [tuple(v + b for b in s.point_blocks[p]) for p in range(v)]
    adj.extend(s.blocks)
    return adj


def _check_coloring(s: IncidenceStructure, c: Coloring) -> None:
    if c.num_points != s.num_points or len(c.colors) != s.num_points + s.num_blocks:
        raise ValueError("colouring does not match the structure")
    pmax = max(c.colors[: s.num_points], default=-1)
    bmin = min(c.colors[s.num_points:], default=pmax + 1)
    if bmin < pmax:
        raise ValueError("point colours must precede block colours")


def refine(s: IncidenceStructure, c: Coloring) -> Coloring:
    """Coarsest equitable refinement; colours are the resulting cell positions in order."""
    _check_coloring(s, c)
    part = _Partition.from_colors(c.colors)
    _refine(part, _adjacency(s), deque(part.cell_starts()), [])
    color = [0] * len(part.lab)
    for k, st in enumerate(part.cell_starts()):
        for v in part.lab[st: st + part.size[st]]:
            color[v] = k
    return Coloring(tuple(color), s.num_points)


# ---------------------------------
# Search tree
# ---------------------------------


@dataclass
class _Leaf:
    lab: List[int]
    seq: List[int]
    traces: List[tuple]
    cert: tuple


@dataclass(frozen=True)
class SearchResult:
    certificate: Certificate
    labeling: Tuple[int, ...]
    generators: Tuple[Tuple[int, ...], ...]
    leaves: int
    nodes: int


class _TreeSearch:
    def __init__(self, s: IncidenceStructure, c: Coloring):
        _check_coloring(s, c)
        self.s = s
        self.c = c
        self.v = s.num_points
        self.n = s.num_points + s.num_blocks
        self.adj = _adjacency(s)
        self.first: Optional[_Leaf] = None
        self.best: Optional[_Leaf] = None
        self.generators: List[Tuple[int, ...]] = []
        self.leaves = 0
        self.nodes = 0
        self.color_sizes = tuple(len(x) for x in _cells_of(c.colors, 0))

    def run(self) -> SearchResult:
        root = _Partition.from_colors(self.c.colors)
        trace: List[tuple] = []
        _refine(root, self.adj, deque(root.cell_starts()), trace)
        self._search(root, [], [tuple(trace)])
        best = self.best
        labeling = [0] * self.n
        for i, vtx in enumerate(best.lab):
            labeling[vtx] = i
        logging.debug(
            "search on %d+%d vertices: %d nodes, %d leaves, %d generators",
            self.v, self.n - self.v, self.nodes, self.leaves, len(self.generators),
        )
        return SearchResult(
            certificate=self._serialize(best.cert),
            labeling=tuple(labeling),
            generators=tuple(self.generators),
            leaves=self.leaves,
            nodes=self.nodes,
        )

    def _relabelled(self, lab: List[int]) -> tuple:
        label = [0] * self.n
        for i, vtx in enumerate(lab):
            label[vtx] = i
        return tuple(sorted(tuple(sorted(label[p] for p in blk)) for blk in self.s.blocks))

    def _serialize(self, cert: tuple) -> Certificate:
        out = bytearray([CERTIFICATE_VERSION])
        out += self.v.to_bytes(4, "big") + (self.n - self.v).to_bytes(4, "big")
        out += len(self.color_sizes).to_bytes(2, "big")
        for sz in self.color_sizes:
            out += sz.to_bytes(4, "big")
        for blk in cert:
            out += len(blk).to_bytes(2, "big")
            for p in blk:
                out += p.to_bytes(2, "big")
        return Certificate(bytes(out))

    def _pruned_by_orbit(self, seq: List[int], v: int, members: List[int]) -> bool:
        gens = [g for g in self.generators if all(g[x] == x for x in seq)]
        if not gens:
            return False
        cell = set(members)
        return any(u < v for u in orbit_of(v, gens) if u in cell)

    def _search(self, part: _Partition, seq: List[int], traces: List[tuple]) -> Optional[int]:
        self.nodes += 1
        if part.ncells == self.n:
            return self._leaf(part, seq, traces)
        cell = part.target_cell(self.adj)
        members = sorted(part.lab[cell: cell + part.size[cell]])
        depth = len(seq)
        for v in members:
            if self._pruned_by_orbit(seq, v, members):
                continue
            child = part.copy()
            tr: List[tuple] = []
            x = child.individualize(v, tr)
            _refine(child, self.adj, deque([x]), tr)
            child_traces = traces + [tuple(tr)]
            if self.first is not None:
                k = len(child_traces)
                same_as_first = child_traces == self.first.traces[:k]
                if not same_as_first and child_traces > self.best.traces[:k]:
                    continue
            jump = self._search(child, seq + [v], child_traces)
            if jump is not None and jump < depth:
                return jump
        return None

    def _leaf(self, part: _Partition, seq: List[int], traces: List[tuple]) -> Optional[int]:
        self.leaves += 1
        cert = self._relabelled(part.lab)
        leaf = _Leaf(part.lab[:], list(seq), traces, cert)
        if self.first is None:
            self.first = self.best = leaf
            return None
        if traces == self.first.traces and cert == self.first.cert:
            self._record(self.first, leaf)
            common = 0
            while common < min(len(seq), len(self.first.seq)) and seq[common] == self.first.seq[common]:
                common += 1
            return common
        if traces == self.best.traces and cert == self.best.cert:
            self._record(self.best, leaf)
            return None
        if (traces, cert) < (self.best.traces, self.best.cert):
            self.best = leaf
        return None

    def _record(self, ref: _Leaf, leaf: _Leaf) -> None:
        gamma = [0] * self.n
        for a, b in zip(ref.lab, leaf.lab):
            gamma[a] = b
        g = tuple(gamma)
        if all(i == j for i, j in enumerate(g)) or g in self.generators:
            return
        self.generators.append(g)


@lru_cache(maxsize=512)
def _search(s: IncidenceStructure, c: Coloring) -> SearchResult:
    return _TreeSearch(s, c).run()


def maps_blocks_to_blocks(s: IncidenceStructure, images: Sequence[int]) -> bool:
    block_set = set(s.blocks)
    return all(tuple(sorted(images[p] for p in blk)) in block_set for blk in s.blocks)


def _point_generators(s: IncidenceStructure, c: Coloring, result: SearchResult) -> List[Permutation]:
    v = s.num_points
    out = []
    for g in result.generators:
        images = g[:v]
        if not maps_blocks_to_blocks(s, images):
            raise RuntimeError("search produced a map that does not preserve blocks")
        if any(c.colors[p] != c.colors[images[p]] for p in range(v)):
            raise RuntimeError("search produced a map that does not preserve point colours")
        out.append(Permutation(tuple(images)))
    return out


def automorphism_group(s: IncidenceStructure, c: Optional[Coloring] = None) -> PermGroup:
    c = c or Coloring.uniform(s)
    result = _search(s, c)
    return PermGroup(s.num_points, _point_generators(s, c, result))


def canonical_certificate(s: IncidenceStructure, c: Optional[Coloring] = None) -> Certificate:
    c = c or Coloring.uniform(s)
    return _search(s, c).certificate


def canonical_labeling(s: IncidenceStructure, c: Optional[Coloring] = None) -> Tuple[int, ...]:
    """Canonical label (0..v-1) of every point."""
    c = c or Coloring.uniform(s)
    return _search(s, c).labeling[: s.num_points]


def is_isomorphic(a: IncidenceStructure, b: IncidenceStructure) -> Optional[Permutation]:
    """A verified point bijection mapping the blocks of a onto the blocks of b, or None."""
    if a.num_points != b.num_points or a.num_blocks != b.num_blocks:
        return None
    if sorted(a.block_sizes()) != sorted(b.block_sizes()):
        return None
    ca, cb = Coloring.uniform(a), Coloring.uniform(b)
    ra, rb = _search(a, ca), _search(b, cb)
    if ra.certificate != rb.certificate:
        return None
    v = a.num_points
    by_label = [0] * v
    for y in range(v):
        by_label[rb.labeling[y]] = y
    images = tuple(by_label[ra.labeling[x]] for x in range(v))
    target = set(b.blocks)
    if not all(tuple(sorted(images[p] for p in blk)) in target for blk in a.blocks):
        raise RuntimeError("equal certificates but the induced map is not an isomorphism")
    return Permutation(images)


def setwise_stabilizer(plane: ProjectivePlane, pts: Iterable[int]) -> PermGroup:
    chosen = sorted(set(pts))
    s = plane.structure
    c = Coloring.from_point_classes(s, [chosen])
    group = automorphism_group(s, c)
    members = set(chosen)
    for g in group.generators:
        if {g(p) for p in members} != members:
            raise RuntimeError("stabilizer generator moves the point set")
    return group


def is_self_dual(plane: ProjectivePlane) -> bool:
    return is_isomorphic(plane.structure, plane.dual().structure) is not None

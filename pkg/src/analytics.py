# src/analytics.py
"""
Numeric invariants of unital designs: p-rank of the incidence matrix,
parallel classes, automorphism group orders, and the per-unital report
that puts them together.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Mapping, Optional

import numpy as np

from .autom import automorphism_group, canonical_certificate, setwise_stabilizer
from .errors import NonUniformBlocks, NotDivisible, NotPrime
from .exact_cover import count_exact_covers
from .geometry import is_prime
from .incidence import IncidenceStructure, ProjectivePlane, incidence_matrix
from .models import DesignReport
from .unitals import Unital, design_from_unital, dual_unital


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


def p_rank(m, p: int) -> int:
    """Rank over GF(p) by row reduction on an int64 copy, reduced mod p after every step."""
    _check_prime(p)
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("p_rank expects a 2-dimensional matrix")
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1:, c].copy()
        hit = np.nonzero(below)[0]
        if hit.size:
            a[r + 1 + hit] = (a[r + 1 + hit] - np.outer(below[hit], a[r])) % p
        r += 1
    return r


def p_rank_fraction_free(m, p: int) -> int:
    """Division-free elimination on Python ints: row_i <- piv*row_i - a_ic*row_r (mod p)."""
    _check_prime(p)
    rows = [[int(x) % p for x in row] for row in np.asarray(m).tolist()]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        top = rows[rank]
        pv = top[c]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(pv * x - f * y) % p for x, y in zip(rows[i], top)]
        rank += 1
    return rank


def _check_uniform(d: IncidenceStructure) -> int:
    sizes = set(d.block_sizes())
    if len(sizes) > 1:
        raise NonUniformBlocks(f"block sizes differ: {sorted(sizes)}")
    k = sizes.pop() if sizes else 0
    if k == 0 or d.num_points % k:
        raise NotDivisible(f"block size {k} does not divide {d.num_points}")
    return k


def parallel_classes(d: IncidenceStructure) -> int:
    """Number of sets of pairwise disjoint blocks covering every point exactly once."""
    _check_uniform(d)
    n, _ = count_exact_covers(d.num_points, d.blocks)
    return n


def parallel_class_list(d: IncidenceStructure) -> List[List[int]]:
    """The parallel classes as sorted lists of block indices, in sorted order."""
    _check_uniform(d)
    _, covers = count_exact_covers(d.num_points, d.blocks, collect=True)
    return covers


def analyze(
    plane: ProjectivePlane,
    u: Unital,
    *,
    unital_id: str = "",
    prime: int = 5,
    partners: Optional[Mapping[str, str]] = None,
) -> DesignReport:
    """
    Report for one unital. partners maps dual-design certificates to names
    like "HALL^T.6"; a design whose certificate is found there gets that
    name as its isomorphic partner.
    """
    design = design_from_unital(u)
    du = dual_unital(u)
    dual_design = design_from_unital(du)

    stab = setwise_stabilizer(plane, u.points).order
    design_aut = automorphism_group(design).order
    cert = canonical_certificate(design).hex()
    dual_cert = canonical_certificate(dual_design).hex()
    report = DesignReport(
        plane=plane.name,
        unital_id=unital_id,
        stabilizer_order=stab,
        design_aut_order=design_aut,
        p_rank_5=p_rank(incidence_matrix(design), prime),
        parallel_classes=parallel_classes(design),
        dual_parallel_classes=parallel_classes(dual_design),
        certificate=cert,
        dual_certificate=dual_cert,
        dual_self_isomorphic=cert == dual_cert,
    )
    if partners and cert in partners:
        report.isomorphic_partner = partners[cert]
    elif report.dual_self_isomorphic and unital_id:
        report.isomorphic_partner = f"{plane.name}^T.{unital_id}"
    if stab != design_aut:
        report.flags.append("stabilizer_differs")
        logging.info(
            "%s #%s: plane stabilizer %d, design group %d", plane.name, unital_id, stab, design_aut
        )
    logging.debug(
        "%s #%s: |Aut|=%d rank=%d classes=%s", plane.name, unital_id, report.aut_order,
        report.p_rank_5, report.classes_pair(),
    )
    return report


def count_distinct_designs(reports: Iterable[DesignReport]) -> int:
    certs = set()
    for r in reports:
        certs.update(c for c in (r.certificate, r.dual_certificate) if c)
    return len(certs)


def census(reports: Iterable[DesignReport]) -> Dict[str, Dict[int, int]]:
    """Per plane, how many unitals there are with each automorphism group order."""
    out: Dict[str, Dict[int, int]] = {}
    for r in reports:
        row = out.setdefault(r.plane, {})
        row[r.aut_order] = row.get(r.aut_order, 0) + 1
    return {plane: dict(sorted(row.items())) for plane, row in sorted(out.items())}

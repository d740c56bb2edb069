# src/render.py
"""
Text renderings of reports: Table-shaped TSV rows, per-cell diffs, the
census table, and the JSON form of a table run.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from .models import DesignReport

TSV_HEADER = ("Plane", "Unital#", "|Aut|", "5-rank", "par.classes", "Isomorphic-to")


def tsv_row(report: DesignReport, index: Optional[str] = None) -> str:
    cells = [
        report.plane,
        index if index is not None else report.unital_id,
        str(report.aut_order),
        str(report.p_rank_5),
        report.classes_pair(),
        report.isomorphic_partner or "",
    ]
    return "\t".join(cells)


def tsv_table(rows) -> str:
    lines = ["\t".join(TSV_HEADER)]
    for r in rows:
        if r.report is None:
            exp = r.expected
            lines.append("\t".join([
                r.plane, str(r.index), str(exp.aut_order) if exp else "",
                str(exp.p_rank) if exp else "", f"{exp.classes[0]}/{exp.classes[1]}" if exp else "",
                f"({r.status})",
            ]))
        else:
            lines.append(tsv_row(r.report, str(r.index)))
    return "\n".join(lines) + "\n"


def diff_lines(rows) -> List[str]:
    out = []
    for r in rows:
        for d in r.diffs:
            out.append(f"{r.plane} #{r.index} {d.column}: expected {d.expected or '-'}, got {d.actual or '-'}")
    return out


def run_to_dict(run) -> Dict[str, Any]:
    return {
        "rows": [
            {
                "plane": r.plane,
                "index": r.index,
                "status": r.status,
                "report": r.report.to_dict() if r.report else None,
                "diffs": [vars(d) for d in r.diffs],
            }
            for r in run.rows
        ],
        "missing_planes": run.missing_planes,
        "listing_moves": [f"{p}#{i}->{j}" for (p, i), j in sorted(run.moves.items())],
        "mismatching_cells": run.mismatches,
    }


def census_table(census: Dict[str, Dict[int, int]]) -> str:
    orders = sorted({o for row in census.values() for o in row})
    lines = ["\t".join(["Plane"] + [str(o) for o in orders] + ["Total"])]
    for plane, row in census.items():
        cells = [str(row.get(o, 0)) if row.get(o) else "" for o in orders]
        lines.append("\t".join([plane] + cells + [str(sum(row.values()))]))
    return "\n".join(lines) + "\n"


def report_text(report: DesignReport) -> str:
    lines = [
        f"plane: {report.plane}",
        f"unital: {report.unital_id}",
        f"stabilizer order: {report.stabilizer_order}",
        f"design automorphism group order: {report.design_aut_order}",
        f"5-rank: {report.p_rank_5}",
        f"parallel classes: {report.classes_pair()}",
        f"isomorphic to: {report.isomorphic_partner or '-'}",
    ]
    if report.flags:
        lines.append(f"flags: {', '.join(report.flags)}")
    return "\n".join(lines)

# src/parse_planes.py
"""
Readers and writers for plane line sets.

Two layouts are understood:

- the collected-planes text file: a name line per plane, followed by its
  lines, one per row, as whitespace-separated integers. Labels may start at 0
  or at 1; a section containing a 0 is taken as 0-based.
- the repository's own format, written by write_plane_text:

      name: HALL
      order: 16
      points: 273
      1 2 3 ... (one row per line, 1-based, ascending)

  read_plane_text(write_plane_text(p)) reproduces p exactly, and
  write_plane_text(read_plane_text(t)) == t for any t this module wrote.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple

from .errors import PlaneFormatError
from .incidence import IncidenceStructure, ProjectivePlane, verify_plane

_INT_ROW = re.compile(r"^\s*\d+(?:[\s,]+\d+)*\s*$")
_HEADER = re.compile(r"^\s*(name|order|points)\s*:\s*(.*?)\s*$", re.I)


def _order_for_lines(count: int) -> Optional[int]:
    n = 1
    while n * n + n + 1 < count:
        n += 1
    return n if n * n + n + 1 == count else None


def _clean_name(raw: str) -> str:
    name = raw.strip().strip(":#").strip()
    return re.sub(r"\s+", " ", name)


def read_collected_planes(text: str, *, verify: bool = True) -> List[ProjectivePlane]:
    """
    Parse every named section of a collected-planes file. A section ends at
    the next non-numeric line. Sections whose row count is not n^2+n+1 for
    rows of n+1 integers are rejected.
    """
    sections: List[Tuple[str, List[List[int]]]] = []
    name: Optional[str] = None
    rows: List[List[int]] = []

    def flush() -> None:
        if name is not None and rows:
            sections.append((name, rows))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if _INT_ROW.match(raw):
            if name is None:
                name = f"plane{len(sections) + 1}"
            rows.append([int(t) for t in re.split(r"[\s,]+", raw.strip())])
        else:
            flush()
            name, rows = _clean_name(raw), []
    flush()

    planes: List[ProjectivePlane] = []
    for sec_name, sec_rows in sections:
        n = _order_for_lines(len(sec_rows))
        if n is None or any(len(r) != n + 1 for r in sec_rows):
            raise PlaneFormatError(
                f"section {sec_name!r}: {len(sec_rows)} rows do not form a projective plane"
            )
        zero_based = any(0 in r for r in sec_rows)
        shift = 0 if zero_based else 1
        s = IncidenceStructure.from_blocks(
            n * n + n + 1, ([x - shift for x in r] for r in sec_rows)
        )
        logging.info("read plane %s (order %d, %s-based)", sec_name, n, "0" if zero_based else "1")
        planes.append(verify_plane(s, n, name=sec_name) if verify else ProjectivePlane(sec_name, n, s))
    return planes


def write_plane_text(plane: ProjectivePlane) -> str:
    out = [
        f"name: {plane.name}",
        f"order: {plane.order}",
        f"points: {plane.num_points}",
    ]
    for line in plane.lines:
        out.append(" ".join(str(p + 1) for p in line))
    return "\n".join(out) + "\n"


def read_plane_text(text: str, *, verify: bool = True) -> ProjectivePlane:
    header = {}
    rows: List[List[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        m = _HEADER.match(raw)
        if m and not rows:
            header[m.group(1).lower()] = m.group(2)
            continue
        if not _INT_ROW.match(raw):
            raise PlaneFormatError(f"line {lineno}: expected 1-based point labels, got {raw!r}")
        rows.append([int(t) for t in raw.split()])
    missing = {"name", "order", "points"} - set(header)
    if missing:
        raise PlaneFormatError(f"missing header fields: {', '.join(sorted(missing))}")
    order, points = int(header["order"]), int(header["points"])
    if any(0 in r for r in rows):
        raise PlaneFormatError("plane files store 1-based labels; found a 0")
    s = IncidenceStructure.from_one_based(points, rows)
    if verify:
        return verify_plane(s, order, name=header["name"])
    return ProjectivePlane(header["name"], order, s)


def load_plane_file(path: Path, *, verify: bool = True) -> ProjectivePlane:
    return read_plane_text(Path(path).read_text(encoding="utf-8"), verify=verify)


def save_plane_file(plane: ProjectivePlane, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_plane_text(plane), encoding="utf-8")
    return path


def plane_file_name(name: str) -> str:
    """File-system safe name: PG(2,16) -> PG_2_16.txt"""
    safe = re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_")
    return f"{safe}.txt"

# src/catalog.py
"""
Fixture catalog and plane library.

- fixtures: the transcribed unital point sets in src/data/unitals.yml, with
  per-set checksums and the expected report row of each;
- external rows: expected rows of unitals whose point sets are not listed
  (load_fixture refuses them);
- PlaneLibrary: imported plane files under the plane directory, plus
  PG(2,16) built from GF(16) when no file was imported;
- table runs: recompute every available row and diff it cell by cell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import yaml

from .analytics import analyze
from .autom import is_isomorphic, is_self_dual
from .dedupe import count_classes, points_digest
from .errors import MissingPlaneData, UnknownFixture
from .geometry import hermitian_points, pg2
from .incidence import ProjectivePlane
from .models import DesignReport, ExpectedRow, FixtureUnital
from .parse_planes import load_plane_file, plane_file_name, read_collected_planes, read_plane_text, save_plane_file
from .unitals import Unital

DATA_FILE = Path(__file__).parent / "data" / "unitals.yml"

PLANE_NAMES = (
    "BBH1", "BBH2", "BBS4", "DEMP", "DSFP", "HALL", "JOHN",
    "JOWK", "LMRH", "MATH", "PG(2,16)", "SEMI2", "SEMI4",
)
DESARGUESIAN = "PG(2,16)"
HERMITIAN_INDEX = 2


# ---------------------------------
# Fixture data
# ---------------------------------


def _expected(d: dict) -> ExpectedRow:
    a, b = d["classes"]
    return ExpectedRow(int(d["aut"]), int(d["rank"]), (int(a), int(b)), d.get("partner"))


@lru_cache(maxsize=4)
def _load_data(path: Path = DATA_FILE) -> dict:
    with Path(path).open("r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


@lru_cache(maxsize=4)
def _fixtures(path: Path = DATA_FILE) -> Tuple[FixtureUnital, ...]:
    out = []
    for rec in _load_data(path).get("fixtures") or []:
        out.append(FixtureUnital(
            plane_name=str(rec["plane"]),
            index=int(rec["index"]),
            points_as_printed=tuple(int(x) for x in rec["points"]),
            digest=str(rec["digest"]),
            expected=_expected(rec["expected"]) if rec.get("expected") else None,
            known=bool(rec.get("known", False)),
        ))
    return tuple(out)


def fixtures(plane_name: Optional[str] = None) -> List[FixtureUnital]:
    return [f for f in _fixtures() if plane_name is None or f.plane_name == plane_name]


def external_rows(plane_name: Optional[str] = None) -> List[Tuple[str, int, ExpectedRow]]:
    out = []
    for rec in _load_data().get("external") or []:
        if plane_name is None or rec["plane"] == plane_name:
            out.append((str(rec["plane"]), int(rec["index"]), _expected(rec["expected"])))
    return out


def load_fixture(plane_name: str, index: int) -> FixtureUnital:
    for f in _fixtures():
        if f.plane_name == plane_name and f.index == index:
            return f
    if any(p == plane_name and i == index for p, i, _ in external_rows()):
        raise UnknownFixture(f"{plane_name} #{index}: the point set is not part of the catalog")
    raise UnknownFixture(f"{plane_name} #{index}: no such unital")


def expected_row(plane_name: str, index: int) -> Optional[ExpectedRow]:
    for f in _fixtures():
        if f.plane_name == plane_name and f.index == index:
            return f.expected
    for p, i, row in external_rows(plane_name):
        if i == index:
            return row
    return None


def fixture_problems(f: FixtureUnital, num_points: int = 273) -> List[str]:
    """Transcription checks: 65 distinct labels in range and a matching checksum."""
    problems = []
    pts = f.points_as_printed
    if len(pts) != 65 or len(set(pts)) != 65:
        problems.append(f"{f.fixture_id}: {len(set(pts))} distinct labels out of {len(pts)}")
    if any(p < 1 or p > num_points for p in pts):
        problems.append(f"{f.fixture_id}: label outside 1..{num_points}")
    if points_digest(pts) != f.digest:
        problems.append(f"{f.fixture_id}: checksum mismatch")
    return problems


def table_rows(scope: Optional[Iterable[str]] = None) -> List[Tuple[str, int, ExpectedRow]]:
    """Every expected row, fixtures and external rows alike, plane by plane."""
    scope = list(scope) if scope is not None else None
    out: List[Tuple[str, int, ExpectedRow]] = []
    for plane_name in PLANE_NAMES:
        if not _in_scope(plane_name, scope):
            continue
        out.extend((f.plane_name, f.index, f.expected) for f in fixtures(plane_name) if f.expected is not None)
        out.extend(external_rows(plane_name))
    return out


def expected_distinct_designs(rows: Iterable[Tuple[str, int, ExpectedRow]]) -> int:
    """
    Distinct designs implied by the partner column. Each row stands for two
    designs, the unital design and the dual-unital design; a partner
    "P^T.j" identifies the first with the dual-unital design of row j of
    plane P. Partners pointing outside rows are ignored.
    """
    rows = list(rows)
    present = {(plane, index) for plane, index, _ in rows}
    nodes = [(kind, plane, index) for plane, index, _ in rows for kind in ("unital", "dual")]
    links = []
    for plane, index, exp in rows:
        if not exp.partner:
            continue
        other, _, j = exp.partner.rpartition("^T.")
        if (other, int(j)) in present:
            links.append((("unital", plane, index), ("dual", other, int(j))))
    return count_classes(nodes, links)


# ---------------------------------
# Planes
# ---------------------------------


class PlaneLibrary:
    def __init__(self, plane_dir: Path):
        self.plane_dir = Path(plane_dir)
        self._cache: Dict[str, ProjectivePlane] = {}

    def path_for(self, name: str) -> Path:
        return self.plane_dir / plane_file_name(name)

    def available(self) -> List[str]:
        names = [n for n in PLANE_NAMES if self.path_for(n).exists()]
        if DESARGUESIAN not in names:
            names.append(DESARGUESIAN)
        return sorted(names)

    def has(self, name: str) -> bool:
        base = name[:-2] if name.endswith("^T") else name
        return base == DESARGUESIAN or self.path_for(base).exists()

    def get(self, name: str) -> ProjectivePlane:
        if name in self._cache:
            return self._cache[name]
        if name.endswith("^T"):
            plane = self.get(name[:-2]).dual()
        elif self.path_for(name).exists():
            plane = load_plane_file(self.path_for(name))
        elif name == DESARGUESIAN:
            plane = pg2(16)
        else:
            raise MissingPlaneData(
                f"plane {name} is not in {self.plane_dir}; run `planes import <file>` first"
            )
        self._cache[name] = plane
        return plane

    def import_file(self, path: Path) -> List[ProjectivePlane]:
        text = Path(path).read_text(encoding="utf-8")
        if text.lstrip().lower().startswith("name:"):
            planes = [read_plane_text(text)]
        else:
            planes = read_collected_planes(text)
        for plane in planes:
            if plane.name == DESARGUESIAN and is_isomorphic(plane.structure, pg2(16).structure) is None:
                logging.warning("imported %s is not isomorphic to the GF(16) model", plane.name)
            save_plane_file(plane, self.path_for(plane.name))
            self._cache.pop(plane.name, None)
            print(f"Imported {plane.name} -> {self.path_for(plane.name)}")
        return planes

    def export(self, name: str, dest: Path) -> Path:
        return save_plane_file(self.get(name), dest)


@dataclass
class PlaneCheck:
    name: str
    order: int
    self_dual: bool


def verify_plane_entry(lib: PlaneLibrary, name: str) -> PlaneCheck:
    plane = lib.get(name)
    return PlaneCheck(plane.name, plane.order, is_self_dual(plane))


def fixture_unital(lib: PlaneLibrary, f: FixtureUnital) -> Unital:
    return Unital.of(lib.get(f.plane_name), f.points)


def hermitian_unital(plane: Optional[ProjectivePlane] = None) -> Unital:
    """
    Absolute points of the Hermitian polarity of PG(2,16). When plane is an
    imported copy of PG(2,16), the set is carried over along an isomorphism.
    """
    model = pg2(16)
    pts = hermitian_points(16)
    if plane is None or plane.structure == model.structure:
        return Unital.of(model, pts)
    iso = is_isomorphic(model.structure, plane.structure)
    if iso is None:
        raise ValueError(f"{plane.name} is not isomorphic to PG(2,16)")
    return Unital.of(plane, [iso(p) for p in pts])


# ---------------------------------
# Table runs
# ---------------------------------


@dataclass
class CellDiff:
    column: str
    expected: str
    actual: str


@dataclass
class RowResult:
    plane: str
    index: int
    expected: Optional[ExpectedRow]
    report: Optional[DesignReport] = None
    diffs: List[CellDiff] = field(default_factory=list)
    status: str = "ok"


def compare_row(report: DesignReport, exp: ExpectedRow) -> List[CellDiff]:
    """
    Cell diffs against an expected row. |Aut| is matched on the design group
    first and on the plane stabilizer second; a match on the stabilizer only
    is flagged on the report.
    """
    diffs = []
    if report.design_aut_order != exp.aut_order:
        if report.stabilizer_order == exp.aut_order:
            if "aut_matched_on_stabilizer" not in report.flags:
                report.flags.append("aut_matched_on_stabilizer")
        else:
            diffs.append(CellDiff("aut", str(exp.aut_order), str(report.design_aut_order)))
    if report.p_rank_5 != exp.p_rank:
        diffs.append(CellDiff("rank", str(exp.p_rank), str(report.p_rank_5)))
    want = f"{exp.classes[0]}/{exp.classes[1]}"
    if report.classes_pair() != want:
        diffs.append(CellDiff("classes", want, report.classes_pair()))
    if (report.isomorphic_partner or None) != (exp.partner or None):
        diffs.append(CellDiff("partner", exp.partner or "", report.isomorphic_partner or ""))
    return diffs


def assign_partners(reports: List[DesignReport]) -> None:
    """
    Fill isomorphic_partner from certificates: a design isomorphic to the
    dual-unital design of unital j of the same plane gets "<plane>^T.<j>".
    """
    by_plane: Dict[str, Dict[str, List[str]]] = {}
    for r in reports:
        names = by_plane.setdefault(r.plane, {}).setdefault(r.dual_certificate, [])
        names.append(r.unital_id)
    for r in reports:
        matches = by_plane[r.plane].get(r.certificate, [])
        if matches:
            j = sorted(matches, key=lambda s: (len(s), s))[0]
            r.isomorphic_partner = f"{r.plane}^T.{j}"
        else:
            r.isomorphic_partner = None
    seen: Dict[str, DesignReport] = {}
    for r in reports:
        other = seen.get(r.certificate)
        if other is not None:
            r.flags.append(f"same_design_as:{other.plane}.{other.unital_id}")
        else:
            seen[r.certificate] = r


def resolve_listing_order(rows: List[RowResult]) -> Dict[Tuple[str, int], int]:
    """
    Rows whose report mismatches their own expected row but fits an
    unclaimed expected row of the same plane exactly are moved there.
    Returns the moves as (plane, listed index) -> table index.
    """
    moves: Dict[Tuple[str, int], int] = {}
    by_plane: Dict[str, List[RowResult]] = {}
    for r in rows:
        by_plane.setdefault(r.plane, []).append(r)
    for plane, group in by_plane.items():
        claimed = {r.index for r in group if r.report is not None and not r.diffs}
        for r in group:
            if r.report is None or not r.diffs:
                continue
            for other in group:
                if other.index in claimed or other.expected is None or other is r:
                    continue
                if not compare_row(r.report, other.expected):
                    moves[(plane, r.index)] = other.index
                    claimed.add(other.index)
                    logging.warning("%s: listing #%d matches table row #%d", plane, r.index, other.index)
                    r.expected, r.diffs = other.expected, []
                    r.status = f"ok (table row {other.index})"
                    break
    return moves


@dataclass
class TableRun:
    rows: List[RowResult]
    missing_planes: List[str]
    moves: Dict[Tuple[str, int], int]

    @property
    def mismatches(self) -> int:
        return sum(len(r.diffs) for r in self.rows)

    def reports(self) -> List[DesignReport]:
        return [r.report for r in self.rows if r.report is not None]


def _in_scope(plane: str, scope: Optional[Iterable[str]]) -> bool:
    return scope is None or plane in set(scope)


def report_tables(lib: PlaneLibrary, scope: Optional[Iterable[str]] = None, *, prime: int = 5) -> TableRun:
    scope = list(scope) if scope is not None else None
    rows: List[RowResult] = []
    missing: List[str] = []
    for plane_name in PLANE_NAMES:
        if not _in_scope(plane_name, scope):
            continue
        if not lib.has(plane_name):
            missing.append(plane_name)
            continue
        plane = lib.get(plane_name)
        for f in fixtures(plane_name):
            u = fixture_unital(lib, f)
            rep = analyze(plane, u, unital_id=str(f.index), prime=prime)
            rows.append(RowResult(plane_name, f.index, f.expected, rep))
        for _, index, exp in external_rows(plane_name):
            if plane_name == DESARGUESIAN and index == HERMITIAN_INDEX:
                u = hermitian_unital(plane)
                rep = analyze(plane, u, unital_id=str(index), prime=prime)
                rows.append(RowResult(plane_name, index, exp, rep))
            else:
                rows.append(RowResult(plane_name, index, exp, None, status="no point set"))
    reports = [r.report for r in rows if r.report is not None]
    assign_partners(reports)
    for r in rows:
        if r.report is not None and r.expected is not None:
            r.diffs = compare_row(r.report, r.expected)
            r.status = "ok" if not r.diffs else "mismatch"
    moves = resolve_listing_order(rows)
    if missing:
        logging.warning("planes without data: %s", ", ".join(missing))
    return TableRun(rows, missing, moves)

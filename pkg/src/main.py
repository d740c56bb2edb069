# src/main.py
"""
Command-line entry point: `python -m src.main <group> <command> ...`
(or `python main.py ...` from the repository root).

    planes import <file> | verify <name> | export <name> <file>
    unital check | analyze | search
    design iso <a> <b> | embed --design D --plane P
    group order | subgroups
    report tables | census
    manifest replay <file>

Exit codes: 0 success, 1 verification failure or "not found", 2 usage
error or missing data.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .analytics import analyze, census, count_distinct_designs
from .autom import CERTIFICATE_VERSION, automorphism_group, canonical_certificate, is_isomorphic
from .catalog import (
    DESARGUESIAN,
    HERMITIAN_INDEX,
    PlaneLibrary,
    fixture_problems,
    fixture_unital,
    fixtures,
    hermitian_unital,
    load_fixture,
    report_tables,
    verify_plane_entry,
)
from .config import budget_from, load_config
from .errors import MissingPlaneData, NotAUnital, UnitalError, UnknownFixture
from .models import RunManifest
from .parse_planes import plane_file_name
from .permgroup import enumerate_small_subgroups
from .render import census_table, diff_lines, report_text, run_to_dict, tsv_row, tsv_table
from .state_store import file_digest, load_manifest, now_iso, save_artifact
from .unitals import (
    Unital,
    design_from_unital,
    dual_unital,
    embed_design_in_plane,
    search_plane,
    unital_violation,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# ---------------------------------
# Helpers
# ---------------------------------


def _parse_ints(text: str) -> List[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _manifest(args: argparse.Namespace, cfg: Dict[str, Any], seed: Optional[int], budgets: Dict[str, Any]) -> RunManifest:
    inputs = {}
    if args.config and Path(args.config).exists():
        inputs[str(args.config)] = file_digest(Path(args.config))
    return RunManifest(
        command=list(args.argv),
        config=cfg,
        seed=seed,
        budgets=budgets,
        tool_version=__version__,
        started=now_iso(),
        input_digests=inputs,
    )


def _chosen_unital(args: argparse.Namespace, lib: PlaneLibrary) -> Unital:
    plane = lib.get(args.plane)
    if args.hermitian:
        return hermitian_unital(plane)
    if args.fixture is not None:
        return fixture_unital(lib, load_fixture(args.plane, args.fixture))
    return Unital.of(plane, [p - 1 for p in args.points])


def _unital_id(args: argparse.Namespace) -> str:
    if args.hermitian:
        return str(HERMITIAN_INDEX)
    return str(args.fixture) if args.fixture is not None else "points"


def _partners(lib: PlaneLibrary, plane_name: str) -> Dict[str, str]:
    """Dual-unital design certificates of the catalogued unitals of a plane."""
    out: Dict[str, str] = {}
    for f in fixtures(plane_name):
        du = dual_unital(fixture_unital(lib, f))
        out.setdefault(canonical_certificate(design_from_unital(du)).hex(), f"{plane_name}^T.{f.index}")
    if plane_name == DESARGUESIAN:
        du = dual_unital(hermitian_unital(lib.get(plane_name)))
        out.setdefault(canonical_certificate(design_from_unital(du)).hex(), f"{plane_name}^T.{HERMITIAN_INDEX}")
    return out


def _design_ref(ref: str, lib: PlaneLibrary):
    """PLANE.INDEX for a catalogued unital's design, with a ^T suffix for its dual unital."""
    dual = ref.endswith("^T")
    body = ref[:-2] if dual else ref
    plane_name, _, index = body.rpartition(".")
    if not plane_name or not index.isdigit():
        raise UnknownFixture(f"design reference {ref!r} is not PLANE.INDEX[^T]")
    if plane_name == DESARGUESIAN and int(index) == HERMITIAN_INDEX:
        u = hermitian_unital(lib.get(plane_name))
    else:
        u = fixture_unital(lib, load_fixture(plane_name, int(index)))
    return design_from_unital(dual_unital(u) if dual else u)


# ---------------------------------
# Commands
# ---------------------------------


def cmd_planes(args, cfg, lib) -> int:
    if args.command == "import":
        planes = lib.import_file(Path(args.file))
        print(f"Imported {len(planes)} planes into {lib.plane_dir}")
        return EXIT_OK
    if args.command == "verify":
        check = verify_plane_entry(lib, args.name)
        print(f"{check.name}: projective plane of order {check.order}, "
              f"{'self-dual' if check.self_dual else 'not self-dual'}")
        return EXIT_OK
    out = lib.export(args.name, Path(args.file))
    print(f"Exported {args.name} -> {out}")
    return EXIT_OK


def cmd_unital(args, cfg, lib) -> int:
    if args.command == "check":
        plane = lib.get(args.plane)
        if args.hermitian:
            pts = list(hermitian_unital(plane).points)
        elif args.fixture is not None:
            f = load_fixture(args.plane, args.fixture)
            for problem in fixture_problems(f, plane.num_points):
                logging.warning(problem)
            pts = f.points
        else:
            pts = [p - 1 for p in args.points]
        problem = unital_violation(plane, pts)
        if problem:
            print(f"unital: no ({problem})")
            return EXIT_FAIL
        print("unital: yes")
        return EXIT_OK

    if args.command == "analyze":
        u = _chosen_unital(args, lib)
        rep = analyze(
            u.plane, u, unital_id=_unital_id(args),
            prime=int(cfg["analytics"]["prime"]), partners=_partners(lib, args.plane),
        )
        if args.format == "tsv":
            print(tsv_row(rep))
        elif args.format == "json":
            print(json.dumps(rep.to_dict(), indent=2, ensure_ascii=False))
        else:
            print(report_text(rep))
        return EXIT_OK

    # search
    plane = lib.get(args.plane)
    orders = args.orders if args.orders is not None else list(cfg["search"]["orders"])
    budget = budget_from(
        cfg["search"], seed=args.seed, max_subgroups=args.max_subgroups,
        max_nodes=args.max_nodes, wall_clock_ms=args.wall_clock_ms,
    )
    print(f"Searching {plane.name} with subgroup orders {orders} (seed {args.seed})")
    result = search_plane(plane, orders, budget)
    for hit in result.hits:
        print(tsv_row(hit.report))
    out = Path(args.out) if args.out else (
        Path(cfg["state_dir"]) / "search" / f"{Path(plane_file_name(plane.name)).stem}-seed{args.seed}.json"
    )
    save_artifact(result.to_dict(), out, _manifest(args, cfg, args.seed, budget.to_dict()))
    print(f"{len(result.hits)} unitals from {result.subgroups_tried} subgroups -> {out}")
    if result.exhausted:
        print("budget exhausted: results are partial")
    return EXIT_OK


def cmd_design(args, cfg, lib) -> int:
    if args.command == "iso":
        a, b = _design_ref(args.a, lib), _design_ref(args.b, lib)
        iso = is_isomorphic(a, b)
        if iso is None:
            print(f"{args.a} and {args.b}: not isomorphic")
            return EXIT_FAIL
        print(f"{args.a} and {args.b}: isomorphic")
        print("map (1-based): " + " ".join(str(x) for x in iso.one_based()))
        return EXIT_OK

    d = _design_ref(args.design, lib)
    plane = lib.get(args.plane)
    budget = budget_from(cfg["embed"], max_nodes=args.max_nodes, wall_clock_ms=args.wall_clock_ms)
    group = automorphism_group(plane.structure) if args.use_group else None
    result = embed_design_in_plane(d, plane, budget, plane_group=group)
    print(f"{args.design} into {plane.name}: {result.status()} ({result.nodes} nodes)")
    if args.out:
        save_artifact(result.to_dict(), Path(args.out), _manifest(args, cfg, None, budget.to_dict()))
    if result.found:
        print("map (1-based): " + " ".join(str(p + 1) for p in result.injection))
        return EXIT_OK
    return EXIT_FAIL


def cmd_group(args, cfg, lib) -> int:
    plane = lib.get(args.plane)
    group = automorphism_group(plane.structure)
    if args.command == "order":
        print(f"{plane.name}: |Aut| = {group.order}")
        if args.json:
            print(json.dumps(group.to_dict(), indent=2))
        return EXIT_OK
    budget = budget_from(
        cfg["search"], seed=args.seed, max_subgroups=args.max_subgroups, max_nodes=args.max_nodes,
    )
    found = enumerate_small_subgroups(group, args.order, budget)
    print(f"{plane.name}: {len(found.subgroups)} subgroups of order {args.order} after {found.samples} samples"
          + (" (budget exhausted)" if found.exhausted else ""))
    if args.json:
        print(json.dumps([h.to_dict() for h in found.subgroups], indent=2))
    return EXIT_OK


def cmd_report(args, cfg, lib) -> int:
    run = report_tables(lib, args.scope, prime=int(cfg["analytics"]["prime"]))
    if args.command == "census":
        print(census_table(census(run.reports())), end="")
        print(f"distinct designs (including dual unitals): {count_distinct_designs(run.reports())}")
        return EXIT_OK
    if args.format == "json":
        print(json.dumps(run_to_dict(run), indent=2, ensure_ascii=False))
    else:
        print(tsv_table(run.rows), end="")
    if args.out:
        save_artifact(run_to_dict(run), Path(args.out), _manifest(args, cfg, None, {}))
    for line in diff_lines(run.rows):
        print(line, file=sys.stderr)
    if run.missing_planes:
        print(f"missing plane data: {', '.join(run.missing_planes)}", file=sys.stderr)
    return EXIT_FAIL if run.mismatches else EXIT_OK


def cmd_manifest(args, cfg, lib) -> int:
    m = load_manifest(Path(args.file))
    with tempfile.TemporaryDirectory() as tmp:
        ok = True
        for name, digest in sorted(m.output_digests.items()):
            argv = _replace_out(m.command, str(Path(tmp) / name))
            print(f"Replaying: {' '.join(argv)}")
            main(argv)
            fresh = file_digest(Path(tmp) / name)
            same = fresh == digest
            ok &= same
            print(f"{name}: {'identical' if same else 'DIFFERENT'}")
    return EXIT_OK if ok else EXIT_FAIL


def _replace_out(argv: Sequence[str], out: str) -> List[str]:
    res, skip = [], False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        res.append(tok)
    return res + ["--out", out]


# ---------------------------------
# Parser
# ---------------------------------


def _add_unital_choice(p: argparse.ArgumentParser) -> None:
    p.add_argument("--plane", required=True, help="Plane name, e.g. HALL or PG(2,16).")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fixture", type=int, help="Catalogued unital number.")
    g.add_argument("--points", type=_parse_ints, help="Comma-separated 1-based point labels.")
    g.add_argument("--hermitian", action="store_true", help="The Hermitian unital (PG(2,16) only).")


def _add_budget(p: argparse.ArgumentParser, *, subgroups: bool = True, clock: bool = True) -> None:
    if subgroups:
        p.add_argument("--max-subgroups", type=int, default=None)
    p.add_argument("--max-nodes", type=int, default=None)
    if clock:
        p.add_argument("--wall-clock-ms", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unitals16", description="Unitals in projective planes of order 16.")
    ap.add_argument("--config", type=Path, default=Path("unitals.yml"), help="Optional YAML config.")
    ap.add_argument("--plane-dir", type=Path, default=None, help="Directory of imported plane files.")
    ap.add_argument("--verbose", "-v", action="store_true")
    groups = ap.add_subparsers(dest="group", required=True)

    planes = groups.add_parser("planes").add_subparsers(dest="command", required=True)
    p = planes.add_parser("import", help="Split a collected-planes file into per-plane files.")
    p.add_argument("file")
    p = planes.add_parser("verify")
    p.add_argument("name")
    p = planes.add_parser("export")
    p.add_argument("name")
    p.add_argument("file")

    unital = groups.add_parser("unital").add_subparsers(dest="command", required=True)
    _add_unital_choice(unital.add_parser("check"))
    p = unital.add_parser("analyze")
    _add_unital_choice(p)
    p.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    p = unital.add_parser("search")
    p.add_argument("--plane", required=True)
    p.add_argument("--orders", type=_parse_ints, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    _add_budget(p)

    design = groups.add_parser("design").add_subparsers(dest="command", required=True)
    p = design.add_parser("iso", help="Compare two designs given as PLANE.INDEX or PLANE.INDEX^T.")
    p.add_argument("a")
    p.add_argument("b")
    p = design.add_parser("embed")
    p.add_argument("--design", required=True)
    p.add_argument("--plane", required=True)
    p.add_argument("--use-group", action="store_true", help="Seed the first block on flag-orbit representatives.")
    p.add_argument("--out", default=None)
    _add_budget(p, subgroups=False)

    group = groups.add_parser("group").add_subparsers(dest="command", required=True)
    p = group.add_parser("order")
    p.add_argument("--plane", required=True)
    p.add_argument("--json", action="store_true")
    p = group.add_parser("subgroups")
    p.add_argument("--plane", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--json", action="store_true")
    _add_budget(p, clock=False)

    report = groups.add_parser("report").add_subparsers(dest="command", required=True)
    p = report.add_parser("tables")
    p.add_argument("--scope", action="append", default=None, help="Plane name; repeat for several.")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--out", default=None)
    p = report.add_parser("census")
    p.add_argument("--scope", action="append", default=None)

    manifest = groups.add_parser("manifest").add_subparsers(dest="command", required=True)
    p = manifest.add_parser("replay")
    p.add_argument("file")
    return ap


COMMANDS = {
    "planes": cmd_planes,
    "unital": cmd_unital,
    "design": cmd_design,
    "group": cmd_group,
    "report": cmd_report,
    "manifest": cmd_manifest,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config)
        if int(cfg["autom"]["certificate_version"]) != CERTIFICATE_VERSION:
            print(f"only certificate version {CERTIFICATE_VERSION} is supported", file=sys.stderr)
            return EXIT_USAGE
        lib = PlaneLibrary(args.plane_dir or Path(cfg["plane_dir"]))
        return COMMANDS[args.group](args, cfg, lib)
    except (MissingPlaneData, UnknownFixture) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except NotAUnital as ex:
        print(f"unital: no ({ex})")
        return EXIT_FAIL
    except (UnitalError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as ex:
        logging.exception("unexpected failure: %s", ex)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())

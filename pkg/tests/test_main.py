import json

import pytest

from src.main import main


@pytest.fixture
def run(tmp_path):
    def _run(*argv):
        return main(["--config", str(tmp_path / "none.yml"), "--plane-dir", str(tmp_path / "planes"), *argv])
    return _run


@pytest.fixture
def demp(tmp_path, pg3, run):
    src = tmp_path / "collected.txt"
    src.write_text("DEMP\n" + "\n".join(" ".join(str(p + 1) for p in line) for line in pg3.lines) + "\n")
    assert run("planes", "import", str(src)) == 0
    return src


def test_hermitian_check(run, capsys):
    assert run("unital", "check", "--plane", "PG(2,16)", "--hermitian") == 0
    assert "unital: yes" in capsys.readouterr().out


def test_generic_points_are_rejected(run, capsys):
    pts = ",".join(str(i) for i in range(1, 66))
    assert run("unital", "check", "--plane", "PG(2,16)", "--points", pts) == 1
    assert "unital: no (line " in capsys.readouterr().out


def test_missing_plane_is_a_usage_error(run, capsys):
    assert run("unital", "check", "--plane", "HALL", "--fixture", "1") == 2
    assert "planes import" in capsys.readouterr().err


def test_unlisted_point_set(run, capsys):
    assert run("unital", "check", "--plane", "PG(2,16)", "--fixture", "2") == 2
    assert "not part of the catalog" in capsys.readouterr().err


def test_search_requires_a_seed(run):
    with pytest.raises(SystemExit) as info:
        run("unital", "search", "--plane", "PG(2,16)")
    assert info.value.code == 2


def test_unsupported_certificate_version(tmp_path, capsys):
    cfg = tmp_path / "cfg.yml"
    cfg.write_text("autom:\n  certificate_version: 1\n")
    assert main(["--config", str(cfg), "unital", "check", "--plane", "PG(2,16)", "--hermitian"]) == 2


def test_import_verify_export(run, demp, tmp_path, capsys):
    assert run("planes", "verify", "DEMP") == 0
    assert "DEMP: projective plane of order 3, self-dual" in capsys.readouterr().out
    out = tmp_path / "demp.txt"
    assert run("planes", "export", "DEMP", str(out)) == 0
    assert out.read_bytes() == (tmp_path / "planes" / "DEMP.txt").read_bytes()


def test_report_artifact_and_replay(run, tmp_path, capsys):
    out = tmp_path / "tables.json"
    assert run("report", "tables", "--scope", "NOPE", "--out", str(out)) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["rows"] == []
    assert data["manifest"] == "tables.manifest.json"
    manifest = json.loads((tmp_path / "tables.manifest.json").read_text(encoding="utf-8"))
    assert manifest["output_digests"].keys() == {"tables.json"}
    capsys.readouterr()
    assert main(["manifest", "replay", str(tmp_path / "tables.manifest.json")]) == 0
    assert "tables.json: identical" in capsys.readouterr().out


@pytest.mark.slow
def test_group_order_of_pg16(run, capsys):
    assert run("group", "order", "--plane", "PG(2,16)") == 0
    assert "|Aut| = 17108582400" in capsys.readouterr().out


@pytest.mark.slow
def test_hall_row(library, capsys):
    if not library.has("HALL"):
        pytest.skip("no plane data for HALL")
    assert main(["--plane-dir", str(library.plane_dir), "unital", "analyze", "--plane", "HALL",
                 "--fixture", "6", "--format", "tsv"]) == 0
    assert capsys.readouterr().out.strip() == "HALL\t6\t1200\t54\t1094/1094\tHALL^T.6"

from src.catalog import CellDiff, RowResult, TableRun
from src.dedupe import group_by, pairs_with_equal_keys, points_digest, unique_by
from src.models import DesignReport, ExpectedRow
from src.render import TSV_HEADER, census_table, diff_lines, report_text, run_to_dict, tsv_row, tsv_table


def _hall6():
    return DesignReport("HALL", "6", 1200, 1200, 54, 1094, 1094, "c", "c", "HALL^T.6", True)


def test_tsv_row():
    assert tsv_row(_hall6()) == "HALL\t6\t1200\t54\t1094/1094\tHALL^T.6"


def test_table_with_rows_lacking_point_sets():
    rows = [
        RowResult("HALL", 6, None, _hall6()),
        RowResult("BBH1", 7, ExpectedRow(8, 63, (34, 34)), None, status="no point set"),
    ]
    lines = tsv_table(rows).splitlines()
    assert lines[0].split("\t") == list(TSV_HEADER)
    assert lines[2] == "BBH1\t7\t8\t63\t34/34\t(no point set)"


def test_diffs_and_json():
    row = RowResult("X", 3, ExpectedRow(16, 63, (1, 1)), _hall6(), [CellDiff("rank", "63", "54")], "mismatch")
    assert diff_lines([row]) == ["X #3 rank: expected 63, got 54"]
    d = run_to_dict(TableRun([row], ["SEMI4"], {("X", 3): 4}))
    assert d["mismatching_cells"] == 1
    assert d["listing_moves"] == ["X#3->4"]
    assert d["rows"][0]["diffs"] == [{"column": "rank", "expected": "63", "actual": "54"}]


def test_census_and_text():
    text = census_table({"A": {8: 1, 16: 2}, "B": {16: 1}})
    assert text.splitlines() == ["Plane\t8\t16\tTotal", "A\t1\t2\t3", "B\t\t1\t1"]
    assert "isomorphic to: HALL^T.6" in report_text(_hall6())


def test_dedupe_helpers():
    assert points_digest([3, 1, 2]) == points_digest([1, 2, 3])
    assert unique_by(["bb", "a", "cc", "b"], key=lambda s: s[0]) == ["a", "bb", "cc"]
    items = [("x", "k1"), ("y", "k2"), ("z", "k1")]
    assert group_by(items, key=lambda t: t[1])["k1"] == [("x", "k1"), ("z", "k1")]
    assert pairs_with_equal_keys(items) == [("x", "z")]

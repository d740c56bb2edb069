import pytest

from src.errors import PlaneFormatError
from src.parse_planes import (
    load_plane_file,
    plane_file_name,
    read_collected_planes,
    read_plane_text,
    save_plane_file,
    write_plane_text,
)

FANO_1_BASED = """\
FANO
1 2 4
2 3 5
3 4 6
4 5 7
5 6 1
6 7 2
7 1 3
"""

FANO_0_BASED = """\
Fano, zero based:
0 1 3
1 2 4
2 3 5
3 4 6
4 5 0
5 6 1
6 0 2
"""


def test_collected_file_with_mixed_label_bases():
    planes = read_collected_planes(FANO_1_BASED + "\n" + FANO_0_BASED)
    assert [p.name for p in planes] == ["FANO", "Fano, zero based"]
    assert planes[0].structure == planes[1].structure
    assert all(p.order == 2 for p in planes)


def test_wrong_row_count_is_rejected():
    text = "\n".join(FANO_1_BASED.splitlines()[:-1])
    with pytest.raises(PlaneFormatError):
        read_collected_planes(text)


def test_own_format_round_trip(pg4, tmp_path):
    text = write_plane_text(pg4)
    assert text.startswith("name: PG(2,4)\norder: 4\npoints: 21\n")
    back = read_plane_text(text)
    assert back == pg4
    assert write_plane_text(back) == text

    path = save_plane_file(pg4, tmp_path / plane_file_name(pg4.name))
    assert path.name == "PG_2_4.txt"
    assert load_plane_file(path) == pg4
    assert path.read_text(encoding="utf-8") == text


def test_own_format_rejects_zero_labels():
    text = "name: X\norder: 2\npoints: 7\n" + FANO_0_BASED.split("\n", 1)[1]
    with pytest.raises(PlaneFormatError):
        read_plane_text(text)


def test_own_format_needs_header():
    with pytest.raises(PlaneFormatError):
        read_plane_text(FANO_1_BASED.split("\n", 1)[1])

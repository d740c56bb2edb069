import pytest

from src.budget import BudgetTracker
from src.errors import BudgetExhausted
from src.exact_cover import ExactCover, count_exact_covers, naive_count


def test_unique_cover():
    blocks = [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9], [0, 1, 2, 3, 5]]
    n, covers = count_exact_covers(10, blocks, collect=True)
    assert n == 1
    assert covers == [[0, 1]]
    assert naive_count(10, blocks) == 1


def test_uncoverable_point():
    assert count_exact_covers(4, [[0, 1], [1, 2]])[0] == 0
    assert naive_count(4, [[0, 1], [1, 2]]) == 0


def test_affine_plane_has_four_parallel_classes(affine3):
    n, covers = count_exact_covers(9, affine3.blocks, collect=True)
    assert n == 4 == naive_count(9, affine3.blocks)
    for cover in covers:
        pts = sorted(p for b in cover for p in affine3.blocks[b])
        assert pts == list(range(9))


def test_counting_leaves_the_matrix_intact(affine3):
    ec = ExactCover(9, affine3.blocks)
    before = {c: set(rows) for c, rows in ec.columns.items()}
    ec.count()
    assert ec.columns == before
    assert ec.count()[0] == 4


def test_one_factors_of_k6():
    edges = [[a, b] for a in range(6) for b in range(a + 1, 6)]
    assert count_exact_covers(6, edges)[0] == 15 == naive_count(6, edges)


def test_limits():
    edges = [[a, b] for a in range(8) for b in range(a + 1, 8)]
    assert naive_count(8, edges, limit=5) is None
    with pytest.raises(BudgetExhausted):
        count_exact_covers(8, edges, tracker=BudgetTracker(max_nodes=5, wall_clock_ms=60_000))

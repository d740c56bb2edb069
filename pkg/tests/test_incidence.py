import numpy as np
import pytest

from src.errors import DuplicateBlocks, EmptyStructure, NotDivisible, PairCovered, WrongCounts
from src.incidence import (
    DesignParams,
    IncidenceStructure,
    dual,
    incidence_matrix,
    verify_design,
    verify_plane,
)


def test_design_params_for_unitals_and_planes():
    u = DesignParams.unital(4)
    assert (u.v, u.k, u.lam, u.r, u.b) == (65, 5, 1, 16, 208)
    p = DesignParams.plane(16)
    assert (p.v, p.k, p.r, p.b) == (273, 17, 17, 273)


def test_design_params_reject_non_integral_counts():
    with pytest.raises(NotDivisible):
        DesignParams(2, 10, 4, 1)
    with pytest.raises(ValueError):
        DesignParams(2, 7, 1, 1)


def test_fano_is_a_plane(fano):
    again = verify_plane(fano.structure, 2, name="fano")
    assert again.num_points == 7
    assert len(again.lines) == 7
    assert verify_design(fano.structure, DesignParams.plane(2))


def test_missing_line_is_wrong_counts(fano):
    s = IncidenceStructure(7, fano.lines[:-1])
    with pytest.raises(WrongCounts):
        verify_plane(s, 2)


def test_pair_covered_twice(cyclic_triples):
    with pytest.raises(PairCovered) as info:
        verify_plane(cyclic_triples, 2)
    assert info.value.count == 2
    assert not verify_design(cyclic_triples, DesignParams.plane(2))


def test_blocks_must_be_sorted_and_in_range():
    with pytest.raises(ValueError):
        IncidenceStructure(3, ((1, 0),))
    with pytest.raises(ValueError):
        IncidenceStructure(3, ((0, 3),))


def test_from_blocks_rejects_repeats_unless_allowed():
    with pytest.raises(DuplicateBlocks):
        IncidenceStructure.from_blocks(3, [[0, 1], [1, 0]])
    s = IncidenceStructure.from_blocks(3, [[0, 1], [1, 0]], simple=False)
    assert s.blocks == ((0, 1), (0, 1))


def test_dual_twice_is_identity(pg3):
    s = pg3.structure
    assert dual(dual(s)) == s
    assert pg3.dual().dual() == pg3


def test_dual_of_empty_structure():
    with pytest.raises(EmptyStructure):
        dual(IncidenceStructure(3, ()))


def test_structure_without_points_is_rejected(fano):
    with pytest.raises(EmptyStructure):
        IncidenceStructure(0, ())
    with pytest.raises(EmptyStructure):
        IncidenceStructure.from_blocks(0, [])
    with pytest.raises(EmptyStructure):
        fano.structure.induced([])


def test_induced_keeps_order_and_drops_short_traces(fano):
    sub = fano.structure.induced([6, 2, 4], min_size=2)
    assert sub.num_points == 3
    for blk in sub.blocks:
        assert len(blk) >= 2
        assert list(blk) == sorted(blk)


def test_relabel_and_matrix(fano):
    images = [6, 5, 4, 3, 2, 1, 0]
    r = fano.structure.relabel(images)
    m = incidence_matrix(r)
    assert m.shape == (7, 7)
    assert m.sum() == 21
    assert (m.sum(axis=0) == 3).all()
    back = r.relabel(images)
    assert back == fano.structure


def test_join_and_meet(pg3):
    for p in range(pg3.num_points):
        for q in range(p + 1, pg3.num_points):
            li = pg3.line_through(p, q)
            assert p in pg3.lines[li] and q in pg3.lines[li]
    a, b = 0, 5
    x = pg3.meet(a, b)
    assert x in pg3.lines[a] and x in pg3.lines[b]


def test_bit_matrix_matches_blocks(pg4):
    bits = pg4.structure.bits
    assert bits.dtype == np.uint64
    assert bits.shape == (21, 1)
    for i, blk in enumerate(pg4.lines):
        word = int(bits[i, 0])
        assert word == sum(1 << p for p in blk)


def test_dual_of_a_single_block():
    d = dual(IncidenceStructure(3, ((0, 1, 2),)))
    assert d.num_points == 1
    assert d.blocks == ((0,), (0,), (0,))

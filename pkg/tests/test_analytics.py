import numpy as np
import pytest

from src.analytics import (
    analyze,
    census,
    count_distinct_designs,
    p_rank,
    p_rank_fraction_free,
    parallel_class_list,
    parallel_classes,
)
from src.catalog import hermitian_unital
from src.errors import NonUniformBlocks, NotDivisible, NotPrime
from src.geometry import pg2
from src.incidence import IncidenceStructure, incidence_matrix
from src.models import DesignReport
from src.unitals import Unital, design_from_unital


def _report(plane, uid, aut, cert="a", dual="b"):
    return DesignReport(plane, uid, aut, aut, 64, 0, 0, cert, dual)


def test_identity_rank():
    assert p_rank(np.eye(3, dtype=int), 5) == 3
    assert p_rank_fraction_free(np.eye(3, dtype=int), 5) == 3


def test_rank_needs_a_prime():
    with pytest.raises(NotPrime):
        p_rank(np.eye(2, dtype=int), 4)
    with pytest.raises(NotPrime):
        p_rank_fraction_free(np.eye(2, dtype=int), 1)


def test_fano_ranks(fano):
    m = incidence_matrix(fano.structure)
    assert p_rank(m, 2) == 4
    assert p_rank(m, 5) == 7
    # A A^T = 2I + J has determinant 9 * 2^6, so 3 divides det(A)
    assert p_rank(m, 3) < 7


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_agrees_with_fraction_free(p):
    rng = np.random.default_rng(p)
    for _ in range(10):
        m = rng.integers(0, 2, size=(12, 9))
        assert p_rank(m, p) == p_rank_fraction_free(m, p)


def test_rank_ignores_row_and_column_order():
    rng = np.random.default_rng(1)
    m = rng.integers(0, 2, size=(10, 10))
    shuffled = m[rng.permutation(10)][:, rng.permutation(10)]
    assert p_rank(m, 5) == p_rank(shuffled, 5)


def _structure(fixture):
    if isinstance(fixture, Unital):
        return design_from_unital(fixture)
    return getattr(fixture, "structure", fixture)


@pytest.mark.parametrize("name", ["fano", "pg3", "pg4", "affine3", pytest.param("herm16", marks=pytest.mark.slow)])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_of_relabeled_incidence_matrices(request, name, p):
    m = incidence_matrix(_structure(request.getfixturevalue(name)))
    expected = p_rank(m, p)
    rng = np.random.default_rng(p)
    rows, cols = m.shape
    for _ in range(50):
        shuffled = m[rng.permutation(rows)][:, rng.permutation(cols)]
        assert p_rank(shuffled, p) == expected


@pytest.mark.parametrize("name, p, rank", [("fano", 2, 4), ("pg3", 3, 7), ("pg4", 2, 10)])
def test_p_rank_of_desarguesian_planes(request, name, p, rank):
    assert p_rank(incidence_matrix(request.getfixturevalue(name).structure), p) == rank


def test_empty_block_list_matrix():
    m = incidence_matrix(IncidenceStructure(4, ()))
    assert m.shape == (0, 4)
    assert p_rank(m, 5) == 0


def test_parallel_class_preconditions(fano):
    with pytest.raises(NonUniformBlocks):
        parallel_classes(IncidenceStructure.from_blocks(4, [[0, 1], [1, 2, 3]]))
    with pytest.raises(NotDivisible):
        parallel_classes(fano.structure)


def test_parallel_classes_of_the_affine_plane(affine3):
    assert parallel_classes(affine3) == 4
    classes = parallel_class_list(affine3)
    assert len(classes) == 4
    assert sorted(b for c in classes for b in c) == list(range(12))


def test_analyze_small_hermitian(pg4, herm4):
    rep = analyze(pg4, herm4, unital_id="1")
    assert rep.stabilizer_order == 432
    assert rep.design_aut_order == 432
    assert rep.aut_order == 432
    assert rep.p_rank_5 == 9
    assert (rep.parallel_classes, rep.dual_parallel_classes) == (4, 4)
    assert rep.dual_self_isomorphic
    assert rep.isomorphic_partner == "PG(2,4)^T.1"
    assert rep.flags == []
    assert DesignReport.from_dict(rep.to_dict()) == rep


def test_analyze_uses_partner_names(pg4, herm4):
    first = analyze(pg4, herm4, unital_id="1")
    rep = analyze(pg4, herm4, unital_id="1", partners={first.certificate: "X^T.7"})
    assert rep.isomorphic_partner == "X^T.7"


def test_counting_and_census():
    assert count_distinct_designs([]) == 0
    reports = [_report("A", "1", 16, "c1", "c2"), _report("A", "2", 16, "c2", "c1"), _report("B", "1", 8, "c3", "c3")]
    assert count_distinct_designs(reports) == 3
    assert census(reports) == {"A": {16: 2}, "B": {8: 1}}


@pytest.mark.slow
def test_hermitian_unital_of_pg16():
    plane = pg2(16)
    u = hermitian_unital()
    assert len(u.points) == 65
    rep = analyze(plane, u, unital_id="2")
    assert rep.design_aut_order == 249600
    assert rep.p_rank_5 == 52
    assert rep.classes_pair() == "4304/4304"
    assert rep.dual_self_isomorphic
    assert rep.isomorphic_partner == "PG(2,16)^T.2"

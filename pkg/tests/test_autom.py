from random import Random

import pytest

from src.autom import (
    Certificate,
    Coloring,
    automorphism_group,
    canonical_certificate,
    canonical_labeling,
    is_isomorphic,
    is_self_dual,
    refine,
    setwise_stabilizer,
)
from src.geometry import pg2
from src.incidence import IncidenceStructure
from src.permgroup import brute_force_order


def _shuffled(s, seed):
    rng = Random(seed)
    images = list(range(s.num_points))
    rng.shuffle(images)
    blocks = [tuple(sorted(images[p] for p in blk)) for blk in s.blocks]
    rng.shuffle(blocks)
    return IncidenceStructure(s.num_points, tuple(blocks))


def test_coloring_validation(fano):
    s = fano.structure
    with pytest.raises(ValueError):
        Coloring((0,) * 14, 7)
    with pytest.raises(ValueError):
        Coloring((0,) * 7 + (2,) * 7, 7)
    c = Coloring.from_point_classes(s, [[3], []])
    assert c.colors[:7] == (1, 1, 1, 0, 1, 1, 1)
    assert set(c.colors[7:]) == {2}


def test_uniform_refinement_of_a_plane_is_stable(pg4):
    c = refine(pg4.structure, Coloring.uniform(pg4.structure))
    assert len(c.point_cells()) == 1
    assert len(c.block_cells()) == 1


def test_one_distinguished_point_of_fano(fano):
    s = fano.structure
    c = refine(s, Coloring.from_point_classes(s, [[0]]))
    assert sorted(len(x) for x in c.point_cells()) == [1, 6]
    assert sorted(len(x) for x in c.block_cells()) == [3, 4]
    through = set(s.point_blocks[0])
    for cell in c.block_cells():
        assert all(b in through for b in cell) or not any(b in through for b in cell)
    assert refine(s, c) == c


def test_plane_group_orders(fano, pg3, pg4):
    assert automorphism_group(fano.structure).order == 168
    assert automorphism_group(pg3.structure).order == 5616
    assert automorphism_group(pg4.structure).order == 120960


def test_group_generators_are_automorphisms(pg3):
    s = pg3.structure
    lines = set(s.blocks)
    g = automorphism_group(s)
    for h in g.generators:
        assert {tuple(sorted(h(p) for p in blk)) for blk in s.blocks} == lines


def test_small_design_group_matches_brute_force(affine3):
    g = automorphism_group(affine3)
    assert g.order == 432
    assert brute_force_order(g) == 432


@pytest.mark.parametrize("name", ["fano", "pg3", "affine3"])
def test_certificate_ignores_labels(request, name):
    fixture = request.getfixturevalue(name)
    s = getattr(fixture, "structure", fixture)
    a = canonical_certificate(s)
    assert a.version == 2
    assert Certificate.from_hex(a.hex()) == a
    for seed in range(200):
        assert canonical_certificate(_shuffled(s, seed)) == a, seed


def test_canonical_labeling_gives_the_certificate_form(affine3):
    lab = canonical_labeling(affine3)
    assert sorted(lab) == list(range(affine3.num_points))
    relabelled = affine3.relabel(lab)
    assert canonical_certificate(relabelled) == canonical_certificate(affine3)


def test_is_isomorphic_returns_a_verified_map(pg3):
    s = pg3.structure
    t = _shuffled(s, 5)
    iso = is_isomorphic(s, t)
    assert iso is not None
    target = set(t.blocks)
    assert all(tuple(sorted(iso(p) for p in blk)) in target for blk in s.blocks)


def test_non_isomorphic_structures(fano, cyclic_triples):
    assert is_isomorphic(fano.structure, cyclic_triples) is None
    assert canonical_certificate(fano.structure) != canonical_certificate(cyclic_triples)
    assert is_isomorphic(fano.structure, pg2(3).structure) is None


def test_setwise_stabilizers(pg3, pg4, herm4):
    assert setwise_stabilizer(pg3, pg3.lines[0]).order == 5616 // 13
    assert setwise_stabilizer(pg3, []).order == 5616
    stab = setwise_stabilizer(pg4, herm4.points)
    assert stab.order == 432
    pts = set(herm4.points)
    assert all({g(p) for p in pts} == pts for g in stab.generators)


def test_desarguesian_planes_are_self_dual(pg3):
    assert is_self_dual(pg3)


@pytest.mark.slow
def test_pg16_group_and_line_stabilizer():
    plane = pg2(16)
    order = automorphism_group(plane.structure).order
    assert order == 17_108_582_400
    assert setwise_stabilizer(plane, plane.lines[0]).order == order // 273
    assert len(refine(plane.structure, Coloring.uniform(plane.structure)).point_cells()) == 1


def test_pg7_group_order():
    # PGL(3,7); 7 is prime so there are no field automorphisms
    assert automorphism_group(pg2(7).structure).order == 5_630_688


@pytest.mark.slow
def test_pg8_group_order():
    assert automorphism_group(pg2(8).structure).order == 49_448_448

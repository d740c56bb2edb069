from random import Random

import pytest

from src.errors import DegreeMismatch
from src.models import SearchBudget
from src.permgroup import (
    PermGroup,
    Permutation,
    brute_force_order,
    build_chain,
    compose,
    conjugate,
    enumerate_small_subgroups,
    identity,
    inverse,
    orbits,
    subgroup_violation,
)


def _sym(n):
    return PermGroup(n, [Permutation.from_cycles(n, [(0, 1)]), Permutation.from_cycles(n, [tuple(range(n))])])


def test_compose_applies_left_first():
    a = Permutation((1, 2, 0))
    b = Permutation((0, 2, 1))
    ab = compose(a, b)
    assert all(ab(i) == b(a(i)) for i in range(3))
    assert compose(a, inverse(a)) == identity(3)
    assert conjugate(a, identity(3)) == a


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        compose(identity(3), identity(4))
    with pytest.raises(DegreeMismatch):
        PermGroup(3, [identity(4)])


def test_not_a_permutation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_cycles_and_order():
    p = Permutation.from_cycles(6, [(0, 1, 2), (3, 4)])
    assert p.cycles() == [(0, 1, 2), (3, 4)]
    assert p.order() == 6
    assert p.power(6).is_identity()
    assert str(p) == "(0 1 2)(3 4)"
    assert Permutation.from_one_based(p.one_based()) == p


@pytest.mark.parametrize("n,order", [(3, 6), (4, 24), (5, 120), (6, 720)])
def test_symmetric_group_orders(n, order):
    g = _sym(n)
    assert g.order == order
    assert brute_force_order(g) == order


def test_small_groups_agree_with_brute_force():
    groups = [
        PermGroup(8, [Permutation.from_cycles(8, [tuple(range(8))])]),
        PermGroup(8, [Permutation.from_cycles(8, [tuple(range(8))]), Permutation((0, 7, 6, 5, 4, 3, 2, 1))]),
        PermGroup(6, [Permutation.from_cycles(6, [(0, 1, 2)]), Permutation.from_cycles(6, [(3, 4, 5)])]),
        PermGroup(5, [Permutation.from_cycles(5, [(0, 1, 2)]), Permutation.from_cycles(5, [(2, 3, 4)])]),
    ]
    for g in groups:
        assert g.order == brute_force_order(g)


def test_trivial_group():
    g = PermGroup(5, [])
    assert g.order == 1
    assert orbits(g) == [[0], [1], [2], [3], [4]]


def test_membership_and_random_elements():
    g = PermGroup(5, [Permutation.from_cycles(5, [(0, 1, 2)]), Permutation.from_cycles(5, [(2, 3, 4)])])
    assert g.order == 60
    assert g.contains(Permutation.from_cycles(5, [(0, 1), (2, 3)]))
    assert not g.contains(Permutation.from_cycles(5, [(0, 1)]))
    rng = Random(3)
    for _ in range(20):
        assert g.contains(g.random_element(rng))


def test_orbits():
    g = PermGroup(7, [Permutation.from_cycles(7, [(0, 2)]), Permutation.from_cycles(7, [(2, 4), (1, 5)])])
    assert orbits(g) == [[0, 2, 4], [1, 5], [3], [6]]


def test_alternating_subgroup_of_s4():
    budget = SearchBudget(max_subgroups=64, max_nodes=3000, seed=7)
    found = enumerate_small_subgroups(_sym(4), 12, budget)
    assert len(found.subgroups) == 1
    h = found.subgroups[0]
    assert h.order == 12
    # A4: every element is an even permutation
    for e in h.elements:
        assert sum(len(c) - 1 for c in e.cycles()) % 2 == 0
    assert found.exhausted


def test_orders_not_dividing_the_group():
    found = enumerate_small_subgroups(_sym(4), 5, SearchBudget(seed=1))
    assert found.subgroups == []
    assert not found.exhausted


def test_sampler_is_deterministic_per_seed():
    g = _sym(5)
    budget = SearchBudget(max_subgroups=6, max_nodes=5000, seed=11)
    a = enumerate_small_subgroups(g, 4, budget)
    b = enumerate_small_subgroups(g, 4, budget)
    assert [s.key() for s in a.subgroups] == [s.key() for s in b.subgroups]
    assert all(s.order == 4 for s in a.subgroups)


def test_subgroup_generating_set():
    found = enumerate_small_subgroups(_sym(4), 8, SearchBudget(max_subgroups=1, max_nodes=5000, seed=2))
    h = found.subgroups[0]
    d = h.to_dict()
    assert d["order"] == 8
    assert 1 <= len(d["generators"]) <= 3


def test_long_cycle_has_one_orbit():
    g = PermGroup(273, [Permutation.from_cycles(273, [tuple(range(273))])])
    assert orbits(g) == [list(range(273))]
    assert g.order == 273


def test_small_compositions():
    t01 = Permutation.from_cycles(3, [(0, 1)])
    t12 = Permutation.from_cycles(3, [(1, 2)])
    assert compose(t01, t12).order() == 3
    assert inverse(Permutation.from_cycles(3, [(0, 1, 2)])) == Permutation.from_cycles(3, [(0, 2, 1)])
    assert compose(identity(3), t01) == t01


def test_build_chain_gives_order_and_membership():
    order, member = build_chain(_sym(4))
    assert order == 24
    assert member(Permutation.from_cycles(4, [(0, 3)]))
    a4 = PermGroup(4, [Permutation.from_cycles(4, [(0, 1, 2)]), Permutation.from_cycles(4, [(1, 2, 3)])])
    order, member = build_chain(a4)
    assert order == 12
    assert not member(Permutation.from_cycles(4, [(0, 3)]))


def test_subgroup_violations():
    ident = (0, 1, 2, 3)
    rot = (1, 2, 3, 0)
    assert subgroup_violation([ident, rot, (2, 3, 0, 1), (3, 0, 1, 2)], 4) is None
    assert "not closed" in subgroup_violation([ident, rot, (2, 3, 0, 1), (0, 1, 3, 2)], 4)
    assert "expected 2" in subgroup_violation([ident], 2)


@pytest.mark.parametrize("target", [2, 3, 4, 6])
def test_sampled_subgroups_are_closed_with_dividing_orbits(target):
    g = _sym(5)
    found = enumerate_small_subgroups(g, target, SearchBudget(max_subgroups=8, max_nodes=4000, seed=5))
    assert found.subgroups
    for h in found.subgroups:
        elems = [e.images for e in h.elements]
        assert subgroup_violation(elems, target) is None
        assert all(target % len(orb) == 0 for orb in orbits(h))
        assert all(g.contains(e) for e in h.elements)

import random

import pytest

from twistcartan.cartan import (
    check_cartan,
    check_diag_B,
    check_diag_S,
    check_max,
    check_ricc,
    equivalence_suite,
    is_maximal_abelian,
)
from twistcartan.cocycle import Cocycle, bicharacter_cocycle, is_abelian_twist, random_cocycle
from twistcartan.errors import PreconditionFailed
from twistcartan.groupoid import isotropy, subgroupoid, units_subgroupoid, wide_normal_subgroupoids
from twistcartan.groups import abelian, cyclic, dihedral, disjoint_union, heisenberg_base, pair_groupoid, symmetric


def heisenberg():
    G = heisenberg_base()
    return bicharacter_cocycle(G, 2, lambda x, y: x[0] * y[1])


@pytest.mark.parametrize("members", [[0, 1], [0, 2], [0, 3]])
def test_heisenberg_order_two_subgroups_are_diagonal(members):
    c = heisenberg()
    S = subgroupoid(c.groupoid, members)
    v = check_cartan(c, S)
    assert v.cartan and v.max and v.ricc
    assert check_diag_S(c, S) and check_diag_B(c, S)
    assert is_maximal_abelian(c, S)


def test_heisenberg_units_not_cartan():
    c = heisenberg()
    S = units_subgroupoid(c.groupoid)
    assert not check_max(c, S)
    assert not check_cartan(c, S).cartan
    assert not check_diag_S(c, S)


def test_s3_a3_fails_ricc_only():
    G = symmetric(3)
    A3 = [S for S in wide_normal_subgroupoids(G) if len(S) == 3][0]
    c = Cocycle.trivial(G)
    assert check_max(c, A3)
    assert not check_ricc(c, A3)
    assert not check_cartan(c, A3).cartan
    assert not check_diag_S(c, A3) and not check_diag_B(c, A3)


def test_pair_groupoid_units_diagonal():
    G = pair_groupoid(3)
    c = Cocycle.trivial(G)
    S = units_subgroupoid(G)
    assert check_cartan(c, S).cartan and check_diag_S(c, S)


def test_abelian_bundle_isotropy_diagonal():
    G = disjoint_union(cyclic(2), abelian(2, 2))
    c = Cocycle.trivial(G)
    assert check_diag_S(c, isotropy(G))
    assert not check_diag_S(c, units_subgroupoid(G))


def test_untwisted_corollary(catalog):
    for e in catalog:
        if not e.cocycle.is_trivial():
            continue
        G = e.groupoid
        iso = isotropy(G)
        abelian_iso = all(G.table[a][b] == G.table[b][a] for a in iso.members for b in iso.members if G.range[a] == G.range[b])
        assert check_diag_S(e.cocycle, e.S) == (e.S == iso and abelian_iso)


def test_equivalence_suite_consistent_on_random_dihedral():
    rng = random.Random(0)
    G = dihedral(4)
    for _ in range(5):
        c = random_cocycle(G, 4, rng)
        for S in wide_normal_subgroupoids(G):
            try:
                r = equivalence_suite(c, S)
            except PreconditionFailed:  # non-abelian twists are rejected up front
                assert not is_abelian_twist(c, S)
                continue
            assert r.consistent, r.failures()


def test_verdict_dict_keys():
    c = heisenberg()
    d = check_cartan(c, subgroupoid(c.groupoid, [0, 1])).as_dict()
    assert set(d) >= {"max", "ricc", "cartan"}

import pytest
from hypothesis import given, settings, strategies as st

from twistcartan.errors import BadInverse, BadUnit, DomainMismatch, NonAssociative, NotNormal, NotSubgroupoid
from twistcartan.groupoid import (
    generated_subgroup,
    is_principal,
    is_wide_normal,
    isotropy,
    quotient,
    subgroupoid,
    subgroups,
    units_subgroupoid,
    validate_groupoid,
    wide_normal_subgroupoids,
)
from twistcartan.groups import (
    abelian,
    action_groupoid,
    cyclic,
    dihedral,
    direct_product,
    disjoint_union,
    pair_groupoid,
    small_groups,
    symmetric,
)

GROUPS = small_groups(16)


def z2_tables():
    # units 'e', plus 'a' with a*a = e
    return dict(
        elements=["e", "a"],
        units=["e"],
        range_map={"e": "e", "a": "e"},
        source_map={"e": "e", "a": "e"},
        compose_map={("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "e"},
        inverse_map={"e": "e", "a": "a"},
    )


def test_validate_accepts_z2():
    G = validate_groupoid(**z2_tables())
    assert G.size == 2 and G.n_units == 1
    assert G.compose(1, 1) == 0


def test_validate_empty():
    with pytest.raises(DomainMismatch):
        validate_groupoid([], [], {}, {}, {}, {})


def test_validate_missing_composition():
    t = z2_tables()
    del t["compose_map"][("a", "a")]
    with pytest.raises(DomainMismatch):
        validate_groupoid(**t)


def test_validate_bad_unit():
    t = z2_tables()
    t["compose_map"][("e", "a")] = "e"
    with pytest.raises(BadUnit):
        validate_groupoid(**t)


def test_validate_bad_inverse():
    t = z2_tables()
    t["inverse_map"]["a"] = "e"
    with pytest.raises(BadInverse):
        validate_groupoid(**t)


def test_validate_nonassociative():
    # a loop of order 5 that is not a group: a Latin square with identity 0
    L = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    els = list(range(5))
    with pytest.raises(NonAssociative):
        validate_groupoid(
            els,
            [0],
            {g: 0 for g in els},
            {g: 0 for g in els},
            {(g, h): L[g][h] for g in els for h in els},
            {g: g for g in els},
        )


def test_group_counts():
    assert len(GROUPS) == 42
    orders = sorted(G.size for _, G in GROUPS)
    assert orders.count(8) == 5 and orders.count(16) == 14 and orders.count(12) == 5


def test_pair_groupoid_is_principal():
    G = pair_groupoid(3)
    assert G.size == 9 and G.n_units == 3
    assert is_principal(G)
    assert len(G.orbits) == 1


def test_bundle_orbits_and_isotropy():
    G = disjoint_union(cyclic(2), cyclic(3))
    assert G.n_units == 2 and G.size == 5
    assert len(G.orbits) == 2
    assert isotropy(G).sorted() == tuple(range(5))
    assert not is_principal(G)


def test_action_groupoid_sizes():
    S3 = symmetric(3)
    G = action_groupoid(S3, range(3), lambda h, x: S3.labels[h][x])
    assert G.size == 18 and G.n_units == 3
    # each stabilizer has order 2
    assert all(len(f) == 2 for f in G.isotropy_fibers)


def test_subgroupoid_rejects_non_closed():
    G = cyclic(4)
    with pytest.raises(NotSubgroupoid):
        subgroupoid(G, [0, 1])


def test_quotient_of_s3_by_a3():
    G = symmetric(3)
    A3 = [S for S in wide_normal_subgroupoids(G) if len(S) == 3][0]
    Q = quotient(G, A3)
    assert Q.groupoid.size == 2
    assert all(len(c) == 3 for c in Q.cosets)


def test_quotient_needs_normal():
    G = symmetric(3)
    H = [h for h in subgroups(G, 0) if len(h) == 2][0]
    with pytest.raises(NotNormal):
        quotient(G, subgroupoid(G, H))


def test_normal_subgroup_counts():
    assert len(wide_normal_subgroupoids(symmetric(3))) == 3
    assert len(wide_normal_subgroupoids(dihedral(4))) == 6
    assert len(wide_normal_subgroupoids(abelian(2, 2))) == 5


def test_subgroup_counts():
    assert len(subgroups(symmetric(3), 0)) == 6
    assert len(subgroups(cyclic(12), 0)) == 6


def test_wide_normal_in_pair_groupoid_product():
    G = direct_product(pair_groupoid(2), cyclic(2))
    subs = wide_normal_subgroupoids(G)
    assert units_subgroupoid(G) in subs
    for S in subs:
        rep = is_wide_normal(G, S)
        assert rep.wide and rep.normal


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_group_axioms(named, data):
    _, G = named
    g = data.draw(st.sampled_from(G.elements))
    h = data.draw(st.sampled_from(G.elements))
    k = data.draw(st.sampled_from(G.elements))
    assert G.compose(G.compose(g, h), k) == G.compose(g, G.compose(h, k))
    assert G.compose(g, G.inv(g)) == G.range[g]
    assert G.inv(G.inv(g)) == g


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_generated_subgroup_is_closed(named, data):
    _, G = named
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=3))
    H = generated_subgroup(G, 0, gens)
    assert set(gens) <= H
    assert all(G.compose(a, b) in H for a in H for b in H)
    assert G.size % len(H) == 0

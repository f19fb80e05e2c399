import random

import pytest

from twistcartan.cocycle import TwistElement, bicharacter_cocycle, twist_mul
from twistcartan.dual import (
    act,
    act_coset,
    canonical_coset,
    enumerate_dual_fiber,
    is_twisted_character,
    TwistedCharacter,
    pair_data,
    raw_dual_search,
)
from twistcartan.errors import FiberMismatch, NotAbelian
from twistcartan.groupoid import subgroupoid
from twistcartan.groups import abelian, heisenberg_base
from twistcartan.roots import ONE, RootOfUnity


def sample(catalog, k, seed):
    return random.Random(seed).sample(catalog, k)


def heisenberg():
    G = heisenberg_base()
    return bicharacter_cocycle(G, 2, lambda x, y: x[0] * y[1])


def test_dual_matches_raw_search(catalog):
    for e in sample(catalog, 60, 0):
        for u in e.groupoid.units:
            fast = enumerate_dual_fiber(e.cocycle, e.S, u).characters
            slow = raw_dual_search(e.cocycle, e.S, u)
            assert list(fast) == slow
            assert all(is_twisted_character(e.cocycle, k) for k in fast)


def test_dual_needs_abelian_twist():
    G = abelian(2, 2)
    c = bicharacter_cocycle(G, 2, lambda x, y: x[0] * y[1])
    with pytest.raises(NotAbelian):
        enumerate_dual_fiber(c, subgroupoid(G, G.elements), 0)


def test_heisenberg_dual_size():
    c = heisenberg()
    G = c.groupoid
    S = subgroupoid(G, [0, 1])
    D = enumerate_dual_fiber(c, S, 0)
    assert len(D) == 2


def test_action_is_a_left_action(catalog):
    rng = random.Random(2)
    for e in sample(catalog, 40, 1):
        c, S = e.cocycle, e.S
        G = c.groupoid
        for kappa in pair_data(c, S).points:
            u = kappa.unit
            gs = [g for g in G.elements if G.source[g] == u]
            h = rng.choice(gs)
            g = rng.choice([x for x in G.elements if G.source[x] == G.range[h]])
            a = TwistElement(RootOfUnity(rng.randrange(4), 4), g)
            b = TwistElement(RootOfUnity(rng.randrange(4), 4), h)
            assert act(c, S, twist_mul(c, a, b), kappa) == act(c, S, a, act(c, S, b, kappa))
            assert act(c, S, TwistElement(ONE, u), kappa) == kappa
            # S acts trivially, so the action factors through G/S
            q = pair_data(c, S).quotient.q[h]
            assert act_coset(c, S, q, kappa) == act(c, S, b, kappa)


def test_action_domain():
    c = heisenberg()
    S = subgroupoid(c.groupoid, [0, 1])
    kappa = enumerate_dual_fiber(c, S, 0).characters[0]
    moved = TwistedCharacter(5, kappa.members, kappa.values)
    with pytest.raises(FiberMismatch):
        canonical_coset(c, S, TwistElement(ONE, 0), moved)
    with pytest.raises(FiberMismatch):
        act(c, S, TwistElement(ONE, 0), moved)


def test_canonical_coset_is_constant_on_cosets(catalog):
    rng = random.Random(4)
    for e in sample(catalog, 40, 3):
        c, S = e.cocycle, e.S
        G = c.groupoid
        for kappa in pair_data(c, S).points:
            g = rng.choice([x for x in G.elements if G.source[x] == kappa.unit])
            base = TwistElement(RootOfUnity(rng.randrange(4), 4), g)
            ref = canonical_coset(c, S, base, kappa)
            for t in S.fiber(kappa.unit):
                tau = TwistElement(kappa.value(t).conj(), t)  # kappa(tau) = 1
                assert canonical_coset(c, S, twist_mul(c, base, tau), kappa) == ref

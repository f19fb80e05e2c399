"""A deterministic catalog of finite twisted pairs (c, S).

Every group of order <= 16 with cocycles over mu_M for M in {1, 2, 4},
plus group bundles, pair groupoids and action groupoids of at most 24
arrows.  Each cocycle is paired with every wide normal subgroupoid S on
which the twist is abelian.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cocycle import Cocycle, bicharacter_cocycle, cocycle_space, is_abelian_twist, random_cocycle
from .groupoid import FiniteGroupoid, Subgroupoid, wide_normal_subgroupoids
from .groups import (
    abelian,
    action_groupoid,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    disjoint_union,
    heisenberg_base,
    pair_groupoid,
    small_groups,
    symmetric,
)


@dataclass
class CatalogEntry:
    name: str  # groupoid name / cocycle tag / subgroupoid index
    cocycle: Cocycle
    S: Subgroupoid

    @property
    def groupoid(self) -> FiniteGroupoid:
        return self.cocycle.groupoid


def _perm_action(H):
    return lambda h, x: H.labels[h][x]


def groupoid_family() -> list[tuple[str, FiniteGroupoid]]:
    """Non-group groupoids with at most 24 arrows."""
    S3 = symmetric(3)
    sign = lambda h: sum(1 for i in range(3) for j in range(i + 1, 3) if S3.labels[h][i] > S3.labels[h][j]) % 2  # noqa: E731
    D4, Q8 = dihedral(4), dicyclic(2)
    return [
        ("C2+C3", disjoint_union(cyclic(2), cyclic(3))),
        ("C2xC2+C4", disjoint_union(abelian(2, 2), cyclic(4))),
        ("S3+C2", disjoint_union(S3, cyclic(2))),
        ("Q8+C1", disjoint_union(Q8, cyclic(1))),
        ("C2xC2+C2xC2", disjoint_union(abelian(2, 2), abelian(2, 2))),
        ("pair2", pair_groupoid(2)),
        ("pair3", pair_groupoid(3)),
        ("pair4", pair_groupoid(4)),
        ("pair2xC3", direct_product(pair_groupoid(2), cyclic(3))),
        ("pair3xC2", direct_product(pair_groupoid(3), cyclic(2))),
        ("pair2xC2xC2", direct_product(pair_groupoid(2), abelian(2, 2))),
        ("pair2xC4", direct_product(pair_groupoid(2), cyclic(4))),
        ("pair2xS3", direct_product(pair_groupoid(2), S3)),
        ("S3@3", action_groupoid(S3, range(3), _perm_action(S3))),
        ("S3@2sign", action_groupoid(S3, range(2), lambda h, x: (x + sign(h)) % 2)),
        ("C4@2parity", action_groupoid(cyclic(4), range(2), lambda h, x: (x + h) % 2)),
        ("C6@3", action_groupoid(cyclic(6), range(3), lambda h, x: (x + h) % 3)),
        ("D4@2", action_groupoid(D4, range(2), lambda h, x: (x + D4.labels[h][1]) % 2)),
        ("Q8@2", action_groupoid(Q8, range(2), lambda h, x: (x + Q8.labels[h][1]) % 2)),
        ("C2xC2@2", action_groupoid(abelian(2, 2), range(2), lambda h, x: (x + h) % 2)),
    ]


def cocycles_for(G: FiniteGroupoid, rng: random.Random, moduli=(1, 2, 4)) -> list[tuple[str, Cocycle]]:
    out = []
    for M in moduli:
        if M == 1:
            out.append(("M1", Cocycle.trivial(G)))
            continue
        space = cocycle_space(G, M)
        out.append((f"M{M}", random_cocycle(G, M, rng, space)))
    return out


def extra_instances() -> list[tuple[str, Cocycle]]:
    """Hand-picked twisted cocycles with nontrivial classes."""
    H = heisenberg_base()
    heis = bicharacter_cocycle(H, 2, lambda x, y: x[0] * y[1])
    C44 = abelian(4, 4)
    c44 = bicharacter_cocycle(C44, 4, lambda x, y: x[0] * y[1])
    C222 = abelian(2, 2, 2)
    c222 = bicharacter_cocycle(C222, 2, lambda x, y: x[0] * y[1] + x[1] * y[2])
    return [("heisenberg/bichar", heis), ("C4xC4/bichar", c44), ("C2^3/bichar", c222)]


def catalog(seed: int = 0, moduli=(1, 2, 4), groups=True, groupoids=True, extras=True):
    """Yield CatalogEntry objects in a fixed order."""
    rng = random.Random(seed)
    sources = []
    if groups:
        sources += small_groups(16)
    if groupoids:
        sources += groupoid_family()
    pairs = []
    for name, G in sources:
        for tag, c in cocycles_for(G, rng, moduli):
            pairs.append((f"{name}/{tag}", c))
    if extras:
        pairs += extra_instances()
    for name, c in pairs:
        for i, S in enumerate(wide_normal_subgroupoids(c.groupoid)):
            if is_abelian_twist(c, S):
                yield CatalogEntry(f"{name}/S{i}", c, S)


def catalog_list(**kwargs) -> list[CatalogEntry]:
    return list(catalog(**kwargs))

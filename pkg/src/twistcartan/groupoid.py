"""Finite groupoids as validated composition tables.

Composition convention: the product gh is defined exactly when
source(g) == range(h).  Elements are dense integer ids and the units are
the prefix 0 .. n_units-1, which makes "minimum id" a canonical choice of
coset representative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    BadInverse,
    BadUnit,
    DomainMismatch,
    NonAssociative,
    NotComposable,
    NotNormal,
    NotSubgroupoid,
)


class FiniteGroupoid:
    """Immutable validated groupoid. Build through validate_groupoid."""

    def __init__(self, n_units, range_map, source_map, inverse_map, table, labels=None):
        self.n_units = n_units
        self.range = tuple(range_map)
        self.source = tuple(source_map)
        self.inverse = tuple(inverse_map)
        self.table = tuple(tuple(row) for row in table)  # -1 where undefined
        self.size = len(self.range)
        self.labels = tuple(labels) if labels is not None else tuple(range(self.size))

    @property
    def elements(self):
        return range(self.size)

    @property
    def units(self):
        return range(self.n_units)

    def is_unit(self, g: int) -> bool:
        return g < self.n_units

    def composable(self, g: int, h: int) -> bool:
        return self.source[g] == self.range[h]

    def compose(self, g: int, h: int) -> int:
        gh = self.table[g][h]
        if gh < 0:
            raise NotComposable(f"source({g}) != range({h})")
        return gh

    def inv(self, g: int) -> int:
        return self.inverse[g]

    @cached_property
    def isotropy_fibers(self) -> tuple[tuple[int, ...], ...]:
        fib = [[] for _ in self.units]
        for g in self.elements:
            if self.range[g] == self.source[g]:
                fib[self.range[g]].append(g)
        return tuple(tuple(f) for f in fib)

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        seen, out = set(), []
        for u in self.units:
            if u in seen:
                continue
            orb = sorted({self.range[g] for g in self.elements if self.source[g] == u})
            seen.update(orb)
            out.append(tuple(orb))
        return tuple(out)

    def arrow(self, v: int, u: int) -> int | None:
        """Some arrow with source u and range v (smallest id), or None."""
        for g in self.elements:
            if self.source[g] == u and self.range[g] == v:
                return g
        return None

    def label(self, g: int) -> str:
        return str(self.labels[g])

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            self.n_units == other.n_units
            and self.range == other.range
            and self.source == other.source
            and self.inverse == other.inverse
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.n_units, self.range, self.source, self.table))

    def __repr__(self):
        return f"FiniteGroupoid(size={self.size}, units={self.n_units})"


def validate_groupoid(elements, units, range_map, source_map, compose_map, inverse_map, check_assoc=True):
    """Validate raw tables and return a FiniteGroupoid with units first.

    `elements` is a sequence of hashable labels; the maps are dicts keyed by
    labels (compose_map by label pairs).  Errors name the first violated
    axiom: DomainMismatch, BadUnit, BadInverse, NonAssociative.
    """
    elements = list(elements)
    if not elements:
        raise DomainMismatch("empty groupoid")
    if len(set(elements)) != len(elements):
        raise DomainMismatch("duplicate element labels")
    units = list(units)
    known = set(elements)
    for u in units:
        if u not in known:
            raise DomainMismatch(f"unit {u!r} is not an element", u)
    if len(set(units)) != len(units):
        raise DomainMismatch("duplicate units")
    unit_set = set(units)
    order = units + [g for g in elements if g not in unit_set]
    idx = {g: i for i, g in enumerate(order)}
    n = len(order)

    def look(m, g, what):
        try:
            v = m[g]
        except KeyError:
            raise DomainMismatch(f"{what} of {g!r} missing", g) from None
        if v not in idx:
            raise DomainMismatch(f"{what} of {g!r} is unknown element {v!r}", g)
        return idx[v]

    rng = [look(range_map, g, "range") for g in order]
    src = [look(source_map, g, "source") for g in order]
    for i, g in enumerate(order):
        if rng[i] >= len(units) or src[i] >= len(units):
            raise DomainMismatch(f"range/source of {g!r} is not a unit", g)
    for i in range(len(units)):
        if rng[i] != i or src[i] != i:
            raise DomainMismatch(f"unit {order[i]!r} must be its own range and source", order[i])

    table = np.full((n, n), -1, dtype=np.int64)
    for (g, h), gh in compose_map.items():
        if g not in idx or h not in idx or gh not in idx:
            raise DomainMismatch(f"composition ({g!r},{h!r}) uses unknown elements", (g, h))
        i, j = idx[g], idx[h]
        if src[i] != rng[j]:
            raise DomainMismatch(f"composition ({g!r},{h!r}) defined but source != range", (g, h))
        table[i, j] = idx[gh]
    for i in range(n):
        for j in range(n):
            if src[i] == rng[j]:
                k = table[i, j]
                if k < 0:
                    raise DomainMismatch(f"composition ({order[i]!r},{order[j]!r}) missing", (order[i], order[j]))
                if rng[k] != rng[i] or src[k] != src[j]:
                    raise DomainMismatch(f"range/source of ({order[i]!r},{order[j]!r}) wrong", (order[i], order[j]))

    for i in range(n):
        if table[rng[i], i] != i or table[i, src[i]] != i:
            raise BadUnit(f"units do not act as identities on {order[i]!r}", order[i])

    inv = [look(inverse_map, g, "inverse") for g in order]
    for i in range(n):
        j = inv[i]
        if rng[j] != src[i] or src[j] != rng[i] or inv[j] != i:
            raise BadInverse(f"inverse of {order[i]!r} is not an involution swapping range and source", order[i])
        if table[i, j] != rng[i] or table[j, i] != src[i]:
            raise BadInverse(f"{order[i]!r} times its inverse is not a unit", order[i])

    if check_assoc:
        _check_associative(table, order)

    return FiniteGroupoid(len(units), rng, src, inv, table.tolist(), order)


def _check_associative(table, order):
    n = table.shape[0]
    for g in range(n):
        hs = np.nonzero(table[g] >= 0)[0]
        gh = table[g, hs]
        left = table[gh, :]  # (gh)k
        hk = table[hs, :]
        mask = hk >= 0
        right = np.where(mask, table[g, np.where(mask, hk, 0)], -1)
        bad = np.nonzero(mask & (left != right))
        if bad[0].size:
            h, k = hs[bad[0][0]], bad[1][0]
            raise NonAssociative(f"({order[g]!r}{order[h]!r}){order[k]!r} != {order[g]!r}({order[h]!r}{order[k]!r})", (order[g], order[h], order[k]))


def groupoid_from_table(n_units, range_map, source_map, inverse_map, table, labels=None, check_assoc=True):
    """Validate tables already indexed by dense ids (units first)."""
    n = len(range_map)
    elems = list(range(n))
    comp = {}
    for g in range(n):
        row = table[g]
        for h in range(n):
            if row[h] >= 0:
                comp[(g, h)] = row[h]
    G = validate_groupoid(
        elems,
        range(n_units),
        dict(enumerate(range_map)),
        dict(enumerate(source_map)),
        comp,
        dict(enumerate(inverse_map)),
        check_assoc=check_assoc,
    )
    if labels is not None:
        G.labels = tuple(labels)
    return G


@dataclass(frozen=True)
class Subgroupoid:
    parent: FiniteGroupoid
    members: frozenset = field(default_factory=frozenset)

    def __contains__(self, g):
        return g in self.members

    def fiber(self, u: int) -> tuple[int, ...]:
        return self._fibers[u]

    @cached_property
    def _fibers(self):
        G = self.parent
        fib = [[] for _ in G.units]
        for g in sorted(self.members):
            if G.range[g] == G.source[g]:
                fib[G.range[g]].append(g)
        return tuple(tuple(f) for f in fib)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        if not isinstance(other, Subgroupoid):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"Subgroupoid({sorted(self.members)})"


def subgroupoid(G: FiniteGroupoid, members) -> Subgroupoid:
    """Check closure under composition and inversion."""
    mem = frozenset(members)
    for g in mem:
        if not 0 <= g < G.size:
            raise NotSubgroupoid(f"{g} is not an element")
        if G.inverse[g] not in mem:
            raise NotSubgroupoid(f"inverse of {g} missing")
        for h in mem:
            gh = G.table[g][h]
            if gh >= 0 and gh not in mem:
                raise NotSubgroupoid(f"product of {g} and {h} missing")
    return Subgroupoid(G, mem)


def units_subgroupoid(G: FiniteGroupoid) -> Subgroupoid:
    return Subgroupoid(G, frozenset(G.units))


def isotropy(G: FiniteGroupoid) -> Subgroupoid:
    return Subgroupoid(G, frozenset(g for g in G.elements if G.range[g] == G.source[g]))


@dataclass(frozen=True)
class WideNormalReport:
    wide: bool
    in_isotropy: bool
    normal: bool


def _conjugation_ok(G, S) -> bool:
    for g in G.elements:
        gi = G.inverse[g]
        image = {G.table[G.table[g][s]][gi] for s in S.fiber(G.source[g])}
        if image != set(S.fiber(G.range[g])):
            return False
    return True


def is_wide_normal(G: FiniteGroupoid, S: Subgroupoid) -> WideNormalReport:
    wide = all(u in S.members for u in G.units)
    in_iso = all(G.range[s] == G.source[s] for s in S.members)
    normal = in_iso and _conjugation_ok(G, S)
    return WideNormalReport(wide, in_iso, normal)


def is_principal(G: FiniteGroupoid) -> bool:
    return all(G.range[g] != G.source[g] for g in range(G.n_units, G.size))


def is_effective_finite(G: FiniteGroupoid) -> bool:
    """Effective means the interior of the isotropy is the unit space.

    For a finite discrete groupoid every set is open, so the interior is the
    isotropy itself and this coincides with is_principal.
    """
    return is_principal(G)


@dataclass(frozen=True)
class Quotient:
    groupoid: FiniteGroupoid
    q: tuple[int, ...]  # element of G -> coset id
    reps: tuple[int, ...]  # coset id -> minimal element id
    cosets: tuple[frozenset, ...]

    def __call__(self, g: int) -> int:
        return self.q[g]


def coset(G: FiniteGroupoid, S: Subgroupoid, g: int) -> frozenset:
    return frozenset(G.table[g][s] for s in S.fiber(G.source[g]))


def quotient(G: FiniteGroupoid, S: Subgroupoid) -> Quotient:
    """G/S with cosets gS ordered by their minimal element."""
    rep = is_wide_normal(G, S)
    if not (rep.wide and rep.normal):
        raise NotNormal("quotient needs a wide normal subgroupoid")
    cos = {}
    for g in G.elements:
        c = coset(G, S, g)
        cos.setdefault(min(c), c)
    reps = sorted(cos)
    cid = {r: i for i, r in enumerate(reps)}
    q = [0] * G.size
    for r in reps:
        for g in cos[r]:
            q[g] = cid[r]
    k = len(reps)
    rng = [q[G.range[r]] for r in reps]
    src = [q[G.source[r]] for r in reps]
    inv = [q[G.inverse[r]] for r in reps]
    table = [[-1] * k for _ in range(k)]
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            if G.source[a] == G.range[b]:
                table[i][j] = q[G.table[a][b]]
    # well-definedness: every pair of representatives maps consistently
    for g in G.elements:
        for h in G.elements:
            gh = G.table[g][h]
            if gh >= 0 and table[q[g]][q[h]] != q[gh]:
                raise NotNormal("coset multiplication is not well defined")
    n_units = G.n_units
    assert all(q[u] == u for u in G.units)
    Q = FiniteGroupoid(n_units, rng, src, inv, table, [G.labels[r] for r in reps])
    return Quotient(Q, tuple(q), tuple(reps), tuple(cos[r] for r in reps))


def is_homomorphism(G: FiniteGroupoid, H: FiniteGroupoid, f) -> bool:
    return all(
        H.table[f[g]][f[h]] == f[G.table[g][h]]
        for g in G.elements
        for h in G.elements
        if G.table[g][h] >= 0
    )


# subgroup lattices of isotropy groups

def generated_subgroup(G: FiniteGroupoid, u: int, gens) -> frozenset:
    """The subgroup of the isotropy group G(u) generated by gens."""
    out = {u}
    frontier = [u]
    gens = [g for g in gens if g != u]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.table[x][g]
            if y not in out:
                out.add(y)
                frontier.append(y)
    return frozenset(out)


def subgroups(G: FiniteGroupoid, u: int) -> list[frozenset]:
    """All subgroups of G(u), by joining cyclic subgroups until closed."""
    fib = G.isotropy_fibers[u]
    cyclic = {generated_subgroup(G, u, [g]) for g in fib}
    found = {frozenset([u])}
    frontier = list(found)
    while frontier:
        H = frontier.pop()
        for C in cyclic:
            if C <= H:
                continue
            J = generated_subgroup(G, u, H | C)
            if J not in found:
                found.add(J)
                frontier.append(J)
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def wide_normal_subgroupoids(G: FiniteGroupoid) -> list[Subgroupoid]:
    """Every wide normal subgroupoid of G.

    A normal subgroupoid is determined by one normal subgroup of G(u) per
    orbit, transported along arrows to the rest of the orbit.
    """
    choices = []
    for orbit in G.orbits:
        u = orbit[0]
        fib = G.isotropy_fibers[u]
        per_orbit = []
        for H in subgroups(G, u):
            if all(G.table[G.table[g][h]][G.inverse[g]] in H for g in fib for h in H):
                members = set()
                for v in orbit:
                    a = G.arrow(v, u)
                    ai = G.inverse[a]
                    members |= {G.table[G.table[a][h]][ai] for h in H}
                per_orbit.append(members)
        choices.append(per_orbit)
    out = []
    for combo in itertools.product(*choices):
        out.append(Subgroupoid(G, frozenset().union(*combo)))
    return out

"""2-cocycles with values in roots of unity and the twist they induce.

A twist element (z; g) has phase z and base g.  Products follow
(z;g)(w;h) = (zw c(g,h); gh).  Internally phases are integers modulo the
cocycle modulus M; the public functions speak RootOfUnity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import (
    FiberMismatch,
    InvalidCocycle,
    NotCoboundary,
    NotComposable,
    NotHomomorphic,
)
from .groupoid import FiniteGroupoid, Subgroupoid, validate_groupoid
from .intlin import kernel_mod_prime_power
from .roots import ONE, RootOfUnity, nth_roots


class Cocycle:
    """Normalized 2-cocycle c: G^(2) -> mu_M stored as exponents mod M."""

    def __init__(self, groupoid: FiniteGroupoid, modulus: int, table=None, validate=True):
        self.groupoid = G = groupoid
        self.modulus = M = int(modulus)
        if M < 1:
            raise InvalidCocycle("modulus must be positive")
        t = [[0] * G.size for _ in G.elements]
        if table is not None:
            items = table.items() if isinstance(table, dict) else (
                ((g, h), table[g][h]) for g in G.elements for h in G.elements
            )
            for (g, h), e in items:
                if G.table[g][h] < 0:
                    if e % M:
                        raise InvalidCocycle(f"value given on non-composable pair ({g},{h})")
                    continue
                t[g][h] = e % M
        self.exp = t
        if validate:
            check_cocycle(self)

    @classmethod
    def trivial(cls, G: FiniteGroupoid) -> Cocycle:
        return cls(G, 1, validate=False)

    @classmethod
    def from_function(cls, G, modulus, f, validate=True) -> Cocycle:
        """f(g, h) returns an exponent mod `modulus`."""
        table = {(g, h): f(g, h) for g in G.elements for h in G.elements if G.table[g][h] >= 0}
        return cls(G, modulus, table, validate)

    def __call__(self, g: int, h: int) -> RootOfUnity:
        if self.groupoid.table[g][h] < 0:
            raise NotComposable(f"({g},{h}) is not composable")
        return RootOfUnity(self.exp[g][h], self.modulus)

    def is_trivial(self) -> bool:
        return not any(any(row) for row in self.exp)

    def triples(self):
        """Nonzero entries as (g, h, exponent)."""
        G = self.groupoid
        return [(g, h, self.exp[g][h]) for g in G.elements for h in G.elements if self.exp[g][h]]

    def __eq__(self, other):
        if not isinstance(other, Cocycle):
            return NotImplemented
        if self.groupoid != other.groupoid:
            return False
        m = lcm(self.modulus, other.modulus)
        a, b = m // self.modulus, m // other.modulus
        return all(
            (x * a - y * b) % m == 0
            for r1, r2 in zip(self.exp, other.exp)
            for x, y in zip(r1, r2)
        )

    __hash__ = object.__hash__

    def __repr__(self):
        return f"Cocycle(M={self.modulus}, nonzero={len(self.triples())})"


def check_cocycle(c: Cocycle) -> None:
    """Normalization and the cocycle identity on every composable triple."""
    G, t, M = c.groupoid, c.exp, c.modulus
    for g in G.elements:
        if t[g][G.source[g]] or t[G.range[g]][g]:
            raise InvalidCocycle(f"not normalized at {g}")
    T = np.array(G.table, dtype=np.int64)
    E = np.array(t, dtype=np.int64)
    # c(g,h) + c(gh,k) = c(g,hk) + c(h,k), one g at a time
    for g in G.elements:
        hs = np.nonzero(T[g] >= 0)[0]
        gh = T[g, hs]
        hk = T[hs, :]
        mask = hk >= 0
        lhs = E[g, hs][:, None] + E[gh, :]
        rhs = E[g, np.where(mask, hk, 0)] + E[hs, :]
        bad = np.nonzero(mask & ((lhs - rhs) % M != 0))
        if bad[0].size:
            h, k = int(hs[bad[0][0]]), int(bad[1][0])
            raise InvalidCocycle(f"cocycle identity fails at ({g},{h},{k})")


@dataclass(frozen=True)
class TwistElement:
    phase: RootOfUnity
    base: int

    def __str__(self):
        return f"({self.phase};{self.base})"


def lift(g: int, phase: RootOfUnity = ONE) -> TwistElement:
    return TwistElement(phase, g)


def twist_mul(c: Cocycle, a: TwistElement, b: TwistElement) -> TwistElement:
    G = c.groupoid
    gh = G.table[a.base][b.base]
    if gh < 0:
        raise NotComposable(f"source({a.base}) != range({b.base})")
    return TwistElement(a.phase * b.phase * RootOfUnity(c.exp[a.base][b.base], c.modulus), gh)


def twist_inv(c: Cocycle, a: TwistElement) -> TwistElement:
    g = a.base
    gi = c.groupoid.inverse[g]
    return TwistElement((a.phase * RootOfUnity(c.exp[g][gi], c.modulus)).conj(), gi)


# integer-phase fast paths: elements are (phase exponent mod M, base)

def _mul(c, a, b):
    gh = c.groupoid.table[a[1]][b[1]]
    if gh < 0:
        raise NotComposable(f"source({a[1]}) != range({b[1]})")
    return ((a[0] + b[0] + c.exp[a[1]][b[1]]) % c.modulus, gh)


def _inv(c, a):
    g = a[1]
    gi = c.groupoid.inverse[g]
    return ((-a[0] - c.exp[g][gi]) % c.modulus, gi)


def _commutator(c, e, s):
    # [e, s] = e^-1 s^-1 e s
    return _mul(c, _mul(c, _mul(c, _inv(c, e), _inv(c, s)), e), s)


def restrict(c: Cocycle, S: Subgroupoid):
    """The cocycle on S as a groupoid in its own right.

    Returns (cocycle, embedding) where embedding[i] is the element of the
    parent that element i of the new groupoid corresponds to.
    """
    G = c.groupoid
    mem = sorted(S.members)
    units = [g for g in mem if G.is_unit(g)]
    H = validate_groupoid(
        mem,
        units,
        {g: G.range[g] for g in mem},
        {g: G.source[g] for g in mem},
        {(g, h): G.table[g][h] for g in mem for h in mem if G.table[g][h] >= 0},
        {g: G.inverse[g] for g in mem},
    )
    emb = tuple(H.labels)
    H.labels = tuple(G.labels[g] for g in emb)
    table = {(i, j): c.exp[emb[i]][emb[j]] for i in H.elements for j in H.elements if H.table[i][j] >= 0}
    return Cocycle(H, c.modulus, table), emb


def is_abelian_twist(c: Cocycle, S: Subgroupoid) -> bool:
    """E_S is abelian: S inside the isotropy, each fiber abelian, c symmetric there."""
    G = c.groupoid
    if any(G.range[s] != G.source[s] for s in S.members):
        return False
    for u in G.units:
        fib = S.fiber(u)
        for i, s in enumerate(fib):
            for t in fib[i + 1 :]:
                if G.table[s][t] != G.table[t][s] or c.exp[s][t] != c.exp[t][s]:
                    return False
    return True


def commutator(c: Cocycle, e: TwistElement, sigma: TwistElement) -> TwistElement:
    G = c.groupoid
    u = G.range[e.base]
    if G.source[e.base] != u or G.range[sigma.base] != u or G.source[sigma.base] != u:
        raise FiberMismatch("commutator needs two isotropy elements over the same unit")
    return twist_mul(c, twist_mul(c, twist_mul(c, twist_inv(c, e), twist_inv(c, sigma)), e), sigma)


def commutator_exponents(c: Cocycle, g: int, S: Subgroupoid) -> frozenset:
    """{[(1;g), (1;s)] : s in S(u)} as (phase exponent mod M, base) pairs."""
    G = c.groupoid
    u = G.range[g]
    if G.source[g] != u:
        raise FiberMismatch(f"{g} is not an isotropy element")
    e = (0, g)
    return frozenset(_commutator(c, e, (0, s)) for s in S.fiber(u))


def commutator_set(c: Cocycle, e: TwistElement, S: Subgroupoid) -> frozenset:
    """[e, E_S] with one phase lift per s in S(u); phases of e cancel."""
    G = c.groupoid
    if G.source[e.base] != G.range[e.base]:
        raise FiberMismatch(f"{e.base} is not an isotropy element")
    return frozenset(
        TwistElement(RootOfUnity(z, c.modulus), b) for z, b in commutator_exponents(c, e.base, S)
    )


# finite abelian groups inside an isotropy fiber

def _power(G, g, k):
    x = G.range[g]
    for _ in range(k):
        x = G.table[x][g]
    return x


def element_order(G: FiniteGroupoid, g: int) -> int:
    u, x, k = G.range[g], g, 1
    while x != u:
        x = G.table[x][g]
        k += 1
    return k


def _span(G, gens, ident):
    out = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.table[x][g]
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def abelian_decomposition(G: FiniteGroupoid, A):
    """Basis (g_1..g_k) of a finite abelian group A with A = <g_1> x ... x <g_k>.

    Returns (basis, orders, coords) with coords[a] the exponent vector of a.
    Found by backtracking over elements in decreasing order; each step adds
    a cyclic subgroup meeting the current span trivially.
    """
    A = sorted(A)
    ident = G.range[A[0]]
    order = {a: element_order(G, a) for a in A}
    cand = sorted((a for a in A if a != ident), key=lambda a: (-order[a], a))

    def search(basis, span):
        if len(span) == len(A):
            return basis
        for a in cand:
            cyc = _span(G, [a], ident)
            if cyc & span != {ident}:
                continue
            if basis and order[a] > order[basis[-1]]:
                continue
            new = _span(G, basis + [a], ident)
            if len(new) != len(span) * order[a]:
                continue
            res = search(basis + [a], new)
            if res is not None:
                return res
        return None

    basis = search([], {ident})
    if basis is None:
        raise ValueError("not an abelian group")
    orders = [order[b] for b in basis]
    coords = {ident: tuple(0 for _ in basis)}
    for i, b in enumerate(basis):
        for x, v in list(coords.items()):
            y = x
            for k in range(1, orders[i]):
                y = G.table[y][b]
                w = list(v)
                w[i] = k
                coords[y] = tuple(w)
    if len(coords) != len(A):
        raise ValueError("decomposition failed")
    return basis, orders, coords


def group_exponent(orders) -> int:
    e = 1
    for n in orders:
        e = lcm(e, n)
    return e


def _is_abelian_fiber(c, A):
    G = c.groupoid
    return all(G.table[s][t] == G.table[t][s] for s in A for t in A)


def solve_coboundary(c: Cocycle, A) -> dict:
    """d: A -> roots of unity with c(s,t) = d(s) d(t) d(st)^-1 on A.

    A is a finite abelian group inside one isotropy fiber and c must be
    symmetric on it.  Values on a basis are the smallest-turn roots of the
    forced power relation; everything else follows along canonical words.
    """
    G = c.groupoid
    A = sorted(A)
    if not _is_abelian_fiber(c, A):
        raise NotCoboundary("group is not abelian")
    for s in A:
        for t in A:
            if c.exp[s][t] != c.exp[t][s]:
                raise NotCoboundary(f"cocycle not symmetric at ({s},{t})")
    basis, orders, coords = abelian_decomposition(G, A)
    ident = G.range[A[0]]
    cc = lambda s, t: RootOfUnity(c.exp[s][t], c.modulus)  # noqa: E731
    d = {ident: ONE}
    for b, n in zip(basis, orders):
        # d(b)^n = prod_{j=1}^{n-1} c(b^j, b)
        rhs, x = ONE, b
        for _ in range(1, n):
            rhs = rhs * cc(x, b)
            x = G.table[x][b]
        z = nth_roots(rhs, n)[0]
        powers = {ident: ONE}
        x, dx = ident, ONE
        for _ in range(1, n):
            dx = dx * z * cc(x, b).conj()
            x = G.table[x][b]
            powers[x] = dx
        for x, dx0 in list(d.items()):
            for y, dy in powers.items():
                if y != ident:
                    d[G.table[x][y]] = dx0 * dy * cc(x, y).conj()
    bound = c.modulus * group_exponent(orders)
    for s in A:
        if bound % d[s].modulus:
            raise NotCoboundary("modulus bound exceeded; report this instance")
        for t in A:
            if cc(s, t) * d[G.table[s][t]] != d[s] * d[t]:
                raise NotCoboundary(f"coboundary check failed at ({s},{t})")
    return d


def extend_character(G: FiniteGroupoid, A, H, rho: dict) -> dict:
    """Extend a homomorphism rho: H -> T to all of the finite abelian group A.

    Adjoins the smallest missing element s with the least m such that
    s^m lies in the current subgroup, sending s to the smallest-turn m-th
    root of rho(s^m).
    """
    A = sorted(A)
    H = set(H)
    for h in H:
        for k in H:
            hk = G.table[h][k]
            if hk not in H:
                raise NotHomomorphic("H is not closed")
            if rho[h] * rho[k] != rho[hk]:
                raise NotHomomorphic(f"rho not multiplicative at ({h},{k})")
    ident = G.range[A[0]]
    if ident not in H or not rho[ident].is_one():
        raise NotHomomorphic("rho must send the identity to 1")
    cur = dict((h, rho[h]) for h in H)
    while len(cur) < len(A):
        s = next(a for a in A if a not in cur)
        m, x = 1, s
        while x not in cur:
            x = G.table[x][s]
            m += 1
        z0 = nth_roots(cur[x], m)[0]
        new = dict(cur)
        for h, v in cur.items():
            y, zk = h, v
            for _ in range(1, m):
                y = G.table[y][s]
                zk = zk * z0
                new[y] = zk
        cur = new
    for a in A:
        for b in A:
            if cur[a] * cur[b] != cur[G.table[a][b]]:
                raise AssertionError("extension is not multiplicative")
    return cur


def dual_group(G: FiniteGroupoid, A) -> list[dict]:
    """All characters A -> T, as dicts, ordered by their parameter vector."""
    basis, orders, coords = abelian_decomposition(G, A)
    out = []

    def rec(i, params):
        if i == len(orders):
            out.append(
                {
                    a: RootOfUnity.from_turn(sum(Fraction(p * k, n) for p, k, n in zip(params, v, orders)))
                    for a, v in coords.items()
                }
            )
            return
        for p in range(orders[i]):
            rec(i + 1, params + [p])

    rec(0, [])
    return out


# cocycle spaces, used to generate test catalogs

def _composable_nonunit_pairs(G):
    return [
        (g, h)
        for g in range(G.n_units, G.size)
        for h in range(G.n_units, G.size)
        if G.table[g][h] >= 0
    ]


def cocycle_space(G: FiniteGroupoid, modulus: int):
    """Generators of the normalized cocycles G^(2) -> Z/M, M a prime power.

    Returns (pairs, generators): each generator is an exponent vector aligned
    with `pairs`, the composable pairs of non-unit elements.
    """
    p, k = _prime_power(modulus)
    pairs = _composable_nonunit_pairs(G)
    if modulus == 1 or not pairs:
        return pairs, []
    col = {pr: i for i, pr in enumerate(pairs)}
    rows = set()
    T = G.table
    for g, h in pairs:
        gh = T[g][h]
        for k2 in range(G.n_units, G.size):
            hk = T[h][k2]
            if hk < 0:
                continue
            row = {}
            for sign, key in ((1, (g, h)), (1, (gh, k2)), (-1, (g, hk)), (-1, (h, k2))):
                j = col.get(key)
                if j is not None:
                    row[j] = row.get(j, 0) + sign
            row = tuple(sorted((j, v % modulus) for j, v in row.items() if v % modulus))
            if row:
                rows.add(row)
    dense = [[0] * len(pairs) for _ in rows]
    for r, row in zip(dense, sorted(rows)):
        for j, v in row:
            r[j] = v
    if not dense:
        dense = [[0] * len(pairs)]
    return pairs, kernel_mod_prime_power(dense, p, k)


def _prime_power(M):
    if M == 1:
        return 2, 0
    for p in range(2, M + 1):
        if M % p == 0:
            k = 0
            while M % p == 0:
                M //= p
                k += 1
            if M != 1:
                raise ValueError("modulus must be a prime power")
            return p, k
    raise ValueError(M)


def random_cocycle(G: FiniteGroupoid, modulus: int, rng: random.Random, space=None) -> Cocycle:
    pairs, gens = space if space is not None else cocycle_space(G, modulus)
    vec = [0] * len(pairs)
    for gen in gens:
        a = rng.randrange(modulus)
        if a:
            vec = [(x + a * y) % modulus for x, y in zip(vec, gen)]
    return Cocycle(G, modulus, dict(zip(pairs, vec)))


def coboundary_of(G: FiniteGroupoid, modulus: int, d) -> Cocycle:
    """c(g,h) = d(g) d(h) d(gh)^-1 for exponents d on non-units (0 on units)."""
    dd = [0 if G.is_unit(g) else d[g] % modulus for g in G.elements]
    return Cocycle.from_function(G, modulus, lambda g, h: dd[g] + dd[h] - dd[G.table[g][h]])


def bicharacter_cocycle(G: FiniteGroupoid, modulus: int, form) -> Cocycle:
    """Cocycle from a bilinear exponent form on a product of cyclic groups."""
    return Cocycle.from_function(G, modulus, lambda g, h: form(G.labels[g], G.labels[h]))

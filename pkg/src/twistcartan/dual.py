"""The twisted Pontryagin dual of E_S and the actions on it.

A twisted character kappa at the unit u is stored by its values on the
section (1;s), s in S(u).  Equivariance kappa(z.e) = z kappa(e) holds by
construction, and the stored values satisfy the projective relation
values(s) values(t) = c(s,t) values(st).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm

from .cocycle import (
    Cocycle,
    TwistElement,
    _inv,
    _mul,
    abelian_decomposition,
    commutator_exponents,
    dual_group,
    group_exponent,
    is_abelian_twist,
    solve_coboundary,
)
from .errors import FiberMismatch, NotAbelian
from .groupoid import Subgroupoid, quotient
from .roots import ONE, Cyclotomic, RootOfUnity


@dataclass(frozen=True)
class TwistedCharacter:
    unit: int
    members: tuple  # sorted S(u)
    values: tuple  # RootOfUnity per member

    @cached_property
    def _lookup(self):
        return dict(zip(self.members, self.values))

    def value(self, s: int) -> RootOfUnity:
        return self._lookup[s]

    def __call__(self, e: TwistElement) -> RootOfUnity:
        return e.phase * self._lookup[e.base]

    @property
    def modulus(self) -> int:
        m = 1
        for v in self.values:
            m = lcm(m, v.modulus)
        return m

    def exponents(self, modulus=None):
        m = modulus or self.modulus
        return [v.lift(m) for v in self.values]

    def kills(self, phase_base_pairs, modulus) -> bool:
        """kappa((z;s)) == 1 for every (exponent of z mod modulus, s)."""
        return all((RootOfUnity(z, modulus) * self._lookup[s]).is_one() for z, s in phase_base_pairs)

    def __str__(self):
        return f"kappa@{self.unit}[" + ", ".join(f"{s}:{v}" for s, v in zip(self.members, self.values)) + "]"


@dataclass(frozen=True)
class DualFiber:
    unit: int
    characters: tuple

    def __len__(self):
        return len(self.characters)

    def index(self, kappa: TwistedCharacter) -> int:
        return self.characters.index(kappa)


def _fiber_is_abelian(c, S, u):
    G = c.groupoid
    fib = S.fiber(u)
    return all(G.table[s][t] == G.table[t][s] and c.exp[s][t] == c.exp[t][s] for s in fib for t in fib)


def enumerate_dual_fiber(c: Cocycle, S: Subgroupoid, u: int) -> DualFiber:
    """All twisted characters at u: kappa(1;s) = d(s) chi(s), chi in the dual of S(u)."""
    fib = S.fiber(u)
    if not fib:
        raise NotAbelian(f"S has no elements over unit {u}")
    if not _fiber_is_abelian(c, S, u):
        raise NotAbelian(f"E_S is not abelian over unit {u}")
    G = c.groupoid
    d = solve_coboundary(c, fib)
    chars = []
    for chi in dual_group(G, fib):
        chars.append(TwistedCharacter(u, fib, tuple(d[s] * chi[s] for s in fib)))
    chars.sort(key=lambda k: tuple(v.turn for v in k.values))
    if len(set(chars)) != len(fib):
        raise AssertionError("dual fiber has the wrong size")
    return DualFiber(u, tuple(chars))


def is_twisted_character(c: Cocycle, kappa: TwistedCharacter) -> bool:
    G = c.groupoid
    for s, vs in zip(kappa.members, kappa.values):
        for t, vt in zip(kappa.members, kappa.values):
            if vs * vt != RootOfUnity(c.exp[s][t], c.modulus) * kappa.value(G.table[s][t]):
                return False
    return True


def raw_dual_search(c: Cocycle, S: Subgroupoid, u: int, modulus=None) -> list[TwistedCharacter]:
    """Brute-force oracle: every map S(u) -> mu_N with the projective relation.

    N defaults to M * exp(S(u)).  Backtracks over the elements in id order,
    checking each relation as soon as all three of its elements have values.
    """
    G = c.groupoid
    fib = S.fiber(u)
    if modulus is None:
        _, orders, _ = abelian_decomposition(G, fib)
        modulus = c.modulus * group_exponent(orders)
    N = modulus
    scale = N // c.modulus
    pos = {s: i for i, s in enumerate(fib)}
    checks = [[] for _ in fib]  # relations completed when element i is assigned
    for s in fib:
        for t in fib:
            st = G.table[s][t]
            last = max(pos[s], pos[t], pos[st])
            checks[last].append((pos[s], pos[t], pos[st], c.exp[s][t] * scale))
    vals = [0] * len(fib)
    out = []

    def rec(i):
        if i == len(fib):
            out.append(TwistedCharacter(u, fib, tuple(RootOfUnity(v, N) for v in vals)))
            return
        for v in range(N):
            vals[i] = v
            if all((vals[a] + vals[b] - vals[ab] - w) % N == 0 for a, b, ab, w in checks[i]):
                rec(i + 1)

    rec(0)
    out.sort(key=lambda k: tuple(v.turn for v in k.values))
    return out


def _conjugate_into(c, e, t):
    """e^-1 (1;t) e as an integer-phase pair (exponent mod M, base)."""
    return _mul(c, _mul(c, _inv(c, e), (0, t)), e)


def act(c: Cocycle, S: Subgroupoid, e: TwistElement, kappa: TwistedCharacter) -> TwistedCharacter:
    """(e . kappa)(tau) = kappa(e^-1 tau e), a character at r(e)."""
    G = c.groupoid
    g = e.base
    if G.source[g] != kappa.unit:
        raise FiberMismatch(f"source of {g} is not the unit of kappa")
    v = G.range[g]
    fib = S.fiber(v)
    M = c.modulus
    # the phase of e cancels in e^-1 tau e, so use the lift (1;g)
    vals = []
    for t in fib:
        z, s = _conjugate_into(c, (0, g), t)
        vals.append(RootOfUnity(z, M) * kappa.value(s))
    return TwistedCharacter(v, fib, tuple(vals))


class PairData:
    """Cached derived data of a pair (c, S): quotient, dual fibers, points."""

    def __init__(self, c: Cocycle, S: Subgroupoid):
        self.c = c
        self.S = S
        self.G = c.groupoid

    @cached_property
    def quotient(self):
        return quotient(self.G, self.S)

    @cached_property
    def duals(self) -> tuple:
        return tuple(enumerate_dual_fiber(self.c, self.S, u) for u in self.G.units)

    @cached_property
    def points(self) -> tuple:
        return tuple(k for D in self.duals for k in D.characters)

    @cached_property
    def point_index(self) -> dict:
        return {k: i for i, k in enumerate(self.points)}

    @cached_property
    def abelian(self) -> bool:
        return is_abelian_twist(self.c, self.S)

    @cached_property
    def modulus(self) -> int:
        m = self.c.modulus
        for k in self.points:
            m = lcm(m, k.modulus)
        return m

    def commutators(self, g):
        return commutator_exponents(self.c, g, self.S)


_CACHE: dict = {}


def pair_data(c: Cocycle, S: Subgroupoid) -> PairData:
    key = (id(c), S.members)
    hit = _CACHE.get(key)
    if hit is None or hit.c is not c:
        if len(_CACHE) > 256:
            _CACHE.clear()
        hit = _CACHE[key] = PairData(c, S)
    return hit


def act_coset(c: Cocycle, S: Subgroupoid, q: int, kappa: TwistedCharacter) -> TwistedCharacter:
    """Action of the coset with id q in G/S; checks representative independence."""
    Q = pair_data(c, S).quotient
    out = None
    for g in sorted(Q.cosets[q]):
        k = act(c, S, TwistElement(ONE, g), kappa)
        if out is None:
            out = k
        elif k != out:
            raise AssertionError("action depends on the coset representative")
    return out


def canonical_coset(c: Cocycle, S: Subgroupoid, e: TwistElement, kappa: TwistedCharacter):
    """Canonical representative of (e, kappa)K, K = {(sigma, kappa) : kappa(sigma) = 1}.

    The coset is {(conj(kappa(tau)) e tau, kappa) : tau in E_S(u)}; one
    element per base g s, s in S(u).  Returns (phase, base) of the element
    with the smallest base id; the bases g t are distinct, so no tie on the
    base can occur and the phase never decides.
    """
    G = c.groupoid
    g = e.base
    u = G.source[g]
    if u != kappa.unit:
        raise FiberMismatch("source of e is not the unit of kappa")
    best = None
    M = c.modulus
    for t in S.fiber(u):
        base = G.table[g][t]
        phase = e.phase * RootOfUnity(c.exp[g][t], M) * kappa.value(t).conj()
        if best is None or base < best[1]:
            best = (phase, base)
    return best


def phi_kappa(f, kappa: TwistedCharacter) -> Cyclotomic:
    """sum over s of conj(kappa(1;s)) f(1;s), exact.

    `f` maps s in S(u) to a coefficient: a Cyclotomic, a RootOfUnity, a
    rational, or anything with a to_cyclotomic() method.
    """
    terms, rest = [], []
    for s, val in f.items():
        if s not in kappa._lookup:
            continue
        z = kappa.value(s).conj()
        if isinstance(val, RootOfUnity):
            terms.append((1, val * z))
        elif hasattr(val, "magnitude"):
            terms.append((val.magnitude, val.phase * z))
        else:
            rest.append(as_cyclotomic(val) * z)
    total = Cyclotomic.from_terms(terms or [(0, ONE)])
    for x in rest:
        total = total + x
    return total


def as_cyclotomic(val) -> Cyclotomic:
    if isinstance(val, Cyclotomic):
        return val
    if isinstance(val, RootOfUnity):
        return Cyclotomic.from_terms([(1, val)])
    if hasattr(val, "to_cyclotomic"):
        return val.to_cyclotomic()
    return Cyclotomic.rational(Fraction(val))


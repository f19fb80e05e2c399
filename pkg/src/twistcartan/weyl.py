"""The Weyl groupoid and Weyl twist of a pair (c, S), as finite objects.

The Weyl groupoid is the action groupoid of G/S on the twisted dual.  The
Weyl twist (dual x E)/K is stored in reduced form: an element is a phase
times the class of a fixed section (1; rep(q), kappa)K, and multiplication
is governed by a derived cocycle on the Weyl groupoid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cocycle import Cocycle, TwistElement, twist_mul
from .dual import act_coset, canonical_coset, pair_data
from .errors import PreconditionFailed
from .groupoid import FiniteGroupoid, Subgroupoid, is_principal as gpd_is_principal, is_wide_normal, validate_groupoid
from .intlin import solve_mod_one
from .roots import ONE, RootOfUnity


@dataclass
class ActionGroupoid:
    acting: FiniteGroupoid
    points: tuple  # TwistedCharacter per point
    momentum: tuple  # point -> unit of the acting groupoid
    action: dict  # (q, x) -> q.x, for s(q) = momentum[x]
    groupoid: FiniteGroupoid  # arrows (q, x); units are the points
    arrows: tuple  # arrow id -> (q, x)

    def arrow_id(self, q, x):
        return self._ids[(q, x)]

    def __post_init__(self):
        self._ids = {a: i for i, a in enumerate(self.arrows)}


def action_groupoid_from_table(acting: FiniteGroupoid, points, momentum, action) -> ActionGroupoid:
    """Validate the action laws by building the groupoid of arrows (q, x)."""
    n_pts = len(points)
    arrows = [(momentum[x], x) for x in range(n_pts)]  # unit arrows first
    for q in range(acting.n_units, acting.size):
        for x in range(n_pts):
            if acting.source[q] == momentum[x]:
                arrows.append((q, x))
    comp = {}
    for q2, y in arrows:
        for q, x in arrows:
            if action[(q, x)] == y:
                comp[((q2, y), (q, x))] = (acting.table[q2][q], x)
    for q, x in arrows:
        if momentum[action[(q, x)]] != acting.range[q]:
            raise AssertionError("action does not respect the momentum map")
    W = validate_groupoid(
        arrows,
        arrows[:n_pts],
        {(q, x): (momentum[action[(q, x)]], action[(q, x)]) for q, x in arrows},
        {(q, x): (momentum[x], x) for q, x in arrows},
        comp,
        {(q, x): (acting.inverse[q], action[(q, x)]) for q, x in arrows},
    )
    return ActionGroupoid(acting, tuple(points), tuple(momentum), dict(action), W, tuple(W.labels))


def _require_pair(c: Cocycle, S: Subgroupoid):
    rep = is_wide_normal(c.groupoid, S)
    if not (rep.wide and rep.normal):
        raise PreconditionFailed("S must be wide and normal")
    if not pair_data(c, S).abelian:
        raise PreconditionFailed("E_S must be abelian")


def build_weyl_groupoid(c: Cocycle, S: Subgroupoid) -> ActionGroupoid:
    _require_pair(c, S)
    pd = pair_data(c, S)
    Q = pd.quotient.groupoid
    pts = pd.points
    idx = pd.point_index
    momentum = [k.unit for k in pts]
    action = {}
    for q in Q.elements:
        for x, k in enumerate(pts):
            if Q.source[q] == k.unit:
                action[(q, x)] = idx[act_coset(c, S, q, k)]
    return action_groupoid_from_table(Q, pts, momentum, action)


def isotropy_points(W: ActionGroupoid) -> frozenset:
    """Arrows (q, x) with q.x = x, as arrow ids of W.groupoid."""
    return frozenset(i for i, (q, x) in enumerate(W.arrows) if W.action[(q, x)] == x)


def is_principal(W: ActionGroupoid) -> bool:
    return gpd_is_principal(W.groupoid)


def stabilizer(W: ActionGroupoid, x: int) -> list:
    return [q for (q, y), z in W.action.items() if y == x and z == x]


def is_free(W: ActionGroupoid) -> bool:
    return all(len(stabilizer(W, x)) == 1 for x in range(len(W.points)))


def is_topologically_free_finite(W: ActionGroupoid) -> bool:
    """Points with trivial stabilizer are dense; in a finite discrete space
    the only dense set is everything, so this is is_free."""
    free_pts = [x for x in range(len(W.points)) if len(stabilizer(W, x)) == 1]
    return len(free_pts) == len(W.points)


def check_iso_characterization(c: Cocycle, S: Subgroupoid, W: ActionGroupoid | None = None) -> bool:
    """(q, kappa) is isotropy iff q is isotropy and kappa kills [e, E_S]."""
    W = W or build_weyl_groupoid(c, S)
    pd = pair_data(c, S)
    G = c.groupoid
    reps = pd.quotient.reps
    iso = isotropy_points(W)
    for i, (q, x) in enumerate(W.arrows):
        g = reps[q]
        kappa = W.points[x]
        if G.range[g] != G.source[g]:
            predicate = False
        else:
            predicate = kappa.kills(pd.commutators(g), c.modulus)
        if (i in iso) != predicate:
            return False
    return True


@dataclass
class WeylTwistRep:
    base: ActionGroupoid
    modulus: int  # M'': all reduced phases lie in mu_M''
    cocycle: Cocycle  # derived cocycle on base.groupoid, modulus M''
    c: Cocycle
    S: Subgroupoid

    def coset(self, e: TwistElement, x: int):
        """(e, kappa_x)K in reduced form: (phase, arrow id) with
        (e, kappa)K = phase . section(arrow)."""
        pd = pair_data(self.c, self.S)
        q = pd.quotient.q[e.base]
        phase, base = canonical_coset(self.c, self.S, e, self.base.points[x])
        assert base == pd.quotient.reps[q]
        return phase, self.base.arrow_id(q, x)

    def pi_tilde(self, arrow: int):
        """The Weyl groupoid arrow under a reduced twist element."""
        return self.base.arrows[arrow]

    def iota(self, z: RootOfUnity, x: int):
        """(z, kappa) -> (z . P(kappa), kappa)K."""
        return self.coset(TwistElement(z, self.base.points[x].unit), x)

    def mul(self, a, b):
        """Product of reduced elements (phase, arrow)."""
        W = self.base.groupoid
        ab = W.table[a[1]][b[1]]
        if ab < 0:
            raise ValueError("not composable")
        return a[0] * b[0] * self.cocycle(a[1], b[1]), ab


def build_weyl_twist(c: Cocycle, S: Subgroupoid, W: ActionGroupoid | None = None) -> WeylTwistRep:
    W = W or build_weyl_groupoid(c, S)
    pd = pair_data(c, S)
    reps = pd.quotient.reps
    Wg = W.groupoid
    phases = {}
    M2 = pd.modulus
    for a in Wg.elements:
        qa, ya = W.arrows[a]
        for b in Wg.elements:
            if Wg.table[a][b] < 0:
                continue
            qb, x = W.arrows[b]
            prod = twist_mul(c, TwistElement(ONE, reps[qa]), TwistElement(ONE, reps[qb]))
            phase, base = canonical_coset(c, S, prod, W.points[x])
            assert W.arrows[Wg.table[a][b]] == (pd.quotient.q[base], x)
            phases[(a, b)] = phase
            M2 = lcm(M2, phase.modulus)
    omega = Cocycle(Wg, M2, {k: v.lift(M2) for k, v in phases.items()})
    return WeylTwistRep(W, M2, omega, c, S)


def reduced_fiber_sizes(T: WeylTwistRep) -> dict:
    """Number of distinct reduced cosets over each Weyl arrow, counted by
    pushing every (z; g, kappa) with z in mu_M'' through the coset map."""
    c, W = T.c, T.base
    G = c.groupoid
    seen = {}
    for x, kappa in enumerate(W.points):
        for g in G.elements:
            if G.source[g] != kappa.unit:
                continue
            for k in range(T.modulus):
                ph, arrow = T.coset(TwistElement(RootOfUnity(k, T.modulus), g), x)
                seen.setdefault(arrow, set()).add(ph)
    return {a: len(v) for a, v in seen.items()}


@dataclass
class Trivialization:
    """A homomorphism F: dual x E -> T with F(tau, kappa) = kappa(tau).

    Determined by its values on the section (1; rep(q)) over each Weyl arrow.
    """

    twist: WeylTwistRep
    values: dict  # arrow id -> RootOfUnity

    def __call__(self, e: TwistElement, x: int) -> RootOfUnity:
        c, S = self.twist.c, self.twist.S
        G = c.groupoid
        pd = pair_data(c, S)
        q = pd.quotient.q[e.base]
        r = pd.quotient.reps[q]
        s = G.table[G.inverse[r]][e.base]  # e.base = r s
        kappa = self.twist.base.points[x]
        fr = self.values[self.twist.base.arrow_id(q, x)]
        return e.phase * fr * RootOfUnity(-c.exp[r][s], c.modulus) * kappa.value(s)


def verify_trivialization(F: Trivialization) -> bool:
    """Exhaustive: F multiplicative on composable pairs and kappa on E_S."""
    T = F.twist
    c, S, W = T.c, T.S, T.base
    G = c.groupoid
    pd = pair_data(c, S)
    for x, kappa in enumerate(W.points):
        u = kappa.unit
        for s in S.fiber(u):
            if F(TwistElement(ONE, s), x) != kappa.value(s):
                return False
        for h in G.elements:
            if G.source[h] != u:
                continue
            y = W.action[(pd.quotient.q[h], x)]
            for g in G.elements:
                if G.table[g][h] < 0:
                    continue
                lhs = F(TwistElement(ONE, g), y) * F(TwistElement(ONE, h), x)
                rhs = F(twist_mul(c, TwistElement(ONE, g), TwistElement(ONE, h)), x)
                if lhs != rhs:
                    return False
    return True


def weyl_twist_trivializable(c: Cocycle, S: Subgroupoid, check=True) -> Trivialization | None:
    """Decide whether the Weyl twist is trivial, with a witness F if so.

    F is a homomorphism exactly when its section values x_a satisfy
    x_a x_b = omega(a,b) x_ab on composable Weyl arrows, omega the derived
    cocycle.  Writing x_a = exp(2 pi i y_a) this is an integer linear system
    over Q/Z, solved by Smith normal form.
    """
    from .cartan import check_cartan

    if check and not check_cartan(c, S).cartan:
        raise PreconditionFailed("the pair is not Cartan")
    T = build_weyl_twist(c, S)
    Wg = T.base.groupoid
    rows, rhs = [], []
    for a in Wg.elements:
        for b in Wg.elements:
            ab = Wg.table[a][b]
            if ab < 0:
                continue
            row = [0] * Wg.size
            row[a] += 1
            row[b] += 1
            row[ab] -= 1
            rows.append(row)
            rhs.append(Fraction(T.cocycle.exp[a][b], T.modulus))
    ys = solve_mod_one(rows, rhs)
    if ys is None:
        return None
    F = Trivialization(T, {a: RootOfUnity.from_turn(y) for a, y in enumerate(ys)})
    if not verify_trivialization(F):
        raise AssertionError("linear solution is not a homomorphism")
    return F


def trivializable_by_search(T: WeylTwistRep, modulus: int, limit: int = 10**6) -> dict | None:
    """Oracle: exhaustive search for section values in mu_modulus."""
    Wg = T.base.groupoid
    free = list(range(Wg.n_units, Wg.size))
    if modulus ** len(free) > limit:
        raise ValueError("search space too large")
    pairs = [(a, b, Wg.table[a][b]) for a in Wg.elements for b in Wg.elements if Wg.table[a][b] >= 0]
    for combo in itertools.product(range(modulus), repeat=len(free)):
        vals = [RootOfUnity(0)] * Wg.size
        for a, k in zip(free, combo):
            vals[a] = RootOfUnity(k, modulus)
        if all(vals[a] * vals[b] == T.cocycle(a, b) * vals[ab] for a, b, ab in pairs):
            return dict(enumerate(vals))
    return None


def cross_check_delta(c: Cocycle, S: Subgroupoid, seed: int = 0, coset_pairs: int = 2) -> bool:
    """Normalizer classes against the K-cosets of the Weyl twist.

    For every point kappa and every g with s(g) = P(kappa), at a random lift
    e of g: two independent singleton normalizers positive at e are
    equivalent at kappa.  Then e is compared with the canonical element of
    (e, kappa)K (equal classes), with that element times a nontrivial phase
    (different classes), and with lifts of a few other elements of the same
    coset gS (classes equal exactly when the K-cosets are).
    """
    import random

    from .normalizer import BisectionFunction, Coefficient, weyl_equivalent

    rng = random.Random(seed)
    G = c.groupoid
    T = build_weyl_twist(c, S)
    M2 = max(T.modulus, 2)
    quo = pair_data(c, S).quotient

    def normalizer(e, magnitude=1):
        # n(1;g) = r conj(z) makes n(z;g) = r > 0
        return BisectionFunction.singleton(c, e.base, Coefficient(magnitude, e.phase.conj()))

    try:
        for x, kappa in enumerate(T.base.points):
            u = kappa.unit
            lifts = {}
            for g in G.elements:
                if G.source[g] != u:
                    continue
                e = TwistElement(RootOfUnity(rng.randrange(M2), M2), g)
                n1 = normalizer(e, rng.randint(1, 9))
                n2 = normalizer(e, Fraction(rng.randint(1, 9), rng.randint(1, 9)))
                if not weyl_equivalent(n1, n2, kappa, S, "twist"):
                    return False
                lifts[g] = (e, n1)
            pairs = []
            for g, (e, n1) in lifts.items():
                ph, base = canonical_coset(c, S, e, kappa)
                same = TwistElement(ph, base)
                other = TwistElement(ph * RootOfUnity(1, M2), base)
                pairs.append(((e, n1), (same, normalizer(same))))
                pairs.append(((e, n1), (other, normalizer(other))))
                mates = [h for h in quo.cosets[quo.q[g]] if h != g]
                for h in rng.sample(mates, min(coset_pairs, len(mates))):
                    pairs.append(((e, n1), lifts[h]))
            for (e1, n1), (e2, n2) in pairs:
                lhs = weyl_equivalent(n1, n2, kappa, S, "twist")
                rhs = T.coset(e1, x) == T.coset(e2, x)
                if lhs != rhs:
                    return False
    except Exception:  # a criteria disagreement is a mismatch too
        return False
    return True

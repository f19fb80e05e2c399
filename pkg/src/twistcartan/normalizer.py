"""Bisection-supported normalizers and the two Weyl equivalences.

A BisectionFunction f is a T-equivariant function on the twist, stored by
its values on the section: values[g] = f(1;g).  Values are positive
rationals times roots of unity, so "f(e) > 0" is decidable exactly.

Convolution is the twist convolution f1*f2(e') = sum f1(e) f2(e^-1 e').  On
the section this reads (f1*f2)(1;gh) = f1(1;g) f2(1;h) conj(c(g,h)); the
conjugate appears because (1;g)^-1 (1;gh) = (conj c(g,h); h).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cocycle import Cocycle, TwistElement, twist_mul
from .dual import TwistedCharacter, act, canonical_coset, pair_data, phi_kappa
from .errors import CriteriaDisagree, NotBisection, NotInDomain
from .groupoid import Subgroupoid, coset
from .roots import ONE, Cyclotomic, RootOfUnity


@dataclass(frozen=True)
class Coefficient:
    """A nonzero value r * z with r a positive rational and z a root of unity."""

    magnitude: Fraction
    phase: RootOfUnity = ONE

    def __post_init__(self):
        if Fraction(self.magnitude) <= 0:
            raise ValueError("magnitude must be positive")
        object.__setattr__(self, "magnitude", Fraction(self.magnitude))

    def __mul__(self, other):
        if isinstance(other, RootOfUnity):
            return Coefficient(self.magnitude, self.phase * other)
        return Coefficient(self.magnitude * other.magnitude, self.phase * other.phase)

    def conj(self):
        return Coefficient(self.magnitude, self.phase.conj())

    def is_positive(self):
        return self.phase.is_one()

    def to_cyclotomic(self) -> Cyclotomic:
        return Cyclotomic.from_terms([(self.magnitude, self.phase)])

    def __str__(self):
        return f"{self.magnitude}*{self.phase}"


class BisectionFunction:
    def __init__(self, c: Cocycle, values: dict):
        G = c.groupoid
        self.c = c
        self.values = {g: v if isinstance(v, Coefficient) else Coefficient(1, v) for g, v in values.items()}
        rs = [G.range[g] for g in self.values]
        ss = [G.source[g] for g in self.values]
        if len(set(rs)) != len(rs) or len(set(ss)) != len(ss):
            raise NotBisection("support is not a bisection")

    @classmethod
    def singleton(cls, c, g, value=None):
        return cls(c, {g: value if value is not None else Coefficient(1)})

    @classmethod
    def unit(cls, c, units=None):
        """Indicator of the unit space (or of the given units)."""
        us = c.groupoid.units if units is None else units
        return cls(c, {u: Coefficient(1) for u in us})

    @property
    def support(self):
        return frozenset(self.values)

    def __call__(self, e: TwistElement) -> Coefficient | None:
        v = self.values.get(e.base)
        return None if v is None else v * e.phase

    def over_source(self, u: int):
        """The unique supported g with source(g) = u, or None."""
        G = self.c.groupoid
        for g in self.values:
            if G.source[g] == u:
                return g
        return None

    def positive_lift(self, g: int) -> TwistElement:
        """The lift e of g with f(e) > 0."""
        return TwistElement(self.values[g].phase.conj(), g)

    def scaled(self, z) -> BisectionFunction:
        return BisectionFunction(self.c, {g: v * z for g, v in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, BisectionFunction) and self.c is other.c and self.values == other.values

    def __repr__(self):
        return "BisectionFunction({" + ", ".join(f"{g}: {v}" for g, v in sorted(self.values.items())) + "})"


def convolve(f1: BisectionFunction, f2: BisectionFunction) -> BisectionFunction:
    c = f1.c
    G = c.groupoid
    out = {}
    for g, a in f1.values.items():
        for h, b in f2.values.items():
            gh = G.table[g][h]
            if gh < 0:
                continue
            if gh in out:
                raise AssertionError("product of bisections is not a bisection")
            out[gh] = (a * b) * RootOfUnity(-c.exp[g][h], c.modulus)
    return BisectionFunction(c, out)


def convolve_direct(c: Cocycle, f1: dict, f2: dict) -> dict:
    """Twist convolution of arbitrary finitely supported section functions.

    Values are Cyclotomic; computed straight from the definition by summing
    over lifts (1;g) with r(g) = r(k).  Used as an oracle for convolve and for
    the multiplicativity of phi_kappa.
    """
    from .cocycle import twist_inv

    G = c.groupoid
    out = {}
    for k in G.elements:
        total = None
        for g, a in f1.items():
            if G.range[g] != G.range[k]:
                continue
            rest = twist_mul(c, twist_inv(c, TwistElement(ONE, g)), TwistElement(ONE, k))
            b = f2.get(rest.base)
            if b is None:
                continue
            term = a * b * rest.phase
            total = term if total is None else total + term
        if total is not None and not total.is_zero():
            out[k] = total
    return out


def adjoint(f: BisectionFunction) -> BisectionFunction:
    """f*(e) = conj(f(e^-1)); on the section f*(1;g) = c(g, g^-1) conj(f(1;g^-1))."""
    c = f.c
    G = c.groupoid
    out = {}
    for h, v in f.values.items():
        g = G.inverse[h]
        out[g] = v.conj() * RootOfUnity(c.exp[g][h], c.modulus)
    return BisectionFunction(c, out)


def expect(f: BisectionFunction, S: Subgroupoid) -> BisectionFunction:
    """Restriction to S."""
    return BisectionFunction(f.c, {g: v for g, v in f.values.items() if g in S.members})


def alpha_n(n: BisectionFunction, kappa: TwistedCharacter, S: Subgroupoid) -> TwistedCharacter:
    g = n.over_source(kappa.unit)
    if g is None:
        raise NotInDomain(f"unit {kappa.unit} is not in the source of the support")
    return act(n.c, S, TwistElement(ONE, g), kappa)


def _phi_of_product(n, m, kappa, S):
    """phi_kappa(Phi(m* n)), exact."""
    prod = expect(convolve(adjoint(m), n), S)
    return phi_kappa({g: v for g, v in prod.values.items()}, kappa)


def weyl_criteria(n, m, kappa, S, mode="twist"):
    """The three criteria, each evaluated on its own route. Returns a tuple of bools."""
    c = n.c
    G = c.groupoid
    u = kappa.unit
    g, h = n.over_source(u), m.over_source(u)
    if g is None or h is None:
        raise NotInDomain(f"unit {u} is not in both domains")
    phi = _phi_of_product(n, m, kappa, S)
    if mode == "twist":
        e, e2 = n.positive_lift(g), m.positive_lift(h)
        # I: equality of the classes, i.e. of the K-cosets of (e,kappa) and (e2,kappa)
        crit1 = canonical_coset(c, S, e, kappa) == canonical_coset(c, S, e2, kappa)
        crit2 = phi.is_positive()
        # III: sigma = e^-1 e2 lies in E_S and kappa(sigma) = 1
        if G.range[g] != G.range[h]:
            crit3 = False
        else:
            from .cocycle import twist_inv

            sigma = twist_mul(c, twist_inv(c, e), e2)
            crit3 = sigma.base in S.members and kappa(sigma).is_one()
        return crit1, crit2, crit3
    if mode == "groupoid":
        Q = pair_data(c, S).quotient
        crit1 = Q.q[g] == Q.q[h]
        crit2 = not phi.is_zero()
        cos_n = {coset(G, S, x) for x in n.support if G.source[x] == u}
        cos_m = {coset(G, S, x) for x in m.support if G.source[x] == u}
        crit3 = bool(cos_n) and cos_n == cos_m
        return crit1, crit2, crit3
    raise ValueError(f"unknown mode {mode!r}")


def weyl_equivalent(n, m, kappa, S, mode="twist") -> bool:
    """Whether n and m define the same Weyl class at kappa.

    Twist mode compares the classes in the Weyl twist, groupoid mode in the
    Weyl groupoid.  All three criteria are computed; they must agree.
    """
    crits = weyl_criteria(n, m, kappa, S, mode)
    if len(set(crits)) != 1:
        raise CriteriaDisagree(f"{mode} criteria disagree: {crits}")
    return crits[0]


@dataclass(frozen=True)
class WeylClass:
    """Canonical form of a Weyl class at a point of the dual."""

    kind: str  # "twist" or "groupoid"
    point: TwistedCharacter
    base: int  # canonical coset representative in G
    phase: RootOfUnity | None  # only for twist classes


def weyl_class(n: BisectionFunction, kappa: TwistedCharacter, S: Subgroupoid, kind="twist") -> WeylClass:
    c = n.c
    g = n.over_source(kappa.unit)
    if g is None:
        raise NotInDomain(f"unit {kappa.unit} is not in the source of the support")
    if kind == "twist":
        phase, base = canonical_coset(c, S, n.positive_lift(g), kappa)
        return WeylClass(kind, kappa, base, phase)
    Q = pair_data(c, S).quotient
    return WeylClass(kind, kappa, Q.reps[Q.q[g]], None)


def random_bisection_function(c: Cocycle, rng, through: int, modulus: int = 4, lift: TwistElement | None = None) -> BisectionFunction:
    """A random bisection function whose support contains the arrow `through`.

    Other units get an arrow with probability one half, keeping ranges and
    sources distinct.  Values are random positive rationals times roots of
    unity of order dividing `modulus`; with `lift` given, the value at
    `through` is chosen to be positive at that twist element.
    """
    G = c.groupoid
    used_r, used_s = {G.range[through]}, {G.source[through]}
    phase = lift.phase.conj() if lift is not None else RootOfUnity(rng.randrange(modulus), modulus)
    values = {through: Coefficient(Fraction(rng.randint(1, 9), rng.randint(1, 9)), phase)}
    for g in rng.sample(G.elements, len(G.elements)):
        if G.range[g] in used_r or G.source[g] in used_s or rng.random() < 0.5:
            continue
        used_r.add(G.range[g])
        used_s.add(G.source[g])
        values[g] = Coefficient(Fraction(rng.randint(1, 9), rng.randint(1, 9)), RootOfUnity(rng.randrange(modulus), modulus))
    return BisectionFunction(c, values)


def random_normalizer_triple(c: Cocycle, S: Subgroupoid, rng, modulus: int = 4):
    """(n, m, kappa) with kappa a random point and both n, m defined at it.

    Half the time m is built from n's lift times an element of E_S, with a
    phase that kappa either kills or does not, so that equivalent and
    inequivalent pairs both occur.
    """
    G = c.groupoid
    kappa = rng.choice(pair_data(c, S).points)
    u = kappa.unit
    starts = [g for g in G.elements if G.source[g] == u]
    g = rng.choice(starts)
    n = random_bisection_function(c, rng, g, modulus)
    if rng.random() < 0.5:
        return n, random_bisection_function(c, rng, rng.choice(starts), modulus), kappa
    e = n.positive_lift(g)
    s = rng.choice(S.fiber(u))
    z = kappa.value(s).conj()  # kappa(z; s) = 1
    if rng.random() < 0.3:
        z = z * RootOfUnity(1, max(2, modulus))
    e2 = twist_mul(c, e, TwistElement(z, s))
    return n, random_bisection_function(c, rng, e2.base, modulus, lift=e2), kappa

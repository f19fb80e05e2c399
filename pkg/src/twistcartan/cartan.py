"""Cartan and C*-diagonal conditions for finite twisted pairs (c, S).

Every check works on commutator sets [e, E_S] computed with the lift
(1;g) of an isotropy element g; the phase of e cancels in a commutator.
The space of units is discrete here, so each "interior of" condition is
the plain set condition.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .cocycle import Cocycle, _mul, is_abelian_twist
from .errors import CriteriaDisagree
from .groupoid import Subgroupoid, generated_subgroup, is_wide_normal


def _iso_elements(G):
    return [g for g in G.elements if G.range[g] == G.source[g]]


def _comm(c, S):
    # commutator exponent sets, cached per pair through pair_data when possible
    from .dual import pair_data

    return pair_data(c, S).commutators


def check_max(c: Cocycle, S: Subgroupoid) -> bool:
    """Units lie in S, and g is in S exactly when |[(1;g), E_S]| = 1."""
    G = c.groupoid
    if any(u not in S.members for u in G.units):
        return False
    comm = _comm(c, S)
    return all((len(comm(g)) == 1) == (g in S.members) for g in _iso_elements(G))


def check_ricc(c: Cocycle, S: Subgroupoid) -> bool:
    """No isotropy g with 1 < |[e, E_S]| = |pi([e, E_S])|."""
    G = c.groupoid
    comm = _comm(c, S)
    for g in _iso_elements(G):
        cs = comm(g)
        if 1 < len(cs) == len({b for _, b in cs}):
            return False
    return True


@dataclass(frozen=True)
class CartanVerdict:
    wide: bool
    normal: bool
    abelian: bool
    max: bool
    ricc: bool
    cartan: bool

    def as_dict(self):
        return asdict(self)


def check_cartan(c: Cocycle, S: Subgroupoid) -> CartanVerdict:
    G = c.groupoid
    rep = is_wide_normal(G, S)
    abelian = is_abelian_twist(c, S)
    mx = check_max(c, S)
    ricc = check_ricc(c, S)
    ok = rep.wide and rep.normal and abelian and mx and ricc
    return CartanVerdict(rep.wide, rep.normal, abelian, mx, ricc, ok)


def check_diag_S(c: Cocycle, S: Subgroupoid) -> bool:
    """E_S abelian and normal, and every isotropy g whose commutator set
    maps injectively to G already lies in S."""
    G = c.groupoid
    if not is_abelian_twist(c, S) or not is_wide_normal(G, S).normal:
        return False
    comm = _comm(c, S)
    injective = set()
    for g in _iso_elements(G):
        cs = comm(g)
        if len(cs) == len({b for _, b in cs}):
            injective.add(g)
    if not injective <= S.members:
        return False
    # with E_S abelian every s in S has [e, E_S] = {units}, so equality holds
    assert injective == S.members
    return True


def check_diag_B(c: Cocycle, S: Subgroupoid) -> bool:
    """E_S abelian and normal, and for every isotropy g outside S some
    sigma over S(u) has e sigma = z sigma e with z != 1."""
    G = c.groupoid
    if not is_abelian_twist(c, S) or not is_wide_normal(G, S).normal:
        return False
    for g in _iso_elements(G):
        if g in S.members:
            continue
        e = (0, g)
        twisted = False
        for s in S.fiber(G.range[g]):
            es = _mul(c, e, (0, s))
            se = _mul(c, (0, s), e)
            if es[1] == se[1] and es[0] != se[0]:
                twisted = True
                break
        if not twisted:
            return False
    return True


def is_maximal_abelian(c: Cocycle, S: Subgroupoid) -> bool:
    """No abelian-twist subgroupoid of Iso(G) strictly contains S.

    Any larger one contains some g outside S together with S(u), hence the
    subgroup they generate, so it is enough to test those.
    """
    G = c.groupoid
    if not is_abelian_twist(c, S):
        return False
    for g in _iso_elements(G):
        if g in S.members:
            continue
        u = G.range[g]
        H = generated_subgroup(G, u, set(S.fiber(u)) | {g})
        bigger = Subgroupoid(G, S.members | H)
        if is_abelian_twist(c, bigger):
            return False
    return True


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: CartanVerdict
    diag_S: bool
    diag_B: bool
    principal: bool | None  # Weyl groupoid principal; None if W is undefined
    effective: bool | None
    free: bool | None
    untwisted_predicate: bool | None  # S = Iso(G) abelian, only for c = 1

    @property
    def consistent(self) -> bool:
        return not self.failures()

    def failures(self) -> list[str]:
        out = []
        v = self.verdict
        weyl_side = v.cartan and bool(self.principal)
        if not (self.diag_S == self.diag_B == weyl_side):
            out.append(f"diag_S={self.diag_S} diag_B={self.diag_B} cartan&principal={weyl_side}")
        if self.principal is not None and v.cartan != (self.effective and v.max and v.ricc):
            out.append(f"cartan={v.cartan} but effective={self.effective} max={v.max} ricc={v.ricc}")
        if v.cartan and not self.effective:
            out.append("Cartan pair with non-unit Weyl isotropy")
        if self.diag_S and not self.free:
            out.append("diagonal pair with a non-free Weyl groupoid")
        if self.diag_S and not (v.max and v.ricc):
            out.append("diagonal pair failing max or ricc")
        if self.untwisted_predicate is not None and self.diag_S != self.untwisted_predicate:
            out.append("untwisted pair: diag_S differs from S = Iso(G) abelian")
        return out


def equivalence_suite(c: Cocycle, S: Subgroupoid, strict=True) -> EquivalenceReport:
    """Run every checker on (c, S) and compare them.

    With strict=True a mismatch raises CriteriaDisagree.
    """
    from .groupoid import is_effective_finite, isotropy
    from .weyl import build_weyl_groupoid, is_free, is_principal

    G = c.groupoid
    verdict = check_cartan(c, S)
    dS, dB = check_diag_S(c, S), check_diag_B(c, S)
    principal = effective = free = None
    if verdict.wide and verdict.normal and verdict.abelian:
        W = build_weyl_groupoid(c, S)
        principal = is_principal(W)
        effective = is_effective_finite(W.groupoid)
        free = is_free(W)
    untwisted = None
    if c.is_trivial():
        iso = isotropy(G)
        untwisted = S == iso and is_abelian_twist(c, iso)
    rep = EquivalenceReport(verdict, dS, dB, principal, effective, free, untwisted)
    if strict and not rep.consistent:
        raise CriteriaDisagree("; ".join(rep.failures()))
    return rep

"""Builders for concrete groups and groupoids.

Groups are one-unit groupoids.  Everything goes through validate_groupoid
so that every builder output is checked against the groupoid axioms.
"""

from __future__ import annotations

from itertools import permutations, product

from .groupoid import FiniteGroupoid, validate_groupoid


def group_from_mul(elements, mul, identity=None, check_assoc=True) -> FiniteGroupoid:
    elements = list(elements)
    if identity is None:
        identity = next(e for e in elements if all(mul(e, x) == x for x in elements))
    inverse = {}
    for x in elements:
        inverse[x] = next(y for y in elements if mul(x, y) == identity)
    comp = {(x, y): mul(x, y) for x in elements for y in elements}
    rs = {x: identity for x in elements}
    ordered = [identity] + [x for x in elements if x != identity]
    return validate_groupoid(ordered, [identity], rs, rs, comp, inverse, check_assoc=check_assoc)


def metacyclic(n: int, m: int, r: int, t: int = 0) -> FiniteGroupoid:
    """<a, b | a^n, b^m = a^t, b a b^-1 = a^r>, elements a^i b^j as (i, j)."""

    def mul(x, y):
        i, j = x
        k, l = y
        carry = t if j + l >= m else 0
        return ((i + pow(r, j, n) * k + carry) % n, (j + l) % m)

    return group_from_mul([(i, j) for j in range(m) for i in range(n)], mul, (0, 0))


def cyclic(n: int) -> FiniteGroupoid:
    return group_from_mul(range(n), lambda x, y: (x + y) % n, 0)


def abelian(*orders) -> FiniteGroupoid:
    """Z/n1 x ... x Z/nk with elements as tuples."""

    def mul(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, orders))

    return group_from_mul(list(product(*[range(n) for n in orders])), mul, tuple(0 for _ in orders))


def dihedral(n: int) -> FiniteGroupoid:
    """Symmetries of the n-gon, order 2n."""
    return metacyclic(n, 2, n - 1, 0)


def dicyclic(n: int) -> FiniteGroupoid:
    """Order 4n; n = 2 gives the quaternion group."""
    return metacyclic(2 * n, 2, 2 * n - 1, n)


def symmetric(n: int) -> FiniteGroupoid:
    return group_from_mul(permutations(range(n)), _pcompose, tuple(range(n)))


def alternating(n: int) -> FiniteGroupoid:
    even = [p for p in permutations(range(n)) if _parity(p) == 0]
    return group_from_mul(even, _pcompose, tuple(range(n)))


def _pcompose(p, q):
    return tuple(p[i] for i in q)


def _parity(p):
    seen, parity = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def pauli() -> FiniteGroupoid:
    """i^k X^x Z^z; the central product C4 o D4."""

    def mul(a, b):
        k, x, z = a
        k2, x2, z2 = b
        return ((k + k2 + 2 * z * x2) % 4, x ^ x2, z ^ z2)

    return group_from_mul(list(product(range(4), range(2), range(2))), mul, (0, 0, 0))


def klein_by_c4() -> FiniteGroupoid:
    """(Z/2)^2 semidirect Z/4, the generator swapping the two coordinates."""

    def mul(a, b):
        v1, v2, k = a
        w1, w2, l = b
        if k % 2:
            w1, w2 = w2, w1
        return (v1 ^ w1, v2 ^ w2, (k + l) % 4)

    return group_from_mul(list(product(range(2), range(2), range(4))), mul, (0, 0, 0))


def heisenberg_base() -> FiniteGroupoid:
    return abelian(2, 2)


def direct_product(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    """Product groupoid, componentwise composition."""
    elems = [(g, h) for g in G.elements for h in H.elements]
    units = [(u, v) for u in G.units for v in H.units]
    rng = {(g, h): (G.range[g], H.range[h]) for g, h in elems}
    src = {(g, h): (G.source[g], H.source[h]) for g, h in elems}
    inv = {(g, h): (G.inverse[g], H.inverse[h]) for g, h in elems}
    comp = {}
    for g1, h1 in elems:
        for g2, h2 in elems:
            a, b = G.table[g1][g2], H.table[h1][h2]
            if a >= 0 and b >= 0:
                comp[((g1, h1), (g2, h2))] = (a, b)
    out = validate_groupoid(elems, units, rng, src, comp, inv)
    out.labels = tuple((G.labels[g], H.labels[h]) for g, h in out.labels)
    return out


def disjoint_union(*parts: FiniteGroupoid) -> FiniteGroupoid:
    """Group bundles and other disjoint unions."""
    elems, units, rng, src, inv, comp = [], [], {}, {}, {}, {}
    for i, P in enumerate(parts):
        for g in P.elements:
            e = (i, g)
            elems.append(e)
            rng[e] = (i, P.range[g])
            src[e] = (i, P.source[g])
            inv[e] = (i, P.inverse[g])
            for h in P.elements:
                gh = P.table[g][h]
                if gh >= 0:
                    comp[(e, (i, h))] = (i, gh)
        units.extend((i, u) for u in P.units)
    out = validate_groupoid(elems, units, rng, src, comp, inv)
    out.labels = tuple((i, parts[i].labels[g]) for i, g in out.labels)
    return out


def pair_groupoid(n: int) -> FiniteGroupoid:
    """X x X with (x,y)(y,z) = (x,z); principal and transitive."""
    elems = [(x, y) for x in range(n) for y in range(n)]
    units = [(x, x) for x in range(n)]
    comp = {((x, y), (y2, z)): (x, z) for x, y in elems for y2, z in elems if y == y2}
    return validate_groupoid(
        elems,
        units,
        {e: (e[0], e[0]) for e in elems},
        {e: (e[1], e[1]) for e in elems},
        comp,
        {e: (e[1], e[0]) for e in elems},
    )


def action_groupoid(H: FiniteGroupoid, points, act) -> FiniteGroupoid:
    """Transformation groupoid of a group H (one unit) acting on `points`.

    Arrows are (h, x) from x to act(h, x); (k, act(h,x)) (h, x) = (kh, x).
    """
    if H.n_units != 1:
        raise ValueError("acting object must be a group")
    points = list(points)
    elems = [(h, x) for h in H.elements for x in points]
    units = [(0, x) for x in points]
    rng = {(h, x): (0, act(h, x)) for h, x in elems}
    src = {(h, x): (0, x) for h, x in elems}
    inv = {(h, x): (H.inverse[h], act(h, x)) for h, x in elems}
    comp = {}
    for k, y in elems:
        for h, x in elems:
            if act(h, x) == y:
                comp[((k, y), (h, x))] = (H.table[k][h], x)
    out = validate_groupoid(elems, units, rng, src, comp, inv)
    out.labels = tuple((H.labels[h], x) for h, x in out.labels)
    return out


def small_groups(max_order: int = 16) -> list[tuple[str, FiniteGroupoid]]:
    """One representative of every isomorphism class of order <= 16."""
    out = []

    def add(name, builder):
        G = builder()
        if G.size <= max_order:
            out.append((name, G))

    for n in range(1, 17):
        add(f"C{n}", lambda n=n: cyclic(n))
    add("C2xC2", lambda: abelian(2, 2))
    add("S3", lambda: dihedral(3))
    add("C4xC2", lambda: abelian(4, 2))
    add("C2^3", lambda: abelian(2, 2, 2))
    add("D4", lambda: dihedral(4))
    add("Q8", lambda: dicyclic(2))
    add("C3xC3", lambda: abelian(3, 3))
    add("D5", lambda: dihedral(5))
    add("C6xC2", lambda: abelian(6, 2))
    add("A4", lambda: alternating(4))
    add("D6", lambda: dihedral(6))
    add("Dic3", lambda: dicyclic(3))
    add("D7", lambda: dihedral(7))
    add("C4xC4", lambda: abelian(4, 4))
    add("C2^2:C4", klein_by_c4)
    add("C4:C4", lambda: metacyclic(4, 4, 3, 0))
    add("C8xC2", lambda: abelian(8, 2))
    add("M16", lambda: metacyclic(8, 2, 5, 0))
    add("D8", lambda: dihedral(8))
    add("SD16", lambda: metacyclic(8, 2, 3, 0))
    add("Q16", lambda: dicyclic(4))
    add("C4xC2xC2", lambda: abelian(4, 2, 2))
    add("C2xD4", lambda: direct_product(cyclic(2), dihedral(4)))
    add("C2xQ8", lambda: direct_product(cyclic(2), dicyclic(2)))
    add("C4oD4", pauli)
    add("C2^4", lambda: abelian(2, 2, 2, 2))
    return out

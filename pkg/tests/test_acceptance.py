"""The nine acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible in the pytest output)
before asserting.  Run alone with `pytest tests/test_acceptance.py -v`.
"""

import random
from fractions import Fraction
from math import gcd

import pytest
import sympy
from sympy.matrices.normalforms import hermite_normal_form

from twistcartan.cartan import check_cartan, check_diag_B, check_diag_S
from twistcartan.cocycle import (
    TwistElement,
    dual_group,
    extend_character,
    solve_coboundary,
    twist_inv,
    twist_mul,
)
from twistcartan.dual import pair_data, phi_kappa
from twistcartan.groupoid import generated_subgroup, isotropy
from twistcartan.normalizer import convolve_direct, random_normalizer_triple, weyl_criteria
from twistcartan.roots import ONE, Cyclotomic, RootOfUnity
from twistcartan.rotation import (
    ThetaParam,
    check_cartan_rotation,
    check_diag_rotation,
    finite_shadow,
    hermite_form,
    smith_normal_form,
    trivializing_F_rotation,
    weyl_groupoid_rotation,
)
from twistcartan.weyl import (
    build_weyl_groupoid,
    check_iso_characterization,
    cross_check_delta,
    is_free,
    is_principal,
    isotropy_points,
)


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nacceptance {n}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.fixture(scope="module")
def analysed(catalog):
    """Per-instance verdicts shared by criteria 3 to 6."""
    rows = []
    for e in catalog:
        c, S = e.cocycle, e.S
        W = build_weyl_groupoid(c, S)
        rows.append(
            dict(
                entry=e,
                W=W,
                cartan=check_cartan(c, S).cartan,
                diag_S=check_diag_S(c, S),
                diag_B=check_diag_B(c, S),
                principal=is_principal(W),
            )
        )
    return rows


def test_1_rotation_irrational(capsys):
    rng = random.Random(1)
    theta = ThetaParam.irrational()
    bad = []
    coprime, shared = [], []
    while len(coprime) < 50 or len(shared) < 50:
        m, n = rng.randint(-50, 50), rng.randint(-50, 50)
        if (m, n) == (0, 0):
            continue
        (coprime if gcd(m, n) == 1 else shared).append((m, n))
    for m, n in coprime[:50]:
        S = hermite_form([(m, n)])
        W = weyl_groupoid_rotation(theta, S)
        a, b = W.quotient_map
        # the map must be g -> g1 n - g2 m, up to the orientation of S's generator
        gm, gn = S.generator
        sign = 1 if (gm, gn) == (m, n) else -1
        F = trivializing_F_rotation(theta, S)
        ok = (
            check_cartan_rotation(theta, S)
            and check_diag_rotation(theta, S)
            and W.kind == "circle x Z"
            and (a, b) == (sign * n, -sign * m)
            and all(W.certificate.values())
            and F.restriction_ok
            and F.homomorphism_ok
        )
        if not ok:
            bad.append((m, n))
    for m, n in shared[:50]:
        if check_cartan_rotation(theta, hermite_form([(m, n)])):
            bad.append((m, n))
    report(capsys, 1, not bad, f"50 coprime + 50 non-coprime generators, {len(bad)} failures")
    assert not bad


def test_2_rotation_rational(capsys):
    bad = []
    count = 0
    for q in range(1, 13):
        for p in range(q):
            if gcd(p, q) != 1:
                continue
            theta = ThetaParam(p, q)
            for k in range(1, 13):
                for n in range(1, 13):
                    for m in range(k):
                        S = hermite_form([(k, 0), (m, n)])
                        assert (S.k, S.m, S.n) == (k, m, n)
                        count += 1
                        cartan = check_cartan_rotation(theta, S)
                        if cartan != (n * k == q):
                            bad.append((p, q, k, m, n, "cartan"))
                            continue
                        if not cartan:
                            continue
                        k2 = gcd(gcd(k, m), n)
                        n2 = n * k // k2
                        W = weyl_groupoid_rotation(theta, S)
                        expected = ((Fraction(p, k2), k2), (Fraction(p, n2), n2))
                        cert = W.certificate
                        ok = (
                            check_diag_rotation(theta, S)
                            and W.kind == "product"
                            and W.factors == expected
                            and cert["snf_is_kprime_nprime"]
                            and cert["action_transported"]
                            and cert["gcd_p_kprime"] == 1
                            and cert["gcd_p_nprime"] == 1
                            and cert["free"]
                        )
                        if not ok:
                            bad.append((p, q, k, m, n, "weyl"))
    report(capsys, 2, not bad, f"{count} (theta, S) pairs, {len(bad)} failures")
    assert not bad


def test_3_finite_equivalence_suite(capsys, analysed):
    bad = []
    for r in analysed:
        W = r["W"]
        if not (r["diag_S"] == r["diag_B"] == (r["cartan"] and r["principal"])):
            bad.append(r["entry"].name)
        units = set(range(W.groupoid.n_units))
        if r["cartan"] and set(isotropy_points(W)) != units:
            bad.append(r["entry"].name)
    n_cartan = sum(r["cartan"] for r in analysed)
    ok = not bad and len(analysed) >= 200
    report(capsys, 3, ok, f"{len(analysed)} instances, {n_cartan} Cartan, {len(bad)} failures")
    assert ok, bad[:10]


def test_4_isotropy_characterization(capsys, analysed):
    bad = [r["entry"].name for r in analysed if not check_iso_characterization(r["entry"].cocycle, r["entry"].S, r["W"])]
    report(capsys, 4, not bad, f"{len(analysed)} instances, {len(bad)} failures")
    assert not bad, bad[:10]


def test_5_freeness(capsys, analysed):
    diag = [r for r in analysed if r["diag_S"]]
    bad = [r["entry"].name for r in diag if not is_free(r["W"])]
    report(capsys, 5, not bad, f"{len(diag)} diagonal instances, {len(bad)} failures")
    assert not bad, bad[:10]


def test_6_untwisted(capsys, analysed):
    bad = []
    count = 0
    for r in analysed:
        e = r["entry"]
        if not e.cocycle.is_trivial():
            continue
        count += 1
        G = e.groupoid
        iso = isotropy(G)
        iso_abelian = all(
            G.table[a][b] == G.table[b][a] for a in iso.members for b in iso.members if G.range[a] == G.range[b]
        )
        if r["diag_S"] != (e.S == iso and iso_abelian):
            bad.append(e.name)
    report(capsys, 6, not bad, f"{count} untwisted instances, {len(bad)} failures")
    assert not bad, bad[:10]


def test_7_normalizer_oracle(capsys, catalog):
    rng = random.Random(7)
    disagree = 0
    outcomes = set()
    for _ in range(1200):
        e = rng.choice(catalog)
        n, m, kappa = random_normalizer_triple(e.cocycle, e.S, rng)
        tw = weyl_criteria(n, m, kappa, e.S, "twist")
        gp = weyl_criteria(n, m, kappa, e.S, "groupoid")
        if len(set(tw)) != 1 or len(set(gp)) != 1:
            disagree += 1
        outcomes.add((tw[0], gp[0]))
    delta_bad = [e.name for e in catalog if not cross_check_delta(e.cocycle, e.S)]
    # both equivalent and inequivalent pairs must have been exercised
    ok = not disagree and not delta_bad and {(True, True), (False, False)} <= outcomes
    report(capsys, 7, ok, f"1200 triples, {disagree} disagreements; cross_check_delta on {len(catalog)} instances, {len(delta_bad)} failures")
    assert ok


def _cocycle_associative(c):
    G = c.groupoid
    M = c.modulus
    for g in G.elements:
        for h in G.elements:
            gh = G.table[g][h]
            if gh < 0:
                continue
            for k in G.elements:
                if G.table[h][k] < 0:
                    continue
                a, b, d = TwistElement(ONE, g), TwistElement(RootOfUnity(1, 2 * M), h), TwistElement(ONE, k)
                if twist_mul(c, twist_mul(c, a, b), d) != twist_mul(c, a, twist_mul(c, b, d)):
                    return False
                if twist_mul(c, a, twist_inv(c, a)) != TwistElement(ONE, G.range[g]):
                    return False
    return True


def _lattice_equal(gens, S):
    """The Hermite basis spans exactly the lattice of gens (checked against sympy)."""
    M = sympy.Matrix([list(g) for g in gens]).T
    if M.is_zero_matrix:
        return S.rank == 0
    H = hermite_normal_form(M)
    ours = sympy.Matrix([list(v) for v in S.basis]).T
    if ours.cols != H.cols:
        return False

    def contains(A, v):
        x = sympy.symbols(f"x0:{A.cols}")
        sol = sympy.solve(list(A * sympy.Matrix(x) - sympy.Matrix(v)), x, dict=True)
        return bool(sol) and len(sol[0]) == A.cols and all(t.is_integer for t in sol[0].values())

    return all(contains(H, ours[:, j]) for j in range(ours.cols)) and all(contains(ours, H[:, j]) for j in range(H.cols))


def test_8_algebraic_kernels(capsys, catalog):
    rng = random.Random(8)
    failures = {}

    def fail(key):
        failures[key] = failures.get(key, 0) + 1

    seen = set()
    for e in catalog:
        c, S = e.cocycle, e.S
        G = c.groupoid
        if id(c) not in seen:
            seen.add(id(c))
            if not _cocycle_associative(c):
                fail("associativity")
        for u in G.units:
            fib = S.fiber(u)
            d = solve_coboundary(c, fib)
            if any(c(s, t) * d[G.table[s][t]] != d[s] * d[t] for s in fib for t in fib):
                fail("coboundary")
            H = sorted(generated_subgroup(G, u, [rng.choice(fib)]))
            rho = rng.choice(dual_group(G, H))
            ext = extend_character(G, fib, H, rho)
            if any(ext[h] != rho[h] for h in H) or any(ext[s] * ext[t] != ext[G.table[s][t]] for s in fib for t in fib):
                fail("extend_character")

    for _ in range(1000):
        e = rng.choice(catalog)
        c, S = e.cocycle, e.S
        kappa = rng.choice(pair_data(c, S).points)
        fib = S.fiber(kappa.unit)

        def rand_f():
            return {
                s: Cyclotomic.from_terms([(rng.randint(-3, 3), RootOfUnity(rng.randrange(4), 4)), (rng.randint(-3, 3), ONE)])
                for s in fib
                if rng.random() < 0.8
            }

        f1, f2 = rand_f(), rand_f()
        if phi_kappa(convolve_direct(c, f1, f2), kappa) != phi_kappa(f1, kappa) * phi_kappa(f2, kappa):
            fail("phi_kappa")

    for _ in range(1000):
        A = [[rng.randint(-1000, 1000) for _ in range(2)] for _ in range(2)]
        N, P, Q = smith_normal_form(A)  # raises if P A Q != N
        prod = sympy.Matrix(P) * sympy.Matrix(A) * sympy.Matrix(Q)
        d1, d2 = N[0][0], N[1][1]
        if prod != sympy.Matrix(N) or N[0][1] or N[1][0] or d1 < 0 or d2 < 0 or (d1 and d2 % d1) or (not d1 and d2):
            fail("snf")
        if abs(sympy.Matrix(P).det()) != 1 or abs(sympy.Matrix(Q).det()) != 1:
            fail("snf")
        cols = [(A[0][0], A[1][0]), (A[0][1], A[1][1])]
        if not _lattice_equal(cols, hermite_form(cols)):
            fail("hermite")

    ok = not failures
    report(capsys, 8, ok, f"{len(seen)} cocycles, {len(catalog)} instances, 1000 convolution pairs, 1000 matrices; failures {failures or 0}")
    assert ok


def test_9_bridge(capsys):
    bad = []
    count = 0
    for q in range(1, 9):
        for p in range(q):
            if gcd(p, q) != 1:
                continue
            theta = ThetaParam(p, q)
            for k in range(1, q + 1):
                if q % k:
                    continue
                n = q // k
                for m in range(k):
                    S = hermite_form([(k, 0), (m, n)])
                    assert check_cartan_rotation(theta, S)
                    c, S_bar = finite_shadow(theta, S)
                    count += 1
                    if check_diag_rotation(theta, S) != check_diag_S(c, S_bar):
                        bad.append((p, q, k, m, n))
    report(capsys, 9, not bad, f"{count} Cartan shapes with q <= 8, {len(bad)} mismatches")
    assert not bad

"""Exact integer linear algebra.

smith_normal_form returns unimodular P, Q with P A Q = D.  solve_mod_one
solves A y = b over Q/Z (the circle restricted to rational turns) by the
same elimination, carrying b along instead of building P.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


class _Elim:
    """Row/column elimination state for Smith normal form."""

    def __init__(self, A, track_rows=True, rhs=None):
        self.D = [list(map(int, r)) for r in A]
        self.m = len(self.D)
        self.n = len(self.D[0]) if self.m else 0
        self.P = _identity(self.m) if track_rows else None
        self.Q = _identity(self.n)
        self.rhs = list(rhs) if rhs is not None else None

    # row ops act on D, P and rhs; column ops on D and Q
    def swap_rows(self, i, j):
        D = self.D
        D[i], D[j] = D[j], D[i]
        if self.P is not None:
            self.P[i], self.P[j] = self.P[j], self.P[i]
        if self.rhs is not None:
            self.rhs[i], self.rhs[j] = self.rhs[j], self.rhs[i]

    def add_row(self, dst, src, k):
        # row dst += k * row src
        if not k:
            return
        D = self.D
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        if self.P is not None:
            self.P[dst] = [a + k * b for a, b in zip(self.P[dst], self.P[src])]
        if self.rhs is not None:
            self.rhs[dst] = self.rhs[dst] + k * self.rhs[src]

    def neg_row(self, i):
        self.D[i] = [-a for a in self.D[i]]
        if self.P is not None:
            self.P[i] = [-a for a in self.P[i]]
        if self.rhs is not None:
            self.rhs[i] = -self.rhs[i]

    def swap_cols(self, i, j):
        for M in (self.D, self.Q):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_col(self, dst, src, k):
        if not k:
            return
        for M in (self.D, self.Q):
            for row in M:
                row[dst] += k * row[src]

    def run(self):
        D = self.D
        m, n = self.m, self.n
        t = 0
        while t < min(m, n):
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (piv is None or abs(D[i][j]) < abs(D[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            self.swap_rows(t, piv[0])
            self.swap_cols(t, piv[1])
            while True:
                changed = False
                for i in range(t + 1, m):
                    if D[i][t]:
                        self.add_row(i, t, -(D[i][t] // D[t][t]))
                        if D[i][t]:
                            self.swap_rows(t, i)
                            changed = True
                for j in range(t + 1, n):
                    if D[t][j]:
                        self.add_col(j, t, -(D[t][j] // D[t][t]))
                        if D[t][j]:
                            self.swap_cols(t, j)
                            changed = True
                if changed:
                    continue
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                    None,
                )
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if D[t][t] < 0:
                self.neg_row(t)
            t += 1
        self.rank = t
        return self


def smith_normal_form(A):
    """(D, P, Q) with P*A*Q = D diagonal, d1 | d2 | ..., P and Q unimodular."""
    e = _Elim(A).run()
    return e.D, e.P, e.Q


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def solve_mod_one(A, b):
    """Solve A y = b (mod 1) for y in Q/Z.

    A is an integer matrix, b a list of Fractions.  Returns a list of
    Fractions in [0, 1) or None when the system has no solution, which
    happens exactly when some integer relation among the rows of A does not
    annihilate b.
    """
    if not A:
        return []
    e = _Elim(A, track_rows=False, rhs=[Fraction(x) for x in b]).run()
    D, rhs = e.D, e.rhs
    for i in range(e.rank, e.m):
        if rhs[i] % 1:
            return None
    ys = [Fraction(0)] * e.n
    for i in range(e.rank):
        ys[i] = (rhs[i] / D[i][i]) % 1
    return [sum(q * y for q, y in zip(row, ys)) % 1 for row in e.Q]


def _valuation(x, p, k):
    v = 0
    while v < k and x % p == 0:
        x //= p
        v += 1
    return v


def kernel_mod_prime_power(A, p: int, k: int):
    """Generators of {x : A x = 0 mod p^k} as integer vectors mod p^k.

    The generating set K starts as the identity and is refined one row at a
    time: with w = a K, the entry of minimal p-valuation clears the others
    (it divides them in the local ring Z/p^k) and its own column is scaled
    into the annihilator.
    """
    M = p**k
    A = np.array(A, dtype=np.int64) % M
    n = A.shape[1] if A.ndim == 2 else 0
    K = np.eye(n, dtype=np.int64)
    if M == 1:
        return []
    for a in A:
        idx = np.nonzero(a)[0]
        if not idx.size:
            continue
        w = (a[idx] @ K[idx]) % M
        nz = np.nonzero(w)[0]
        if not nz.size:
            continue
        vals = [(_valuation(int(w[j]), p, k), int(j)) for j in nz]
        v, j = min(vals)
        pv = p**v
        uinv = pow(int(w[j]) // pv, -1, M)
        for i in nz:
            if i != j:
                f = (int(w[i]) // pv) * uinv % M
                K[:, i] = (K[:, i] - f * K[:, j]) % M
        K[:, j] = (K[:, j] * (M // pv)) % M
        K = K[:, K.any(axis=0)]
    return [[int(x) for x in col] for col in K.T]

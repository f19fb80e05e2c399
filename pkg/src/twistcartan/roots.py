"""Exact roots of unity and cyclotomic numbers.

A root of unity is stored as exponent/modulus in lowest terms, so equal
values always have equal fields.  Cyclotomic numbers are rational
coefficient vectors over powers of a primitive N-th root, reduced modulo
the N-th cyclotomic polynomial, which makes zero-testing exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import sympy


class RootOfUnity:
    """exp(2 pi i exponent/modulus), always reduced to the minimal modulus."""

    __slots__ = ("exponent", "modulus")

    def __init__(self, exponent: int = 0, modulus: int = 1):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        exponent %= modulus
        g = gcd(exponent, modulus)
        if g > 1:
            exponent //= g
            modulus //= g
        elif exponent == 0:
            modulus = 1
        self.exponent = exponent
        self.modulus = modulus

    @classmethod
    def from_turn(cls, turn) -> RootOfUnity:
        t = Fraction(turn)
        return cls(t.numerator, t.denominator)

    @property
    def turn(self) -> Fraction:
        return Fraction(self.exponent, self.modulus)

    def lift(self, modulus: int) -> int:
        """Exponent of this value as a power of exp(2 pi i/modulus)."""
        if modulus % self.modulus:
            raise ValueError(f"{self} is not in mu_{modulus}")
        return self.exponent * (modulus // self.modulus)

    def __mul__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        m = lcm(self.modulus, other.modulus)
        return RootOfUnity(self.exponent * (m // self.modulus) + other.exponent * (m // other.modulus), m)

    def __truediv__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self * other.conj()

    def __pow__(self, k: int):
        return RootOfUnity(self.exponent * k, self.modulus)

    def conj(self) -> RootOfUnity:
        return RootOfUnity(-self.exponent, self.modulus)

    inverse = conj

    def is_one(self) -> bool:
        return self.exponent == 0

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self.exponent == other.exponent and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.exponent, self.modulus))

    def __lt__(self, other):
        return self.turn < other.turn

    def sort_key(self):
        return self.turn

    def __str__(self):
        return f"{self.exponent}/{self.modulus}"

    def __repr__(self):
        return f"RootOfUnity({self.exponent}, {self.modulus})"

    def to_complex(self) -> complex:
        # display only; never used in a decision
        import cmath

        return cmath.exp(2j * cmath.pi * self.exponent / self.modulus)


ONE = RootOfUnity(0, 1)


def parse_root(text: str) -> RootOfUnity:
    e, _, m = text.partition("/")
    return RootOfUnity(int(e), int(m) if m else 1)


def nth_roots(value: RootOfUnity, n: int) -> list[RootOfUnity]:
    """All z with z**n == value, sorted by exponent turn."""
    t = value.turn
    return sorted((RootOfUnity.from_turn((t + k) / n) for k in range(n)), key=RootOfUnity.sort_key)


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    # low degree first
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce(coeffs: list, n: int) -> tuple:
    phi = _cyclotomic_coeffs(n)
    d = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, d - 1, -1):
        a = c[i]
        if a:
            for j in range(d + 1):
                c[i - d + j] -= a * phi[j]
    return tuple(Fraction(v) for v in c[:d])


class Cyclotomic:
    """Element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^(phi(N)-1)."""

    __slots__ = ("modulus", "coeffs")

    def __init__(self, modulus: int, coeffs):
        self.modulus = modulus
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_terms(cls, terms) -> Cyclotomic:
        """Build sum(coef * root) from an iterable of (coef, RootOfUnity)."""
        terms = [(Fraction(a), z) for a, z in terms]
        n = 1
        for _, z in terms:
            n = lcm(n, z.modulus)
        raw = [Fraction(0)] * n
        for a, z in terms:
            raw[z.lift(n)] += a
        return cls(n, _reduce(raw, n))

    @classmethod
    def rational(cls, a) -> Cyclotomic:
        return cls.from_terms([(a, ONE)])

    def lifted(self, n: int) -> Cyclotomic:
        if n % self.modulus:
            raise ValueError("can only lift to a multiple of the modulus")
        step = n // self.modulus
        raw = [Fraction(0)] * n
        for k, a in enumerate(self.coeffs):
            raw[k * step] += a
        return Cyclotomic(n, _reduce(raw, n))

    def _common(self, other):
        n = lcm(self.modulus, other.modulus)
        return self.lifted(n), other.lifted(n), n

    def __add__(self, other):
        a, b, n = self._common(other)
        return Cyclotomic(n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    def __sub__(self, other):
        a, b, n = self._common(other)
        return Cyclotomic(n, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __mul__(self, other):
        if isinstance(other, RootOfUnity):
            other = Cyclotomic.from_terms([(1, other)])
        elif not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        a, b, n = self._common(other)
        raw = [Fraction(0)] * n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        raw[(i + j) % n] += x * y
        return Cyclotomic(n, _reduce(raw, n))

    __rmul__ = __mul__

    def conj(self) -> Cyclotomic:
        n = self.modulus
        raw = [Fraction(0)] * n
        for k, a in enumerate(self.coeffs):
            raw[(-k) % n] += a
        return Cyclotomic(n, _reduce(raw, n))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational_value(self):
        """The value as a Fraction if it is rational, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_positive(self) -> bool:
        r = self.rational_value()
        return r is not None and r > 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None

    def __repr__(self):
        terms = [f"{a}*z^{k}" for k, a in enumerate(self.coeffs) if a]
        return f"Cyclotomic[{self.modulus}]({' + '.join(terms) or '0'})"

"""Univariate polynomials over Q in the module parameter ``lam``.

These are the coefficients of the differential-polynomial kernel: exact
rationals when the module parameter is fixed, honest polynomials when it is
kept symbolic.  Degree-0 polynomials behave like plain Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Rat = Union[int, Fraction]


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise TypeError(f"expected an exact rational, got {type(q).__name__}")


class LamPoly:
    """Immutable polynomial in ``lam`` with Fraction coefficients.

    ``coeffs[i]`` is the coefficient of ``lam**i``; trailing zeros are
    stripped, so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rat] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("LamPoly is immutable")

    @staticmethod
    def const(q: Rat) -> "LamPoly":
        return LamPoly((q,))

    @staticmethod
    def lam() -> "LamPoly":
        return LamPoly((0, 1))

    @staticmethod
    def zero() -> "LamPoly":
        return LamPoly()

    @staticmethod
    def one() -> "LamPoly":
        return LamPoly((1,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self!r} is not a constant")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __add__(self, other) -> "LamPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return LamPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LamPoly":
        return LamPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "LamPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LamPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "LamPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return LamPoly()
        if len(a) == 1:
            return LamPoly(tuple(a[0] * c for c in b))
        if len(b) == 1:
            return LamPoly(tuple(c * b[0] for c in a))
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return LamPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LamPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == LamPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"LamPoly({self.coeffs})"

    def eval(self, lam_value: Rat) -> Fraction:
        """Evaluate at a rational value of lam (Horner)."""
        x = _as_fraction(lam_value)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "LamPoly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return LamPoly(tuple(c / lead for c in self.coeffs))

    def divmod(self, other: "LamPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        div = other.coeffs
        dd = len(div) - 1
        lead = div[-1]
        quo = [Fraction(0)] * max(0, len(rem) - dd)
        while len(rem) - 1 >= dd and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < dd:
                break
            shift = len(rem) - 1 - dd
            factor = rem[-1] / lead
            quo[shift] = factor
            for i, c in enumerate(div):
                rem[shift + i] -= factor * c
            rem.pop()
        return LamPoly(quo), LamPoly(rem)

    def gcd(self, other: "LamPoly") -> "LamPoly":
        """Monic gcd over Q (Euclid)."""
        a, b = self, other
        while not b.is_zero():
            _, r = a.divmod(b)
            a, b = b, r
        return a.monic()


def gcd_all(polys: Iterable[LamPoly]) -> LamPoly:
    acc = LamPoly.zero()
    for p in polys:
        acc = acc.gcd(p)
        if acc.is_constant() and not acc.is_zero():
            return acc
    return acc


def rational_roots(p: LamPoly) -> list[Fraction]:
    """All rational roots of p, ascending.  p must be nonzero."""
    if p.is_zero():
        raise ValueError("the zero polynomial has every root")
    coeffs = list(p.coeffs)
    roots = []
    # factor out lam^v
    v = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        v += 1
    if v:
        roots.append(Fraction(0))
    if len(coeffs) > 1:
        from math import gcd as igcd

        den = 1
        for c in coeffs:
            den = den * c.denominator // igcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        a0, an = abs(ints[0]), abs(ints[-1])
        q = LamPoly(coeffs)
        for num in _divisors(a0):
            for d in _divisors(an):
                for cand in (Fraction(num, d), Fraction(-num, d)):
                    if cand not in roots and q.eval(cand) == 0:
                        roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


ZERO = LamPoly.zero()
ONE = LamPoly.one()
LAM = LamPoly.lam()


def _coerce(x):
    if isinstance(x, LamPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LamPoly.const(x)
    return NotImplemented

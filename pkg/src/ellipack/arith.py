"""Exact number substrate: rationals, real quadratic surds, Farey navigation
and continued fractions.

Rationals are :class:`fractions.Fraction` throughout.  A :class:`Surd` is an
element ``a + b*sqrt(r)`` of a real quadratic field; it appears whenever a
supremum is fixed by the volume constraint (e.g. ``1/sqrt(10)``) or when an
ellipsoid has an irrational size such as the ball ``B(sqrt 5)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, "Surd"]


def _square_free_split(value: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``value == s*s*f`` and ``f`` square-free."""
    if value <= 0:
        raise ValueError("expected a positive integer")
    s, f = 1, 1
    rest = value
    p = 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            f *= p
        p += 1 if p == 2 else 2
    return s, f * rest


@dataclass(frozen=True, eq=False)
class Surd:
    """``rational + coeff*sqrt(radicand)`` with a square-free radicand > 1.

    Arithmetic is closed within one field; mixing radicands raises.  Results
    whose irrational part cancels are returned as plain ``Fraction``.
    """

    rational: Fraction
    coeff: Fraction
    radicand: int

    def __post_init__(self):
        if self.coeff == 0 or self.radicand <= 1:
            raise ValueError("use Fraction for rational values")
        if _square_free_split(self.radicand)[0] != 1:
            raise ValueError(f"radicand {self.radicand} is not square-free")

    @staticmethod
    def make(rational, coeff, radicand: int) -> Number:
        rational, coeff = Fraction(rational), Fraction(coeff)
        if coeff == 0 or radicand == 1:
            return rational + coeff
        s, f = _square_free_split(radicand)
        coeff *= s
        if f == 1:
            return rational + coeff
        return Surd(rational, coeff, f)

    def _parts(self, other) -> tuple[Fraction, Fraction]:
        if isinstance(other, Surd):
            if other.radicand != self.radicand:
                raise ValueError(
                    f"cannot combine sqrt({self.radicand}) with sqrt({other.radicand})"
                )
            return other.rational, other.coeff
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        raise TypeError(type(other).__name__)

    def __add__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return Surd.make(self.rational + a, self.coeff + b, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.rational, -self.coeff, self.radicand)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return Surd.make(self.rational - a, self.coeff - b, self.radicand)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        r = self.radicand
        return Surd.make(
            self.rational * a + self.coeff * b * r,
            self.rational * b + self.coeff * a,
            r,
        )

    __rmul__ = __mul__

    def _inverse(self) -> Number:
        norm = self.rational ** 2 - self.coeff ** 2 * self.radicand
        return Surd.make(self.rational / norm, -self.coeff / norm, self.radicand)

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other._inverse()
        if isinstance(other, (int, Rational)):
            return Surd.make(self.rational / other, self.coeff / other, self.radicand)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self._inverse() * Fraction(other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result: Number = Fraction(1)
        for _ in range(exponent):
            result = self * result
        return result

    def sign(self) -> int:
        a, b, r = self.rational, self.coeff, self.radicand
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        # opposite signs: the larger of a^2 and b^2 r wins
        if a > 0:
            return 1 if a * a > b * b * r else -1
        return 1 if b * b * r > a * a else -1

    def _cmp(self, other) -> int:
        diff = self - other
        return diff.sign() if isinstance(diff, Surd) else (diff > 0) - (diff < 0)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return (self.rational, self.coeff, self.radicand) == (
                other.rational, other.coeff, other.radicand)
        if isinstance(other, (int, Rational)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.rational, self.coeff, self.radicand))

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.rational) + float(self.coeff) * self.radicand ** 0.5

    def __str__(self):
        root = f"sqrt({self.radicand})"
        if self.coeff == 1:
            irr = root
        elif self.coeff == -1:
            irr = "-" + root
        else:
            irr = f"{format_number(self.coeff)}*{root}"
        if self.rational == 0:
            return irr
        sep = "" if irr.startswith("-") else "+"
        return f"{format_number(self.rational)}{sep}{irr}"

    __repr__ = __str__


def sqrt_exact(value) -> Number:
    """Exact square root of a nonnegative rational."""
    q = Fraction(value)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return Fraction(0)
    num = q.numerator * q.denominator
    s, f = _square_free_split(num)
    return Surd.make(0, Fraction(s, q.denominator), f)


def square(x: Number) -> Number:
    return x * x


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_SURD_RE = re.compile(r"^\s*(?:([+-]?\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(\d+(?:/\d+)?)\s*\)\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimals and other spellings are rejected."""
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ValueError(f"malformed rational: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_number(text: str) -> Number:
    """Parse a rational, or ``c*sqrt(r)`` / ``sqrt(r)`` with rational c, r."""
    try:
        return parse_rational(text)
    except ValueError:
        pass
    match = _SURD_RE.match(text)
    if not match:
        raise ValueError(f"malformed number: {text!r}")
    coeff = parse_rational(match.group(1)) if match.group(1) else Fraction(1)
    return coeff * sqrt_exact(parse_rational(match.group(2)))


def format_number(x: Number) -> str:
    if isinstance(x, Surd):
        return str(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rational(x: Number) -> Fraction:
    if isinstance(x, Surd):
        raise ValueError(f"{x} is irrational")
    return Fraction(x)


# --- Farey / Stern-Brocot ---------------------------------------------------

def is_farey_adjacent(a: Fraction, b: Fraction) -> bool:
    return abs(a.numerator * b.denominator - b.numerator * a.denominator) == 1


def _check_unit(f: Fraction) -> None:
    if not 0 <= f <= 1:
        raise ValueError(f"{format_number(f)} is outside [0, 1]")


def mediant(a: Fraction, b: Fraction) -> Fraction:
    """The mediant (p+p')/(q+q') of two Farey neighbours in [0, 1]."""
    a, b = Fraction(a), Fraction(b)
    _check_unit(a)
    _check_unit(b)
    if not is_farey_adjacent(a, b):
        raise ValueError(f"{format_number(a)} and {format_number(b)} are not Farey neighbours")
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


def farey_parents(f: Fraction) -> tuple[Fraction, Fraction]:
    """The two Farey neighbours whose mediant is ``f``.

    Ordered by increasing denominator (by value when denominators tie, which
    only happens for 1/2).  Uses a modular inverse, so the cost is
    logarithmic in the denominator.
    """
    f = Fraction(f)
    m, n = f.numerator, f.denominator
    if not 0 < m < n:
        raise ValueError(f"{format_number(f)} has no Farey parents")
    # left neighbour a/b: m*b - a*n = 1 with 0 < b < n
    b = pow(m, -1, n)
    a = (m * b - 1) // n
    left = Fraction(a, b)
    right = Fraction(m - a, n - b)
    return tuple(sorted((left, right), key=lambda x: (x.denominator, x)))


# --- continued fractions ----------------------------------------------------

def continued_fraction(x) -> list[int]:
    """Standard ('+'-sign) continued fraction of a rational ``x >= 1``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("continued fraction needs a positive input")
    if x < 1:
        raise ValueError("expected an input >= 1; invert it first")
    terms = []
    p, q = x.numerator, x.denominator
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    return terms


def evaluate_continued_fraction(terms: list[int]) -> Fraction:
    if not terms:
        raise ValueError("empty expansion")
    value = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        value = a + 1 / value
    return value


def coprime_pair(m: int, n: int) -> tuple[int, int]:
    if not (isinstance(m, int) and isinstance(n, int)):
        raise TypeError("expected integers")
    if m <= 0 or n <= 0:
        raise ValueError(f"expected positive integers, got ({m}, {n})")
    if gcd(m, n) != 1:
        raise ValueError(f"({m}, {n}) is not coprime")
    return m, n


def is_perfect_square(q: Fraction) -> bool:
    q = Fraction(q)
    return q >= 0 and isqrt(q.numerator) ** 2 == q.numerator and \
        isqrt(q.denominator) ** 2 == q.denominator

"""Exact arithmetic on Z[1/p], p-adic norms, characters and balls.

Every point of Q_p used in this package has a finite p-adic expansion to
the right of the point, i.e. lives in the ring Z[1/p].  Such a number is
stored as ``mantissa * p**(-exponent)`` with ``exponent >= 0`` minimal.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

INF = math.inf

Number = Union[int, Fraction, "PAdicRational"]


class PrimeMismatchError(ValueError):
    """Raised when two objects built over different primes are combined."""


def _check_same_prime(p: int, q: int) -> None:
    if p != q:
        raise PrimeMismatchError(f"prime mismatch: {p} != {q}")


def _int_valuation(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def _power_of(d: int, p: int) -> int | None:
    """Return e with d == p**e, or None."""
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    return e if d == 1 else None


@dataclass(frozen=True)
class PAdicRational:
    """An element ``mantissa / prime**exponent`` of Z[1/p] in reduced form."""

    prime: int
    mantissa: int
    exponent: int = 0

    def __post_init__(self):
        p, m, e = self.prime, self.mantissa, self.exponent
        if p < 2:
            raise ValueError(f"prime must be >= 2, got {p}")
        if m == 0:
            e = 0
        elif e < 0:
            m, e = m * p ** (-e), 0
        else:
            while e > 0 and m % p == 0:
                m //= p
                e -= 1
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def of(cls, p: int, value: Number) -> "PAdicRational":
        """Coerce an int, a p-ary Fraction or a PAdicRational."""
        if isinstance(value, PAdicRational):
            _check_same_prime(p, value.prime)
            return value
        if isinstance(value, int):
            return cls(p, value, 0)
        q = Fraction(value)
        e = _power_of(q.denominator, p)
        if e is None:
            raise ValueError(f"{q} is not in Z[1/{p}]")
        return cls(p, q.numerator, e)

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> "PAdicRational":
        """Parse ``"m/p^e"`` (or a bare integer, which needs ``p``)."""
        s = text.strip()
        match = re.fullmatch(r"([+-]?\d+)\s*/\s*(\d+)\s*\^\s*(\d+)", s)
        if match:
            m, q, e = (int(g) for g in match.groups())
            if p is not None and q != p:
                raise PrimeMismatchError(f"{text!r} is written over prime {q}, expected {p}")
            return cls(q, m, e)
        if re.fullmatch(r"[+-]?\d+", s) and p is not None:
            return cls(p, int(s), 0)
        raise ValueError(f"cannot parse p-adic rational {text!r}")

    def __str__(self) -> str:
        return f"{self.mantissa}/{self.prime}^{self.exponent}"

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, self.prime**self.exponent)

    def _coerce(self, other) -> "PAdicRational":
        if isinstance(other, PAdicRational):
            _check_same_prime(self.prime, other.prime)
            return other
        if isinstance(other, (int, Fraction)):
            return PAdicRational.of(self.prime, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.prime
        e = max(self.exponent, other.exponent)
        m = self.mantissa * p ** (e - self.exponent) + other.mantissa * p ** (e - other.exponent)
        return PAdicRational(p, m, e)

    __radd__ = __add__

    def __neg__(self):
        return PAdicRational(self.prime, -self.mantissa, self.exponent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdicRational(self.prime, self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return self.mantissa != 0

    def shift(self, k: int) -> "PAdicRational":
        """Multiply by ``p**k``."""
        return PAdicRational(self.prime, self.mantissa, self.exponent - k)

    def valuation(self) -> int | float:
        return valuation(self)

    def norm(self) -> Fraction:
        return norm(self)


def valuation(x: PAdicRational) -> int | float:
    """Exponent gamma with ``|x|_p = p**(-gamma)``; ``math.inf`` for zero."""
    if x.mantissa == 0:
        return INF
    return _int_valuation(x.mantissa, x.prime) - x.exponent


def norm(x: PAdicRational) -> Fraction:
    if x.mantissa == 0:
        return Fraction(0)
    return Fraction(x.prime) ** (-valuation(x))


def frac(x: PAdicRational) -> Fraction:
    """p-adic fractional part, the sum of the digits at negative positions."""
    d = x.prime**x.exponent
    return Fraction(x.mantissa % d, d)


def character(x: PAdicRational) -> complex:
    """The additive character ``exp(2*pi*i*{x}_p)``."""
    r = frac(x)
    if r == 0:
        return 1 + 0j
    # exact values at the quarter turns keep real inputs real
    if r == Fraction(1, 2):
        return -1 + 0j
    if r == Fraction(1, 4):
        return 1j
    if r == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * math.pi * float(r))


def digits(x: PAdicRational, start: int, stop: int) -> list[int]:
    """Digits ``a_i`` of the p-adic expansion of x for ``start <= i < stop``.

    Works for negative x too (their expansions are eventually p-1 periodic).
    """
    p = x.prime
    if stop <= start:
        return []
    # x * p**(-start) is an integer mod p**(stop-start) once start <= -exponent
    y = x.shift(-start)
    if y.exponent:
        # positions below start are nonzero; drop them
        y = PAdicRational(p, y.mantissa - y.mantissa % p**y.exponent, y.exponent)
    n = y.mantissa % p ** (stop - start)
    out = []
    for _ in range(stop - start):
        n, r = divmod(n, p)
        out.append(r)
    return out


@dataclass(frozen=True)
class Ball:
    """The disc ``{x : |x - center|_p <= p**(-radius_exp)}``.

    The center is canonicalized to the unique member whose expansion
    terminates and has no digits at positions ``>= radius_exp``, so two
    Ball objects are equal exactly when they are the same set.
    """

    prime: int
    center: PAdicRational
    radius_exp: int

    def __post_init__(self):
        p, k = self.prime, self.radius_exp
        c = PAdicRational.of(p, self.center)
        y = c.shift(-k)
        canon = PAdicRational(p, y.mantissa % p**y.exponent, y.exponent).shift(k)
        object.__setattr__(self, "center", canon)

    def __contains__(self, x: PAdicRational) -> bool:
        x = PAdicRational.of(self.prime, x)
        return valuation(x - self.center) >= self.radius_exp

    def measure(self) -> Fraction:
        return ball_measure(self)

    def children(self) -> list["Ball"]:
        return ball_children(self)

    def parent(self) -> "Ball":
        return Ball(self.prime, self.center, self.radius_exp - 1)

    def sort_key(self) -> tuple:
        return (self.center.to_fraction(), self.radius_exp)

    def to_json(self) -> dict:
        return {"center": str(self.center), "radius_exp": self.radius_exp}


def ball_measure(b: Ball) -> Fraction:
    """Haar measure with the unit ball normalized to 1."""
    return Fraction(b.prime) ** (-b.radius_exp)


DISJOINT = "disjoint"
EQUAL = "equal"
A_IN_B = "a_in_b"
B_IN_A = "b_in_a"


def ball_relation(a: Ball, b: Ball) -> str:
    """One of ``"disjoint"``, ``"equal"``, ``"a_in_b"``, ``"b_in_a"``."""
    _check_same_prime(a.prime, b.prime)
    if a.radius_exp == b.radius_exp:
        return EQUAL if a.center == b.center else DISJOINT
    if a.radius_exp > b.radius_exp:
        return A_IN_B if a.center in b else DISJOINT
    return B_IN_A if b.center in a else DISJOINT


def ball_children(b: Ball) -> list[Ball]:
    """The p maximal proper sub-balls, ordered by the digit at position radius_exp."""
    p, k = b.prime, b.radius_exp
    step = PAdicRational(p, 1).shift(k)
    return [Ball(p, b.center + step * d, k + 1) for d in range(p)]


def unit_ball(p: int) -> Ball:
    return Ball(p, PAdicRational(p, 0), 0)

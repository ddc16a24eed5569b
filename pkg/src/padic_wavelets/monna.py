"""The Monna map rho: Q_p -> R_+, sum a_i p^i  ->  sum a_i p^(-i-1).

Values are exact Fractions.  Negative elements of Z[1/p] have expansions
ending in an infinite run of the digit p-1; their image is summed in closed
form.  rho is not injective: every p-ary rational r > 0 has two preimages,
and ``rho_section`` always returns the one with a terminating expansion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .padic import Ball, PAdicRational, _power_of, norm


@dataclass(frozen=True)
class Interval:
    """Half-open ``[left, left + length)``."""

    left: Fraction
    length: Fraction

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("interval length must be positive")

    @property
    def right(self) -> Fraction:
        return self.left + self.length

    def __contains__(self, t) -> bool:
        return self.left <= t < self.right

    def contains_closed(self, t) -> bool:
        return self.left <= t <= self.right

    def overlap(self, other: "Interval") -> Fraction:
        return max(Fraction(0), min(self.right, other.right) - max(self.left, other.left))


def _rho_nonneg(p: int, m: int, e: int) -> Fraction:
    # digit t of m sits at position t - e and maps to p^(e - t - 1)
    total = Fraction(0)
    t = 0
    while m:
        m, d = divmod(m, p)
        if d:
            total += d * Fraction(p) ** (e - t - 1)
        t += 1
    return total


def rho(x: PAdicRational) -> Fraction:
    p, m, e = x.prime, x.mantissa, x.exponent
    if m >= 0:
        return _rho_nonneg(p, m, e)
    # x = (p^L + m)/p^e - p^(L-e); the second term is p-1 in every position >= L-e
    L = 0
    while p**L <= -m:
        L += 1
    return _rho_nonneg(p, p**L + m, e) + Fraction(p) ** (e - L)


def rho_nat(n: Fraction, p: int) -> int:
    """rho restricted to the representatives of Q_p/Z_p; a bijection onto N."""
    n = Fraction(n)
    if not 0 <= n < 1 or _power_of(n.denominator, p) is None:
        raise ValueError(f"{n} is not a canonical representative of Q_{p}/Z_{p}")
    r = rho(PAdicRational.of(p, n))
    assert r.denominator == 1
    return int(r)


def rho_section(r, p: int) -> PAdicRational:
    """The preimage of r with a terminating expansion, so ``rho(rho_section(r)) == r``."""
    r = Fraction(r)
    if r < 0:
        raise ValueError(f"{r} is negative")
    e = _power_of(r.denominator, p)
    if e is None:
        raise ValueError(f"denominator of {r} is not a power of {p}")
    # digit of r at position s becomes digit of x at position -s-1
    m = r.numerator
    x = PAdicRational(p, 0)
    t = 0
    while m:
        m, d = divmod(m, p)
        if d:
            x = x + PAdicRational(p, d).shift(-(t - e) - 1)
        t += 1
    return x


def ball_interval(b: Ball) -> Interval:
    """Image of a ball: its canonical center has no digits at positions >= radius_exp,
    so ``rho(c + p^k z) = rho(c) + p^-k rho(z)`` with ``rho(Z_p) = [0, 1]``."""
    return Interval(rho(b.center), b.measure())


def ball_image(m: int, n, k: int, p: int) -> Interval:
    """Image of the ball ``p^m n + p^k Z_p``; equals ``p^-m rho(n) + [0, p^-k)`` when k >= m."""
    n = PAdicRational.of(p, n)
    return ball_interval(Ball(p, n.shift(m), k))


def holder_gap(x: PAdicRational, y: PAdicRational) -> tuple[Fraction, Fraction]:
    """``(|rho(x) - rho(y)|, |x - y|_p)``; the first never exceeds the second."""
    return abs(rho(x) - rho(y)), norm(x - y)


def measure_preservation_check(b: Ball, samples: int = 0, rng=None) -> tuple[Fraction, Fraction]:
    """``(mu(b), length(rho(b)))``.

    With ``samples > 0`` also checks that random members of b land in the
    closed image interval and raises AssertionError otherwise.
    """
    iv = ball_interval(b)
    if samples:
        rng = rng or random.Random(0)
        p, k = b.prime, b.radius_exp
        for _ in range(samples):
            # Z[1/p] meets Z_p in the integers
            z = PAdicRational(p, rng.randint(-(p**8), p**8))
            member = b.center + z.shift(k)
            if not iv.contains_closed(rho(member)):
                raise AssertionError(f"{member} in ball but rho={rho(member)} outside {iv}")
    return b.measure(), iv.length

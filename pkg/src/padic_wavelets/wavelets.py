"""The orthonormal p-adic wavelet basis psi_{gamma j n} on a finite window.

``psi_{gamma j n}(x) = p**(-gamma/2) chi(p**(gamma-1) j x) Omega(|p**gamma x - n|_p)``
with gamma an integer, j in 1..p-1 and n a representative of Q_p/Z_p.

A window (V, M) is the space of functions supported in the ball of radius
p**V about 0 and constant on balls of radius p**(-M).  It is spanned by the
normalized indicator of the big ball (the scaling function) together with
the p**(V+M) - 1 wavelets whose support and pieces fit the window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lcf import PiecewiseConstant, inner_product
from .padic import Ball, PAdicRational, _power_of, character


class WindowError(ValueError):
    """A function does not fit the requested (V, M) window."""


@dataclass(frozen=True, order=True)
class WaveletIndex:
    gamma: int
    j: int
    n: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "n", Fraction(self.n))

    def check(self, p: int) -> None:
        if not 1 <= self.j <= p - 1:
            raise ValueError(f"j={self.j} outside 1..{p - 1}")
        if not 0 <= self.n < 1 or _power_of(self.n.denominator, p) is None:
            raise ValueError(f"n={self.n} is not a canonical representative of Q_{p}/Z_{p}")

    def n_padic(self, p: int) -> PAdicRational:
        return PAdicRational.of(p, self.n)

    def n_parts(self, p: int) -> tuple[int, int]:
        """``(numerator, e)`` with n = numerator / p**e."""
        return self.n.numerator, _power_of(self.n.denominator, p)

    def support(self, p: int) -> Ball:
        """The ball p**(-gamma) n + p**(-gamma) Z_p."""
        return Ball(p, self.n_padic(p).shift(-self.gamma), -self.gamma)


def _natural_image(n: Fraction, p: int) -> int:
    # digit reversal of n = sum n_i p^-i, i.e. the Monna image of n
    num, e = n.numerator, _power_of(n.denominator, p)
    out = 0
    for _ in range(e):
        num, r = divmod(num, p)
        out = out * p + r
    return out


def order_key(idx: WaveletIndex, p: int) -> tuple:
    """gamma ascending, then n by its natural-number image, then j."""
    return (idx.gamma, _natural_image(idx.n, p), idx.j)


def mother_psi(p: int) -> PiecewiseConstant:
    """``chi(x/p) Omega(|x|_p)``; on the child of Z_p with first digit k it equals exp(2 pi i k / p)."""
    return synthesize(WaveletIndex(0, 1, Fraction(0)), p)


def synthesize(idx: WaveletIndex, p: int) -> PiecewiseConstant:
    idx.check(p)
    amp = float(p) ** (-idx.gamma / 2)
    freq = PAdicRational(p, idx.j).shift(idx.gamma - 1)
    pieces = [(b, amp * character(freq * b.center)) for b in idx.support(p).children()]
    return PiecewiseConstant(p, pieces, check=False)


def scaling_function(p: int, V: int) -> PiecewiseConstant:
    """Unit-norm indicator of the ball of radius p**V about 0."""
    return PiecewiseConstant.indicator(Ball(p, 0, -V), float(p) ** (-V / 2))


def index_set(V: int, M: int, p: int) -> list[WaveletIndex]:
    """All wavelets fitting window (V, M); there are p**(V+M) - 1 of them."""
    if V + M < 0:
        raise WindowError(f"empty window: V + M = {V + M} < 0")
    out = []
    for gamma in range(1 - M, V + 1):
        e = V - gamma
        ns = sorted((Fraction(m, p**e) for m in range(p**e)), key=lambda n: _natural_image(n, p))
        for n in ns:
            for j in range(1, p):
                out.append(WaveletIndex(gamma, j, n))
    return out


def window_grid(V: int, M: int, p: int) -> list[Ball]:
    """The p**(V+M) balls of level M inside the ball of radius p**V."""
    return [Ball(p, PAdicRational(p, r, V), M) for r in range(p ** (V + M))]


@dataclass
class WaveletExpansion:
    prime: int
    V: int
    M: int
    scaling_coeff: complex = 0j
    coeffs: dict[WaveletIndex, complex] = field(default_factory=dict)

    @property
    def big_ball(self) -> Ball:
        return Ball(self.prime, 0, -self.V)

    def sorted_items(self) -> list[tuple[WaveletIndex, complex]]:
        return sorted(self.coeffs.items(), key=lambda kv: order_key(kv[0], self.prime))

    def energy(self) -> float:
        return abs(self.scaling_coeff) ** 2 + sum(abs(c) ** 2 for c in self.coeffs.values())

    def scale(self, c: complex) -> "WaveletExpansion":
        return WaveletExpansion(
            self.prime, self.V, self.M, c * self.scaling_coeff, {k: c * v for k, v in self.coeffs.items()}
        )


def check_window(f: PiecewiseConstant, V: int, M: int) -> None:
    if V + M < 0:
        raise WindowError(f"empty window: V + M = {V + M} < 0")
    big = Ball(f.prime, 0, -V)
    for b, _ in f.pieces:
        if b.radius_exp < -V or b.center not in big:
            raise WindowError(f"piece {b.to_json()} lies outside the ball of radius {f.prime}^{V}")
        if b.radius_exp > M:
            raise WindowError(f"piece {b.to_json()} is finer than resolution {f.prime}^-{M}")


def analyze(f: PiecewiseConstant, V: int, M: int) -> WaveletExpansion:
    check_window(f, V, M)
    p = f.prime
    c0 = inner_product(f, scaling_function(p, V))
    coeffs = {idx: inner_product(f, synthesize(idx, p)) for idx in index_set(V, M, p)}
    return WaveletExpansion(p, V, M, c0, coeffs)


def reconstruct(e: WaveletExpansion) -> PiecewiseConstant:
    """Sum of the expansion, accumulated on the level-M grid of the window."""
    p, V = e.prime, e.V
    finest = max([e.M] + [1 - idx.gamma for idx in e.coeffs])
    cells: dict[Ball, complex] = {}
    if e.scaling_coeff:
        for b in window_grid(V, finest, p):
            cells[b] = cells.get(b, 0j) + e.scaling_coeff * p ** (-V / 2)
    for idx, c in e.coeffs.items():
        if not c:
            continue
        for piece, v in synthesize(idx, p).pieces:
            for b in _descend(piece, finest):
                cells[b] = cells.get(b, 0j) + c * v
    return PiecewiseConstant(p, cells.items(), check=False)


def _descend(ball: Ball, level: int) -> list[Ball]:
    out = [ball]
    while out[0].radius_exp < level:
        out = [c for b in out for c in b.children()]
    return out


def parseval_defect(f: PiecewiseConstant, V: int, M: int) -> float:
    e = analyze(f, V, M)
    return abs(f.norm_sq() - e.energy())


def omega_coefficient_sq(idx: WaveletIndex, p: int) -> Fraction:
    """Exact ``|<Omega, psi_idx>|**2``: p**(-gamma) for gamma >= 1 and n = 0, else 0."""
    if idx.gamma >= 1 and idx.n == 0:
        return Fraction(1, p**idx.gamma)
    return Fraction(0)


def omega_parseval_partial(p: int, G: int) -> Fraction:
    """Sum of ``|<Omega, psi>|**2`` over wavelets with 1 <= gamma <= G, exactly.

    Only n = 0 contributes, so the other translates are skipped.
    """
    return sum(
        (omega_coefficient_sq(WaveletIndex(g, j), p) for g in range(1, G + 1) for j in range(1, p)),
        Fraction(0),
    )

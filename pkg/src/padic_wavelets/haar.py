"""Haar wavelets on R_+ and their 2-adic counterparts under the Monna map.

Real-side functions are dyadic step functions on [0, 2^K) with cells of
width 2^-M.  ``pullback`` composes with rho, carrying each cell to the
2-adic ball that rho maps onto it.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lcf import PiecewiseConstant, max_abs_difference
from .monna import rho_nat, rho_section
from .padic import Ball
from .vladimirov import AlphaParam, evaluate_direct
from .wavelets import WaveletIndex, analyze, synthesize

P = 2


@dataclass(frozen=True, order=True)
class HaarIndex:
    gamma: int
    n: int

    def support(self) -> tuple[Fraction, Fraction]:
        w = Fraction(2) ** self.gamma
        return w * self.n, w * (self.n + 1)


@dataclass
class DyadicStepFn:
    K: int
    M: int
    values: np.ndarray

    def __post_init__(self):
        if self.K < 0 or self.M < 0:
            raise ValueError("K and M must be nonnegative")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (2 ** (self.K + self.M),):
            raise ValueError(f"expected {2 ** (self.K + self.M)} values, got shape {self.values.shape}")

    @property
    def cell_width(self) -> Fraction:
        return Fraction(1, 2**self.M)

    def __call__(self, t) -> complex:
        t = Fraction(t)
        if not 0 <= t < 2**self.K:
            return 0j
        return complex(self.values[math.floor(t * 2**self.M)])

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2)) / 2**self.M

    def to_json(self) -> dict:
        return {"K": self.K, "M": self.M, "values": [[v.real + 0.0, v.imag + 0.0] for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "DyadicStepFn":
        vals = [complex(float(a), float(b)) for a, b in data["values"]]
        return cls(int(data["K"]), int(data["M"]), np.array(vals, dtype=complex))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def inner_product_real(f: DyadicStepFn, g: DyadicStepFn) -> complex:
    if (f.K, f.M) != (g.K, g.M):
        raise ValueError("step functions live on different grids")
    return complex(np.vdot(g.values, f.values)) / 2**f.M


def haar_mother(t) -> int:
    t = Fraction(t)
    if 0 <= t < Fraction(1, 2):
        return 1
    if Fraction(1, 2) <= t < 1:
        return -1
    return 0


def haar_fn(idx: HaarIndex, t) -> float:
    """``2^(-gamma/2) Psi(2^-gamma t - n)``."""
    s = Fraction(t) / Fraction(2) ** idx.gamma - idx.n
    return 2.0 ** (-idx.gamma / 2) * haar_mother(s)


def haar_indices(K: int, M: int) -> list[HaarIndex]:
    return [HaarIndex(g, n) for g in range(1 - M, K + 1) for n in range(2 ** (K - g))]


@dataclass
class HaarCoefficients:
    K: int
    M: int
    scaling: complex
    coeffs: dict[HaarIndex, complex]


def haar_analyze(f: DyadicStepFn) -> HaarCoefficients:
    """Orthonormal Haar pyramid, O(N)."""
    s = f.values * 2.0 ** (-f.M / 2)
    coeffs = {}
    gamma = 1 - f.M
    r2 = math.sqrt(2.0)
    while len(s) > 1:
        even, odd = s[0::2], s[1::2]
        for n, d in enumerate((even - odd) / r2):
            coeffs[HaarIndex(gamma, n)] = complex(d)
        s = (even + odd) / r2
        gamma += 1
    return HaarCoefficients(f.K, f.M, complex(s[0]), coeffs)


def haar_synthesize(h: HaarCoefficients) -> DyadicStepFn:
    s = np.array([h.scaling], dtype=complex)
    r2 = math.sqrt(2.0)
    for gamma in range(h.K, -h.M, -1):
        d = np.array([h.coeffs.get(HaarIndex(gamma, n), 0j) for n in range(len(s))], dtype=complex)
        out = np.empty(2 * len(s), dtype=complex)
        out[0::2] = (s + d) / r2
        out[1::2] = (s - d) / r2
        s = out
    return DyadicStepFn(h.K, h.M, s * 2.0 ** (h.M / 2))


def haar_coefficient_direct(f: DyadicStepFn, idx: HaarIndex) -> complex:
    """``<f, Psi_idx>`` by summing over the cells, evaluating Psi at cell midpoints."""
    w = f.cell_width
    total = 0j
    for j, v in enumerate(f.values):
        mid = (j + Fraction(1, 2)) * w
        h = haar_fn(idx, mid)
        if h:
            total += v * h
    return total * float(w)


def cell_ball(j: int, M: int) -> Ball:
    """The 2-adic ball mapped by rho onto [j 2^-M, (j+1) 2^-M)."""
    return Ball(P, rho_section(Fraction(j, 2**M), P), M)


def pullback(f: DyadicStepFn) -> PiecewiseConstant:
    """``x -> f(rho(x))`` as a 2-adic step function; preserves the L^2 norm."""
    return PiecewiseConstant(P, [(cell_ball(j, f.M), v) for j, v in enumerate(f.values)], check=False)


def haar_as_step(idx: HaarIndex, K: int, M: int) -> DyadicStepFn:
    w = Fraction(1, 2**M)
    vals = [haar_fn(idx, (j + Fraction(1, 2)) * w) for j in range(2 ** (K + M))]
    return DyadicStepFn(K, M, np.array(vals, dtype=complex))


def bridge_phase(n: Fraction) -> complex:
    """``e^{i pi n}`` for n in [0, 1): the value of chi(n/2), read as (-1)^n."""
    return cmath.exp(1j * math.pi * float(n))


def window_for(gamma: int, n: Fraction) -> tuple[int, int]:
    """Smallest (K, M) holding Psi_{gamma, rho(n)}."""
    right = Fraction(2) ** gamma * (rho_nat(n, P) + 1)
    K = 0
    while 2**K < right:
        K += 1
    return K, max(0, 1 - gamma)


def theorem7_residual(gamma: int, n, window: tuple[int, int] | None = None) -> float:
    """Sup distance between rho* Psi_{gamma, rho(n)} and conj(e^{i pi n}) psi_{gamma 1 n}."""
    n = Fraction(n)
    K, M = window or window_for(gamma, n)
    need_K, need_M = window_for(gamma, n)
    if K < need_K or M < need_M:
        raise ValueError(f"Psi_({gamma},{rho_nat(n, P)}) does not fit window K={K}, M={M}")
    lhs = pullback(haar_as_step(HaarIndex(gamma, rho_nat(n, P)), K, M))
    rhs = synthesize(WaveletIndex(gamma, 1, n), P).scale(bridge_phase(n).conjugate())
    return max_abs_difference(lhs, rhs)


def real_dalpha(f: DyadicStepFn, alpha: float, t) -> complex:
    """``rho*^-1 D^alpha rho* f`` at t, evaluated at the terminating preimage of t."""
    a = AlphaParam(alpha, P)
    x = rho_section(Fraction(t), P)
    return evaluate_direct(pullback(f), x, a)


def n_from_nat(N: int) -> Fraction:
    """Inverse of rho_nat for p = 2: the representative n with rho(n) = N."""
    return rho_section(N, P).to_fraction()


def padic_index_for(idx: HaarIndex) -> tuple[WaveletIndex, complex]:
    """The 2-adic wavelet matched with Psi_idx, and the phase with
    ``rho* Psi_idx = conj(phase) * psi``."""
    n = n_from_nat(idx.n)
    return WaveletIndex(idx.gamma, 1, n), bridge_phase(n)


def commutation_residual(f: DyadicStepFn) -> float:
    """Largest mismatch between the Haar coefficients of f and the phase-adjusted
    2-adic coefficients of its pullback, scaling coefficients included."""
    h = haar_analyze(f)
    e = analyze(pullback(f), f.K, f.M)
    worst = abs(h.scaling - e.scaling_coeff)
    for hidx, c in h.coeffs.items():
        widx, phase = padic_index_for(hidx)
        worst = max(worst, abs(phase * e.coeffs[widx] - c))
    return worst

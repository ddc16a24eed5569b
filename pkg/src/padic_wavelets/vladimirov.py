"""The Vladimirov fractional derivative D^alpha on Q_p.

Two independent routes are provided:

* ``apply_spectral`` multiplies wavelet coefficients by ``p**(alpha*(1-gamma))``;
* ``evaluate_direct`` evaluates the hypersingular integral
  ``C_alpha * int (f(x) - f(y)) / |x - y|_p**(1+alpha) dmu(y)`` exactly at a
  point, summing over the spheres around x and closing the far tail as a
  geometric series.

``brute_force_direct`` is a third, slower route used only to validate the
closed-form tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .lcf import PiecewiseConstant, ball_integral
from .padic import A_IN_B, B_IN_A, EQUAL, Ball, PAdicRational, ball_relation, character, valuation
from .wavelets import WaveletExpansion, WaveletIndex, synthesize


class ScalingCoefficientError(ValueError):
    """The scaling function is not an eigenfunction; use evaluate_direct instead."""


@dataclass(frozen=True)
class AlphaParam:
    alpha: float
    prime: int

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.prime < 2:
            raise ValueError(f"prime must be >= 2, got {self.prime}")


def normalization_constant(a: AlphaParam) -> float:
    """``(p**alpha - 1) / (1 - p**(-1-alpha))``."""
    p, alpha = a.prime, a.alpha
    return (p**alpha - 1) / (1 - p ** (-1 - alpha))


def eigenvalue(a: AlphaParam, gamma: int) -> float:
    return math.exp(a.alpha * (1 - gamma) * math.log(a.prime))


def apply_spectral(e: WaveletExpansion, a: AlphaParam, atol: float = 1e-12) -> WaveletExpansion:
    if a.prime != e.prime:
        raise ValueError(f"prime mismatch: {a.prime} != {e.prime}")
    if abs(e.scaling_coeff) > atol:
        raise ScalingCoefficientError(
            f"scaling coefficient {e.scaling_coeff} is nonzero; D^alpha of the scaling function "
            "leaves the window, evaluate pointwise with evaluate_direct"
        )
    coeffs = {idx: c * eigenvalue(a, idx.gamma) for idx, c in e.coeffs.items()}
    return WaveletExpansion(e.prime, e.V, e.M, 0j, coeffs)


def _levels(f: PiecewiseConstant, x: PAdicRational) -> tuple[int, int]:
    """(outer, inner): B(x, outer) is the smallest ball about x holding supp f,
    and f is constant on B(x, inner)."""
    outer = None
    inner = None
    for b, _ in f.pieces:
        d = valuation(x - b.center)
        if d >= b.radius_exp:
            inner = b.radius_exp
            lvl = b.radius_exp
        else:
            lvl = d
        outer = lvl if outer is None else min(outer, lvl)
    if inner is None:
        inner = max(valuation(x - b.center) for b, _ in f.pieces) + 1
    return outer, inner


def evaluate_direct(f: PiecewiseConstant, x, a: AlphaParam) -> complex:
    """``D^alpha f(x)`` from the integral form, with no truncation."""
    p = f.prime
    if a.prime != p:
        raise ValueError(f"prime mismatch: {a.prime} != {p}")
    if not f.pieces:
        return 0j
    x = PAdicRational.of(p, x)
    fx = f(x)
    outer, inner = _levels(f, x)
    alpha = a.alpha
    shell = 1 - 1 / p

    # spheres S_k = B(x,k) \ B(x,k+1) with |x-y| = p^-k, outer <= k < inner
    total = 0j
    upper = ball_integral(f, Ball(p, x, outer))
    for k in range(outer, inner):
        lower = ball_integral(f, Ball(p, x, k + 1))
        sphere = fx * shell * p ** (-k) - (upper - lower)
        total += sphere * p ** (k * (1 + alpha))
        upper = lower
    # k < outer: f vanishes on the sphere, sum_{k<outer} p^{k alpha} (1-1/p) f(x)
    if fx:
        total += fx * shell * p ** ((outer - 1) * alpha) / (1 - p ** (-alpha))
    return normalization_constant(a) * total


def _ball_integral_tree(f: PiecewiseConstant, ball: Ball) -> complex:
    # recursive descent: independent of the closed-form ball_integral
    total = 0j
    partial = False
    for b, v in f.pieces:
        rel = ball_relation(ball, b)
        if rel in (A_IN_B, EQUAL):
            return v * float(ball.measure())
        if rel == B_IN_A:
            partial = True
    if not partial:
        return total
    return sum((_ball_integral_tree(f, c) for c in ball.children()), 0j)


def brute_force_direct(f: PiecewiseConstant, x, a: AlphaParam, depth: int = 40) -> complex:
    """Sphere-by-sphere sum of the integral, truncated ``depth`` spheres out.

    Starts at a level where every piece is either around x or far from it and
    walks outward, integrating f over each sphere's p - 1 sub-balls by tree
    descent.  Truncation error is about ``|f(x)| p**(-depth*alpha)`` relative.
    """
    p = f.prime
    x = PAdicRational.of(p, x)
    if not f.pieces:
        return 0j
    fx = f(x)
    start = max(b.radius_exp for b, _ in f.pieces)
    total = 0j
    for k in range(start - 1, start - 1 - depth, -1):
        step = PAdicRational(p, 1).shift(k)
        integral = 0j
        for d in range(1, p):
            integral += _ball_integral_tree(f, Ball(p, x + step * d, k + 1))
        sphere_measure = (1 - 1 / p) * p ** (-k)
        total += (fx * sphere_measure - integral) * p ** (k * (1 + a.alpha))
    return normalization_constant(a) * total


def default_sample_points(idx: WaveletIndex, p: int) -> list[PAdicRational]:
    """A point in every piece of psi_idx, a second point deeper inside each,
    and three points off the support."""
    support = idx.support(p)
    pts = []
    for child in support.children():
        pts.append(child.center)
        pts.append(child.center + PAdicRational(p, 1).shift(child.radius_exp + 1))
    k = support.radius_exp
    pts.append(support.center + PAdicRational(p, 1).shift(k - 1))
    pts.append(support.center + PAdicRational(p, p - 1).shift(k - 1))
    pts.append(support.center + PAdicRational(p, 1).shift(k - 3))
    return pts


def eigen_residual(idx: WaveletIndex, a: AlphaParam, sample_points=None, perturb: float = 1.0) -> float:
    """Max of ``|D^alpha psi_idx(x) - lambda psi_idx(x)|`` over the samples.

    ``perturb`` scales the expected eigenvalue; it exists for negative controls.
    """
    p = a.prime
    psi = synthesize(idx, p)
    lam = eigenvalue(a, idx.gamma) * perturb
    if sample_points is None:
        sample_points = default_sample_points(idx, p)
    return max(abs(evaluate_direct(psi, x, a) - lam * psi(x)) for x in sample_points)


def lemma1_constant_check(a: AlphaParam, G: int, dps: int = 80) -> tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """``(series, p**alpha, bound)`` for the eigenvalue series of the mother wavelet.

    ``series`` keeps the sphere terms for 1 <= gamma <= G; ``bound`` is the
    geometric bound on what was dropped.  Evaluated with ``dps`` digits, since
    for large G the bound falls far below double precision.
    """
    if G < 1:
        raise ValueError("G must be >= 1")
    with mpmath.workdps(dps):
        p, alpha = mpmath.mpf(a.prime), mpmath.mpf(a.alpha)
        c = (p**alpha - 1) / (1 - p ** (-1 - alpha))
        first = sum(1 - mpmath.cos(2 * mpmath.pi * i / p) for i in range(a.prime)) / p
        second = (1 - 1 / p) * mpmath.fsum(p**g * p ** (-(1 + alpha) * g) for g in range(1, G + 1))
        series = c * (first + second)
        bound = c * (1 - 1 / p) * p ** (-G * alpha) / (1 - p ** (-alpha))
        return +series, +(p**alpha), +bound


def character_sum(p: int) -> complex:
    """``p**-1 * sum_i (1 - chi(i/p))``, which equals 1."""
    return sum(1 - character(PAdicRational(p, i, 1)) for i in range(p)) / p

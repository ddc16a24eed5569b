import cmath
import random
from fractions import Fraction

import numpy as np
import pytest

from padic_wavelets.checks import random_step
from padic_wavelets.haar import (
    DyadicStepFn,
    HaarCoefficients,
    HaarIndex,
    bridge_phase,
    cell_ball,
    commutation_residual,
    haar_analyze,
    haar_as_step,
    haar_coefficient_direct,
    haar_fn,
    haar_indices,
    haar_mother,
    haar_synthesize,
    inner_product_real,
    n_from_nat,
    padic_index_for,
    pullback,
    real_dalpha,
    theorem7_residual,
)
from padic_wavelets.lcf import inner_product, max_abs_difference, omega
from padic_wavelets.monna import ball_interval, rho, rho_nat, rho_section
from padic_wavelets.padic import PAdicRational
from padic_wavelets.vladimirov import AlphaParam, brute_force_direct, evaluate_direct
from padic_wavelets.wavelets import mother_psi


@pytest.mark.parametrize("t, expected", [(Fraction(1, 4), 1), (Fraction(3, 4), -1), (2, 0), (0, 1), (Fraction(1, 2), -1), (1, 0)])
def test_haar_mother(t, expected):
    assert haar_mother(t) == expected


@pytest.mark.parametrize(
    "gamma, n, t, expected",
    [(0, 0, Fraction(1, 4), 1), (1, 0, Fraction(1, 2), 2**-0.5), (0, 3, Fraction(1, 4), 0), (-1, 1, Fraction(3, 4), -(2**0.5))],
)
def test_haar_fn(gamma, n, t, expected):
    assert abs(haar_fn(HaarIndex(gamma, n), t) - expected) < 1e-15


def test_step_function_validation():
    with pytest.raises(ValueError):
        DyadicStepFn(1, 1, np.zeros(3))
    with pytest.raises(ValueError):
        DyadicStepFn(-1, 0, np.zeros(1))
    f = DyadicStepFn(1, 1, np.arange(4))
    assert f(Fraction(3, 4)) == 1
    assert f(2) == 0
    assert DyadicStepFn.from_json(f.to_json()).values.tolist() == f.values.tolist()


def test_analyze_examples():
    h = haar_analyze(DyadicStepFn(0, 1, np.array([1, -1])))
    assert abs(h.scaling) < 1e-15
    assert abs(h.coeffs[HaarIndex(0, 0)] - 1) < 1e-15
    h = haar_analyze(DyadicStepFn(0, 2, np.ones(4)))
    assert abs(h.scaling - 1) < 1e-15
    assert all(abs(c) < 1e-15 for c in h.coeffs.values())


def test_haar_indices_cover_grid():
    for K in range(3):
        for M in range(3):
            idxs = haar_indices(K, M)
            assert len(idxs) == 2 ** (K + M) - 1
            for idx in idxs:
                lo, hi = idx.support()
                assert 0 <= lo and hi <= 2**K and hi - lo >= Fraction(2, 2**M)


def test_pyramid_matches_direct_inner_products():
    rng = random.Random(1)
    for _ in range(20):
        f = random_step(rng, rng.randint(0, 3), rng.randint(0, 3))
        h = haar_analyze(f)
        assert set(h.coeffs) == set(haar_indices(f.K, f.M))
        for idx, c in h.coeffs.items():
            assert abs(c - haar_coefficient_direct(f, idx)) < 1e-12
        direct_scaling = np.sum(f.values) * 2.0 ** (-f.M) * 2.0 ** (-f.K / 2)
        assert abs(h.scaling - direct_scaling) < 1e-12


def test_haar_parseval_and_round_trip():
    rng = random.Random(2)
    for _ in range(20):
        f = random_step(rng, rng.randint(0, 3), rng.randint(0, 3))
        h = haar_analyze(f)
        energy = abs(h.scaling) ** 2 + sum(abs(c) ** 2 for c in h.coeffs.values())
        assert abs(energy - f.norm_sq()) < 1e-10
        assert np.abs(haar_synthesize(h).values - f.values).max() < 1e-12


def test_cell_ball_maps_onto_cell():
    for M in range(4):
        for j in range(2 ** (M + 2)):
            iv = ball_interval(cell_ball(j, M))
            assert iv.left == Fraction(j, 2**M) and iv.length == Fraction(1, 2**M)


def test_pullback_examples():
    assert pullback(DyadicStepFn(0, 0, np.array([1.0]))) == omega(2)
    assert pullback(DyadicStepFn(0, 3, np.ones(8))) == omega(2)
    assert max_abs_difference(pullback(DyadicStepFn(0, 1, np.array([1, -1]))), mother_psi(2)) == 0


def test_pullback_pointwise():
    # independent route: evaluate f at rho(x) for x in Z[1/2]
    rng = random.Random(3)
    for _ in range(10):
        f = random_step(rng, rng.randint(0, 3), rng.randint(0, 3))
        g = pullback(f)
        for _ in range(50):
            x = PAdicRational(2, rng.randint(0, 2**10), rng.randint(0, 5))
            assert g(x) == f(rho(x))


def test_pullback_unitary():
    rng = random.Random(4)
    for _ in range(20):
        K, M = rng.randint(0, 3), rng.randint(0, 3)
        f, g = random_step(rng, K, M), random_step(rng, K, M)
        assert abs(pullback(f).norm_sq() - f.norm_sq()) < 1e-12
        assert abs(inner_product(pullback(f), pullback(g)) - inner_product_real(f, g)) < 1e-12


@pytest.mark.parametrize(
    "gamma, n, phase",
    [(0, 0, 1), (0, Fraction(1, 2), 1j), (-1, Fraction(3, 4), cmath.exp(3j * cmath.pi / 4))],
)
def test_bridge_examples(gamma, n, phase):
    assert abs(bridge_phase(n) - phase) < 1e-15
    assert theorem7_residual(gamma, n) <= 1e-12


def test_bridge_all_small_indices():
    for gamma in range(-3, 4):
        for N in range(32):
            n = n_from_nat(N)
            assert rho_nat(n, 2) == N
            assert theorem7_residual(gamma, n) <= 1e-12


def test_wrong_phase_is_detected():
    # without the phase the identity fails whenever n is not an integer
    from padic_wavelets.wavelets import WaveletIndex, synthesize

    n = Fraction(1, 2)
    lhs = pullback(haar_as_step(HaarIndex(0, rho_nat(n, 2)), 1, 1))
    assert max_abs_difference(lhs, synthesize(WaveletIndex(0, 1, n), 2)) > 0.5


def test_bridge_residual_window_too_small():
    with pytest.raises(ValueError):
        theorem7_residual(0, Fraction(1, 2), window=(0, 1))


def test_commutation_diagram():
    rng = random.Random(5)
    for _ in range(20):
        f = random_step(rng, rng.randint(0, 3), rng.randint(0, 3))
        assert commutation_residual(f) <= 1e-10


def test_padic_index_for():
    widx, phase = padic_index_for(HaarIndex(1, 3))
    assert (widx.gamma, widx.j, widx.n) == (1, 1, Fraction(3, 4))
    assert abs(phase - cmath.exp(3j * cmath.pi / 4)) < 1e-15


def test_shift_identity():
    # 1_[0,1)(rho(2^g x) - rho(n)) == 1_[0,1)(rho(2^g x - n))
    rng = random.Random(6)
    ind = lambda t: 1 if 0 <= t < 1 else 0  # noqa: E731
    for _ in range(1000):
        gamma = rng.randint(-2, 2)
        n = PAdicRational.of(2, n_from_nat(rng.randrange(8)))
        x = PAdicRational(2, rng.randint(0, 2**12), rng.randint(0, 6))
        y = x.shift(gamma)
        assert ind(rho(y) - rho(n)) == ind(rho(y - n))


def test_real_dalpha_examples():
    psi_real = DyadicStepFn(0, 1, np.array([1.0, -1.0]))
    assert abs(real_dalpha(psi_real, 1.0, 0) - 2) < 1e-14
    box = DyadicStepFn(0, 0, np.array([1.0]))
    assert abs(real_dalpha(box, 1.0, Fraction(1, 4)) - 2 / 3) < 1e-15
    # outside the support only the tail contributes; compare with the sphere sum
    a = AlphaParam(1.5, 2)
    x = rho_section(3, 2)
    assert abs(real_dalpha(box, 1.5, 3) - brute_force_direct(omega(2), x, a)) < 1e-9
    with pytest.raises(ValueError):
        real_dalpha(box, 0, 0)


def test_spectral_consistency_on_half_line():
    # Haar-side multipliers 2^(a(1-gamma)), then synthesis, match real_dalpha for zero-mean f
    rng = random.Random(7)
    for _ in range(5):
        K, M = rng.randint(0, 2), rng.randint(1, 3)
        f = random_step(rng, K, M)
        h = haar_analyze(f)
        h = HaarCoefficients(K, M, 0j, h.coeffs)
        f0 = haar_synthesize(h)
        alpha = rng.choice([0.5, 1.0, 2.0])
        dh = HaarCoefficients(K, M, 0j, {i: c * 2 ** (alpha * (1 - i.gamma)) for i, c in h.coeffs.items()})
        df = haar_synthesize(dh)
        for j in range(2 ** (K + M)):
            t = Fraction(j, 2**M) + Fraction(1, 2 ** (M + 2))
            assert abs(real_dalpha(f0, alpha, t) - df(t)) < 1e-9


def test_eigenfunctions_on_half_line():
    for gamma in range(-1, 3):
        for N in range(4):
            idx = HaarIndex(gamma, N)
            K = max(0, gamma + 3)
            M = max(0, 1 - gamma)
            step = haar_as_step(idx, K, M)
            for j in range(0, 2 ** (K + M), 3):
                t = Fraction(j, 2**M)
                lam = 2 ** (1.0 * (1 - gamma))
                assert abs(real_dalpha(step, 1.0, t) - lam * step(t)) < 1e-9


def test_direct_on_pullback_matches_real():
    f = random_step(random.Random(8), 1, 2)
    a = AlphaParam(0.7, 2)
    for j in range(8):
        t = Fraction(j, 4)
        assert real_dalpha(f, 0.7, t) == evaluate_direct(pullback(f), rho_section(t, 2), a)

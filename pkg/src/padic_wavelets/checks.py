"""Property checks behind ``padic-wavelets verify``.

Each check returns a :class:`CheckResult`; random inputs come from a seeded
``random.Random`` so reports are reproducible.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import haar, monna
from .lcf import PiecewiseConstant, inner_product, omega
from .padic import Ball, PAdicRational, ball_relation
from .vladimirov import (
    AlphaParam,
    apply_spectral,
    brute_force_direct,
    eigen_residual,
    evaluate_direct,
    lemma1_constant_check,
)
from .wavelets import (
    WaveletExpansion,
    index_set,
    mother_psi,
    omega_parseval_partial,
    parseval_defect,
    reconstruct,
    scaling_function,
    synthesize,
    window_grid,
)


@dataclass
class CheckResult:
    name: str
    residual: float
    tol: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: residual={self.residual:.3e} tol={self.tol:.1e} {self.detail}".rstrip()


def _result(name, residual, tol, detail="") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual, tol, residual <= tol, detail)


# random inputs


def random_padic(rng: random.Random, p: int, vmin: int = -4, vmax: int = 4, signed: bool = True) -> PAdicRational:
    """Random element with valuation in [vmin, vmax]; zero and small units are over-sampled."""
    if rng.random() < 0.05:
        return PAdicRational(p, 0)
    v = rng.randint(vmin, vmax)
    top = p if rng.random() < 0.3 else p**5
    unit = rng.randint(1, top)
    while unit % p == 0:
        unit = rng.randint(1, top)
    if signed and rng.random() < 0.5:
        unit = -unit
    return PAdicRational(p, unit).shift(v)


def random_piecewise(rng: random.Random, p: int, V: int, M: int, split: float = 0.6, zero: float = 0.2) -> PiecewiseConstant:
    """Random step function in window (V, M), built by randomly splitting the big ball."""
    pieces = []
    stack = [Ball(p, 0, -V)]
    while stack:
        b = stack.pop()
        if b.radius_exp < M and rng.random() < split:
            stack.extend(b.children())
        elif rng.random() >= zero:
            pieces.append((b, complex(rng.uniform(-1, 1), rng.uniform(-1, 1))))
    return PiecewiseConstant(p, pieces, check=False)


def random_point_near(rng: random.Random, p: int, V: int, M: int) -> PAdicRational:
    """A point of the window ball (mostly) or up to two levels outside it, sometimes negative."""
    r = rng.randrange(p ** (V + M + 3))
    if rng.random() < 0.3:
        r = -r
    return PAdicRational(p, r, V) if rng.random() < 0.8 else PAdicRational(p, r, V + 2)


def random_zero_mean_expansion(rng: random.Random, p: int, V: int, M: int) -> WaveletExpansion:
    coeffs = {idx: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for idx in index_set(V, M, p)}
    return WaveletExpansion(p, V, M, 0j, coeffs)


def random_step(rng: random.Random, K: int, M: int) -> haar.DyadicStepFn:
    vals = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(2 ** (K + M))]
    return haar.DyadicStepFn(K, M, np.array(vals))


# checks


def check_mother_eigenvalue(p: int, alpha: float, tol: float) -> CheckResult:
    a = AlphaParam(alpha, p)
    psi = mother_psi(p)
    pts = [b.center for b in psi.balls()] + [PAdicRational(p, d).shift(-s) for s, d in [(1, 1), (2, 1), (3, p - 1)]]
    worst = max(abs(evaluate_direct(psi, x, a) - p**alpha * psi(x)) for x in pts)
    return _result(f"mother_eigenvalue p={p} alpha={alpha}", worst, tol)


def check_gram(p: int, V: int, M: int, tol: float) -> CheckResult:
    fns = [scaling_function(p, V)] + [synthesize(i, p) for i in index_set(V, M, p)]
    n = len(fns)
    worst = 0.0
    for i in range(n):
        for j in range(i, n):
            g = inner_product(fns[i], fns[j])
            worst = max(worst, abs(g - (1.0 if i == j else 0.0)))
    return _result(f"gram p={p} V={V} M={M}", worst, tol, f"size={n}")


def check_parseval(p: int, V: int, M: int, tol: float, rng: random.Random) -> CheckResult:
    G = 20
    exact = omega_parseval_partial(p, G) == 1 - Fraction(1, p**G)
    worst = parseval_defect(omega(p), max(V, 0), 0)
    for _ in range(5):
        worst = max(worst, parseval_defect(random_piecewise(rng, p, V, M), V, M))
    res = _result(f"parseval p={p}", worst, tol, f"omega_partial_sum_exact={exact}")
    res.passed = res.passed and exact
    return res


def check_eigenvalues(p: int, alpha: float, V: int, M: int, tol: float, perturb: bool = False) -> CheckResult:
    a = AlphaParam(alpha, p)
    worst = 0.0
    for k, idx in enumerate(index_set(V, M, p)):
        factor = 1 + 1e-3 if perturb and k == 0 else 1.0
        worst = max(worst, eigen_residual(idx, a, perturb=factor))
    return _result(f"eigenvalues p={p} alpha={alpha}", worst, tol, "perturbed" if perturb else "")


def check_eigen_series(p: int, alpha: float) -> CheckResult:
    series, target, bound = lemma1_constant_check(AlphaParam(alpha, p), 30)
    err = abs(series - target)
    return CheckResult(
        f"eigen_series p={p} alpha={alpha}", float(err), float(bound), bool(err < bound), "G=30"
    )


def check_holder(p: int, rng: random.Random, trials: int = 2000) -> CheckResult:
    worst = Fraction(-1)
    equal = 0
    for _ in range(trials):
        x, y = random_padic(rng, p), random_padic(rng, p)
        d_real, d_padic = monna.holder_gap(x, y)
        worst = max(worst, d_real - d_padic)
        equal += d_real == d_padic
    ok = worst <= 0 and equal > 0
    return CheckResult(f"monna_holder p={p}", float(max(worst, 0)), 0.0, ok, f"equality_witnesses={equal}")


def balls_in_window(p: int, kmin: int = -2, kmax: int = 2) -> list[Ball]:
    """Every ball of level in [kmin, kmax] inside the ball of radius p**2."""
    out = []
    for k in range(kmin, kmax + 1):
        out.extend(window_grid(2, k, p))
    return out


def check_ball_images(p: int, rng: random.Random, samples: int = 200) -> CheckResult:
    balls = balls_in_window(p)
    images = {b: monna.ball_interval(b) for b in balls}
    bad = 0
    for b in balls:
        mu, length = monna.measure_preservation_check(b)
        bad += mu != length
    for i, a in enumerate(balls):
        for b in balls[i + 1 :]:
            if ball_relation(a, b) == "disjoint":
                bad += images[a].overlap(images[b]) != 0
    for _ in range(samples):
        b = rng.choice(balls)
        try:
            monna.measure_preservation_check(b, samples=1, rng=rng)
        except AssertionError:
            bad += 1
    return CheckResult(f"monna_ball_images p={p}", float(bad), 0.0, bad == 0, f"balls={len(balls)}")


def check_haar_bridge(rng: random.Random, tol: float) -> CheckResult:
    worst = 0.0
    for gamma in range(-2, 3):
        for N in range(16):
            worst = max(worst, haar.theorem7_residual(gamma, haar.n_from_nat(N)))
    for _ in range(5):
        f = random_step(rng, rng.randint(0, 3), rng.randint(0, 3))
        worst = max(worst, haar.commutation_residual(f))
    return _result("haar_bridge p=2", worst, tol)


def check_spectral_direct(p: int, alpha: float, V: int, M: int, tol: float, rng: random.Random) -> CheckResult:
    a = AlphaParam(alpha, p)
    worst = 0.0
    for _ in range(3):
        e = random_zero_mean_expansion(rng, p, V, M)
        f, df = reconstruct(e), reconstruct(apply_spectral(e, a))
        for _ in range(10):
            x = random_point_near(rng, p, V, M)
            worst = max(worst, abs(evaluate_direct(f, x, a) - df(x)))
    return _result(f"spectral_vs_direct p={p} alpha={alpha}", worst, tol)


def check_tail(p: int, tol: float, rng: random.Random) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        f = random_piecewise(rng, p, 1, 1)
        x = random_point_near(rng, p, 1, 1)
        a = AlphaParam(rng.uniform(1.0, 2.0), p)
        worst = max(worst, abs(evaluate_direct(f, x, a) - brute_force_direct(f, x, a, depth=40)))
    return _result(f"closed_form_tail p={p}", worst, tol)


def run_suite(p: int = 2, alpha: float = 1.0, window: tuple[int, int] = (1, 1), tol: float = 1e-9,
              seed: int = 0, perturb: bool = False) -> list[CheckResult]:
    V, M = window
    jobs = [
        lambda: check_mother_eigenvalue(p, alpha, tol),
        lambda: check_gram(p, V, M, min(tol, 1e-10)),
        lambda: check_parseval(p, V, M, min(tol, 1e-10), random.Random(seed + 1)),
        lambda: check_eigenvalues(p, alpha, V, M, tol, perturb),
        lambda: check_eigen_series(p, alpha),
        lambda: check_holder(p, random.Random(seed + 2)),
        lambda: check_ball_images(p, random.Random(seed + 3)),
        lambda: check_spectral_direct(p, alpha, V, M, tol, random.Random(seed + 4)),
        lambda: check_tail(p, tol, random.Random(seed + 5)),
    ]
    if p == 2:
        jobs.append(lambda: check_haar_bridge(random.Random(seed + 6), min(tol, 1e-10)))
    workers = max(1, int(os.environ.get("PADIC_WAVELET_THREADS", os.cpu_count() or 1)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))


def report(results: list[CheckResult]) -> dict:
    return {"passed": all(r.passed for r in results), "checks": [asdict(r) for r in results]}

"""p-adic wavelets: the eigenbasis of the Vladimirov operator, the Monna map,
and the bridge to Haar wavelets on the half line."""

from .haar import DyadicStepFn, HaarIndex, haar_analyze, pullback, real_dalpha, theorem7_residual
from .lcf import PiecewiseConstant, common_refinement, inner_product, linear_combine, modulate, omega
from .monna import Interval, ball_image, holder_gap, rho, rho_nat, rho_section
from .padic import Ball, PAdicRational, ball_children, ball_measure, ball_relation, character, frac, norm, valuation
from .vladimirov import AlphaParam, apply_spectral, eigen_residual, evaluate_direct, normalization_constant
from .wavelets import (
    WaveletExpansion,
    WaveletIndex,
    analyze,
    index_set,
    mother_psi,
    parseval_defect,
    reconstruct,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaParam", "Ball", "DyadicStepFn", "HaarIndex", "Interval", "PAdicRational", "PiecewiseConstant",
    "WaveletExpansion", "WaveletIndex", "analyze", "apply_spectral", "ball_children", "ball_image",
    "ball_measure", "ball_relation", "character", "common_refinement", "eigen_residual", "evaluate_direct",
    "frac", "haar_analyze", "holder_gap", "index_set", "inner_product", "linear_combine", "modulate",
    "mother_psi", "norm", "normalization_constant", "omega", "parseval_defect", "pullback", "real_dalpha",
    "reconstruct", "rho", "rho_nat", "rho_section", "synthesize", "theorem7_residual", "valuation",
]

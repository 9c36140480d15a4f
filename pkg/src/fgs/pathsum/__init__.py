"""Exact {H, T, CZ} amplitudes: path sums and the root-counting pipeline."""

from .affine import PathSum, exact_amplitude, extract_path_sum
from .counting import amplitude_via_counting, amplitude_via_direct_sum, count_roots_mod8, run_counting
from .cyclotomic import CyclotomicAmplitude
from .multilinear import IntPolynomial, evaluate_all, indicator_poly, mod_amplifier, partial_sum
from .phase import PhasePolynomialMod8, direct_sum, extract_phase_polynomial

__all__ = [
    "CyclotomicAmplitude",
    "IntPolynomial",
    "PathSum",
    "PhasePolynomialMod8",
    "amplitude_via_counting",
    "amplitude_via_direct_sum",
    "count_roots_mod8",
    "direct_sum",
    "evaluate_all",
    "exact_amplitude",
    "extract_path_sum",
    "extract_phase_polynomial",
    "indicator_poly",
    "mod_amplifier",
    "partial_sum",
    "run_counting",
]

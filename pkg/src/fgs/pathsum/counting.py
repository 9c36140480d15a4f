"""Root counting of a mod-8 phase polynomial through modulus-amplifying polynomials.

For each residue j the pipeline is: indicator polynomial p_j (odd iff
p = j mod 8), amplification r_{k+1}(p_j) modulo 2^{k+1}, summing out the last
k variables, evaluating the result at every y, and adding up the exact
per-y counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..circuit import QuantumCircuit, rewrite_to_htcz
from ..statevector import Basis
from .cyclotomic import CyclotomicAmplitude
from .multilinear import (
    IntPolynomial,
    _indicator_dense,
    amplify_dense,
    nonnegative_shift,
    sum_out_dense,
    zeta,
)
from .phase import PhasePolynomialMod8, direct_sum, extract_phase_polynomial

SPLIT_RATE = 0.015035


class ConservationError(AssertionError):
    pass


def choose_split(v: int) -> int:
    return max(1, math.floor(SPLIT_RATE * v))


def count_roots_mod8(p: PhasePolynomialMod8 | IntPolynomial, k: int, stats: dict | None = None) -> list[int]:
    """N_j = #{x : p(x) = j mod 8} for j = 0..7, with split parameter k.

    ``p`` may also be an integer polynomial of any degree read mod 8.
    """
    P = IntPolynomial.from_phase(p) if isinstance(p, PhasePolynomialMod8) else p.reduce(8)
    v = P.nvars
    if not 1 <= k < v:
        raise ValueError(f"k must satisfy 1 <= k < v (k={k}, v={v})")
    M = 1 << (k + 1)
    counts = []
    term_count = 0
    for j in range(8):
        y = (P + (8 * nonnegative_shift(P, j) - j)).to_dense(24 * M)
        pj = _indicator_dense(y, v, M)
        s = sum_out_dense(amplify_dense(pj, v, k + 1, M), v, k, M)
        term_count = max(term_count, int(np.count_nonzero(s)))
        t = zeta(s.copy(), v - k, M)
        # each t(y) counts at most 2^k points, so its residue mod 2^{k+1} is exact
        counts.append(int(t.sum()))
    if sum(counts) != 1 << v:
        raise ConservationError(f"counts {counts} do not sum to 2^{v}")
    if stats is not None:
        stats["term_count"] = term_count
    return counts


@dataclass
class CountingReport:
    amplitude: CyclotomicAmplitude
    v: int
    h: int
    k: int | None
    counts: list[int] = field(default_factory=list)
    term_count: int = 0
    method: str = "counting"
    zero_boundary: bool = False

    def as_dict(self) -> dict:
        out = self.amplitude.as_dict()
        out.update(
            v=self.v,
            h=self.h,
            k=self.k,
            term_count=self.term_count,
            counts=self.counts,
            method=self.method,
            zero_boundary=self.zero_boundary,
        )
        return out


def counting_sum(p: PhasePolynomialMod8, k: int | None = None) -> CountingReport:
    """sum_x w^{p(x)} / sqrt(2)^h through root counting; tiny v falls back to enumeration."""
    if p.zero:
        return CountingReport(CyclotomicAmplitude((0, 0, 0, 0), p.h), 0, p.h, None, method="zero", zero_boundary=True)
    if p.v < 2:
        amp = direct_sum(p)
        return CountingReport(amp, p.v, p.h, None, method="direct-fallback")
    k = choose_split(p.v) if k is None else k
    stats: dict = {}
    counts = count_roots_mod8(p, k, stats)
    amp = CyclotomicAmplitude.from_counts(counts, p.h)
    return CountingReport(amp, p.v, p.h, k, counts, stats["term_count"])


def counting_sum_poly(P: IntPolynomial, k: int | None = None) -> list[int]:
    """Root counts of an integer polynomial mod 8 through the counting pipeline."""
    return count_roots_mod8(P, choose_split(P.nvars) if k is None else k)


def run_counting(qc: QuantumCircuit, a: Basis, b: Basis, k: int | None = None) -> CountingReport:
    return counting_sum(extract_phase_polynomial(rewrite_to_htcz(qc), a, b), k)


def amplitude_via_counting(qc: QuantumCircuit, a: Basis, b: Basis, k: int | None = None) -> CyclotomicAmplitude:
    """Exact <a|qc|b> in Z[w]/sqrt(2)^h by the root-counting pipeline."""
    return run_counting(qc, a, b, k).amplitude


def amplitude_via_direct_sum(qc: QuantumCircuit, a: Basis, b: Basis) -> CyclotomicAmplitude:
    return direct_sum(extract_phase_polynomial(rewrite_to_htcz(qc), a, b))

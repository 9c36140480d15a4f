"""Sum-over-paths form of {H, T, CZ} amplitudes.

<a|U|b> = 2^{-h/2} sum_{x in {0,1}^v} w^{p(x)}, with p a degree-2 polynomial
mod 8 whose quadratic coefficients are all 0 or 4.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..circuit import QuantumCircuit
from ..statevector import Basis, basis_bits
from .cyclotomic import CyclotomicAmplitude

MAX_DIRECT_VARS = 30
_CHUNK_BITS = 20


@dataclass(frozen=True)
class PhasePolynomialMod8:
    """p(x) = constant + sum_i linear[i] x_i + sum_{i<j} quadratic[(i, j)] x_i x_j (mod 8).

    ``h`` is the number of Hadamards behind the 2^{-h/2} normalization; ``v`` <= h
    free variables remain after boundary substitution.  ``zero`` flags an
    inconsistent boundary, where the amplitude is exactly 0.
    """

    v: int
    constant: int = 0
    linear: tuple[int, ...] = ()
    quadratic: dict[tuple[int, int], int] = field(default_factory=dict)
    h: int = 0
    zero: bool = False

    def __post_init__(self):
        lin = tuple(int(a) % 8 for a in (self.linear or (0,) * self.v))
        if len(lin) != self.v:
            raise ValueError("need one linear coefficient per variable")
        quad = {}
        for (i, j), c in self.quadratic.items():
            if i == j:
                raise ValueError("diagonal quadratic term; fold x_i^2 = x_i into linear")
            key = (min(i, j), max(i, j))
            if not (0 <= key[0] and key[1] < self.v):
                raise ValueError(f"quadratic index {key} out of range")
            quad[key] = (quad.get(key, 0) + int(c)) % 8
        if any(c not in (0, 4) for c in quad.values()):
            raise ValueError("quadratic coefficients must be 0 or 4 mod 8")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "quadratic", {k: c for k, c in sorted(quad.items()) if c})
        object.__setattr__(self, "constant", int(self.constant) % 8)

    def evaluate(self, x: Sequence[int]) -> int:
        val = self.constant + sum(a * xi for a, xi in zip(self.linear, x))
        val += sum(c * x[i] * x[j] for (i, j), c in self.quadratic.items())
        return val % 8

    def values(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """p(x) mod 8 for assignment indices in [start, stop), x_1 most significant."""
        stop = (1 << self.v) if stop is None else stop
        idx = np.arange(start, stop, dtype=np.int64)
        bits = [(idx >> (self.v - 1 - i)) & 1 for i in range(self.v)]
        val = np.full(idx.shape, self.constant, dtype=np.int64)
        for i, a in enumerate(self.linear):
            if a:
                val += a * bits[i]
        for (i, j), c in self.quadratic.items():
            val += c * (bits[i] & bits[j])
        return val % 8


def extract_phase_polynomial(qc: QuantumCircuit, a: Basis, b: Basis) -> PhasePolynomialMod8:
    """Path-sum polynomial of <a|qc|b> for a circuit over {H, T, CZ}.

    Each wire holds either a constant bit (set by ``b``) or the variable of the
    last Hadamard on it.  H on a wire holding ``e`` introduces a fresh variable
    ``y`` and the phase (-1)^{e y} = w^{4 e y}; T adds w^e; CZ adds w^{4 e e'}.
    Final wire variables are pinned to ``a`` and substituted away.
    """
    n = qc.width
    a_bits, b_bits = basis_bits(a, n), basis_bits(b, n)
    wire: list[tuple[str, int]] = [("c", bit) for bit in b_bits]
    const = 0
    lin: list[int] = []
    quad: dict[tuple[int, int], int] = {}

    def add_product(e1, e2, coeff):
        nonlocal const
        (k1, v1), (k2, v2) = e1, e2
        if k1 == "c" and k2 == "c":
            const += coeff * v1 * v2
        elif k1 == "c":
            lin[v2] += coeff * v1
        elif k2 == "c":
            lin[v1] += coeff * v2
        else:
            key = (min(v1, v2), max(v1, v2))
            quad[key] = quad.get(key, 0) + coeff

    for g in qc.gates:
        if g.name == "H":
            q = g.qubits[0]
            y = len(lin)
            lin.append(0)
            add_product(wire[q], ("v", y), 4)
            wire[q] = ("v", y)
        elif g.name == "T":
            kind, val = wire[g.qubits[0]]
            if kind == "c":
                const += val
            else:
                lin[val] += 1
        elif g.name == "CZ":
            add_product(wire[g.qubits[0]], wire[g.qubits[1]], 4)
        else:
            raise ValueError(f"gate {g.name} is not in {{H, T, CZ}}; rewrite the circuit first")

    h = len(lin)
    fixed: dict[int, int] = {}
    for q, (kind, val) in enumerate(wire):
        if kind == "c":
            if val != a_bits[q]:
                return PhasePolynomialMod8(0, h=h, zero=True)
        else:
            fixed[val] = a_bits[q]

    free = [i for i in range(h) if i not in fixed]
    rename = {old: new for new, old in enumerate(free)}
    new_lin = [0] * len(free)
    for i, c in enumerate(lin):
        if i in fixed:
            const += c * fixed[i]
        else:
            new_lin[rename[i]] += c
    new_quad: dict[tuple[int, int], int] = {}
    for (i, j), c in quad.items():
        if i in fixed and j in fixed:
            const += c * fixed[i] * fixed[j]
        elif i in fixed:
            new_lin[rename[j]] += c * fixed[i]
        elif j in fixed:
            new_lin[rename[i]] += c * fixed[j]
        else:
            new_quad[(rename[i], rename[j])] = new_quad.get((rename[i], rename[j]), 0) + c
    return PhasePolynomialMod8(len(free), const, tuple(new_lin), new_quad, h=h)


def root_counts_direct(p: PhasePolynomialMod8) -> list[int]:
    """N_j = #{x : p(x) = j mod 8} by enumeration."""
    if p.v > MAX_DIRECT_VARS:
        raise ValueError(f"v={p.v} exceeds the enumeration limit of {MAX_DIRECT_VARS}")
    counts = np.zeros(8, dtype=np.int64)
    total = 1 << p.v
    step = 1 << _CHUNK_BITS
    for start in range(0, total, step):
        counts += np.bincount(p.values(start, min(total, start + step)), minlength=8)
    return [int(c) for c in counts]


def root_counts_poly(P) -> list[int]:
    """N_j for an integer polynomial read mod 8, evaluated at every point at once."""
    from .multilinear import evaluate_all

    if P.nvars > MAX_DIRECT_VARS:
        raise ValueError(f"v={P.nvars} exceeds the enumeration limit of {MAX_DIRECT_VARS}")
    vals = evaluate_all(P.reduce(8), P.nvars, 8)
    return [int(c) for c in np.bincount(vals, minlength=8)]


def direct_sum(p: PhasePolynomialMod8) -> CyclotomicAmplitude:
    """2^{-h/2} sum_x w^{p(x)} by O(2^v) enumeration."""
    if p.zero:
        return CyclotomicAmplitude((0, 0, 0, 0), p.h)
    return CyclotomicAmplitude.from_counts(root_counts_direct(p), p.h)


def random_phase_polynomial(rng: np.random.Generator, v: int, density: float = 0.5) -> PhasePolynomialMod8:
    lin = tuple(int(a) for a in rng.integers(0, 8, size=v))
    quad = {(i, j): 4 for i in range(v) for j in range(i + 1, v) if rng.random() < density}
    return PhasePolynomialMod8(v, int(rng.integers(0, 8)), lin, quad, h=v)

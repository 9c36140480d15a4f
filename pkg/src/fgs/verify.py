"""Formula-versus-oracle checks for built instances."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction

from .constructions import Instance
from .pathsum.affine import exact_amplitude
from .pathsum.cyclotomic import CyclotomicAmplitude
from .statevector import dqc1_accept_probability, outcome_probability

TOLERANCE = 1e-9


@dataclass(frozen=True)
class VerifyReport:
    instance_type: str
    n: int
    xi: int
    t: int
    h: int
    formula_value: Fraction
    oracle_value: float
    abs_diff: float
    passed: bool
    timing_ms: float

    def as_dict(self) -> dict:
        return {
            "instance_type": self.instance_type,
            "n": self.n,
            "xi": self.xi,
            "t": self.t,
            "h": self.h,
            "formula_value": {
                "num": str(self.formula_value.numerator),
                "den": str(self.formula_value.denominator),
                "float": float(self.formula_value),
            },
            "oracle_value": self.oracle_value,
            "abs_diff": self.abs_diff,
            "pass": self.passed,
            "timing_ms": self.timing_ms,
        }


def oracle_probability(inst: Instance) -> float:
    """Acceptance probability of ``inst`` by dense simulation."""
    spec = inst.measurement
    if inst.mixed_input:
        return dqc1_accept_probability(inst.circuit, clean=spec.measured_qubits[0], accept=spec.accept_outcome[0])
    return outcome_probability(inst.circuit, (0,) * inst.circuit.width, spec)


def verify_instance(inst: Instance, tol: float = TOLERANCE) -> VerifyReport:
    start = time.perf_counter()
    oracle = float(oracle_probability(inst))
    elapsed = (time.perf_counter() - start) * 1000
    diff = abs(oracle - float(inst.formula))
    return VerifyReport(
        inst.kind, inst.n, inst.xi, inst.t, inst.h, inst.formula, oracle, diff, diff <= tol, round(elapsed, 3)
    )


def accepting_amplitudes(inst: Instance, method: str = "direct") -> list[CyclotomicAmplitude]:
    """Exact <z|C|0^N> for every outcome z that the measurement accepts.

    The acceptance probability is the sum of their squared moduli, so it is
    exactly zero iff every returned amplitude is.
    """
    if inst.mixed_input:
        raise ValueError("mixed-input instances have no single input state")
    width = inst.circuit.width
    spec = inst.measurement
    free = [q for q in range(width) if q not in spec.measured_qubits]
    zero = (0,) * width
    out = []
    for fill in itertools.product((0, 1), repeat=len(free)):
        z = [0] * width
        for q, bit in zip(spec.measured_qubits, spec.accept_outcome):
            z[q] = bit
        for q, bit in zip(free, fill):
            z[q] = bit
        out.append(exact_amplitude(inst.circuit, tuple(z), zero, method))
    return out

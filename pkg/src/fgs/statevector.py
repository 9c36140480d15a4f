"""Dense statevector simulation: the numerical ground truth for every claim.

States are kept as tensors of shape ``(2,) * N`` (optionally with a trailing
batch axis) so a gate is plain slicing on the axes of the qubits it touches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .circuit import MeasurementSpec, QGate, QuantumCircuit

MAX_WIDTH = 26
MAX_DQC1_WIDTH = 18
OMEGA = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
_R = 1 / math.sqrt(2)
_PHASE = {"Z": -1, "S": 1j, "SDG": -1j, "T": OMEGA, "TDG": OMEGA.conjugate()}

Basis = Union[str, Sequence[int]]


@dataclass(frozen=True)
class StateVector:
    width: int
    amplitudes: np.ndarray

    def amplitude(self, basis: Basis) -> complex:
        return complex(self.amplitudes[basis_index(basis, self.width)])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_bits(basis: Basis, width: int | None = None) -> tuple[int, ...]:
    if isinstance(basis, str):
        if set(basis) - {"0", "1"}:
            raise ValueError(f"basis string {basis!r} must contain only 0/1")
        bits = tuple(int(c) for c in basis)
    else:
        bits = tuple(int(b) for b in basis)
    if width is not None and len(bits) != width:
        raise ValueError(f"basis state has {len(bits)} bits, expected {width}")
    return bits


def basis_index(basis: Basis, width: int) -> int:
    idx = 0
    for b in basis_bits(basis, width):
        idx = (idx << 1) | b
    return idx


def _check_width(width: int, cap: int = MAX_WIDTH) -> None:
    if width > cap:
        raise ValueError(f"width {width} exceeds the simulator limit of {cap} qubits")


def _index(ndim: int, fixed: dict[int, int]) -> tuple:
    idx: list = [slice(None)] * ndim
    for q, v in fixed.items():
        idx[q] = v
    return tuple(idx)


def apply_gate(s: np.ndarray, g: QGate) -> None:
    """Apply ``g`` in place to a tensor whose first axes are qubits."""
    nd = s.ndim
    q = g.qubits
    name = g.name
    if name in _PHASE:
        s[_index(nd, {q[0]: 1})] *= _PHASE[name]
    elif name == "H":
        i0, i1 = _index(nd, {q[0]: 0}), _index(nd, {q[0]: 1})
        a, b = s[i0].copy(), s[i1].copy()
        s[i0] = (a + b) * _R
        s[i1] = (a - b) * _R
    elif name == "CZ":
        s[_index(nd, {q[0]: 1, q[1]: 1})] *= -1
    elif name == "MCZ":
        s[_index(nd, dict(zip(q, g.polarity)))] *= -1
    else:
        if name == "X":
            ctl: dict[int, int] = {}
        elif name == "CNOT":
            ctl = {q[0]: 1}
        elif name == "TOFFOLI":
            ctl = {q[0]: 1, q[1]: 1}
        elif name == "GTOFFOLI":
            ctl = dict(zip(q[:-1], g.polarity))
        else:
            raise ValueError(f"simulator does not know gate {name}")
        t = q[-1]
        i0, i1 = _index(nd, {**ctl, t: 0}), _index(nd, {**ctl, t: 1})
        tmp = s[i0].copy()
        s[i0] = s[i1]
        s[i1] = tmp


def evolve(qc: QuantumCircuit, tensor: np.ndarray) -> np.ndarray:
    for g in qc.gates:
        apply_gate(tensor, g)
    return tensor


def run(qc: QuantumCircuit, initial: Basis | np.ndarray = None) -> StateVector:
    """Run from a basis state (default ``|0...0>``) or an explicit statevector."""
    n = qc.width
    _check_width(n)
    if isinstance(initial, np.ndarray):
        if initial.shape != (1 << n,):
            raise ValueError(f"initial state must have {1 << n} amplitudes")
        psi = initial.astype(np.complex128).copy()
    else:
        psi = np.zeros(1 << n, dtype=np.complex128)
        psi[0 if initial is None else basis_index(initial, n)] = 1.0
    tensor = evolve(qc, psi.reshape((2,) * n) if n else psi.reshape(()))
    return StateVector(n, tensor.reshape(-1))


def amplitude(qc: QuantumCircuit, a: Basis, b: Basis) -> complex:
    """<a| qc |b>."""
    a_idx = basis_index(a, qc.width)
    return complex(run(qc, b).amplitudes[a_idx])


def measurement_probability(psi: np.ndarray, width: int, spec: MeasurementSpec) -> float:
    """Probability that ``spec.measured_qubits`` read ``spec.accept_outcome``.

    Unmeasured qubits are summed over; for both semantics this is the weight of
    the matching slice.
    """
    if any(not 0 <= q < width for q in spec.measured_qubits):
        raise ValueError("measurement refers to a qubit outside the circuit")
    tensor = psi.reshape((2,) * width + psi.shape[1:])
    sl = tensor[_index(tensor.ndim, dict(zip(spec.measured_qubits, spec.accept_outcome)))]
    return float(np.sum(np.abs(sl) ** 2))


def outcome_probability(qc: QuantumCircuit, initial: Basis | np.ndarray, spec: MeasurementSpec) -> float:
    return measurement_probability(run(qc, initial).amplitudes, qc.width, spec)


def dqc1_accept_probability(W, clean: int = 0, accept: int = 0, chunk_amplitudes: int = 1 << 22) -> float:
    """Exact DQC1 acceptance: average over all basis states of the mixed register.

    ``W`` may be a QuantumCircuit or any object with ``W``/``clean_qubit``/
    ``accept_outcome`` attributes (a DQC1 instance).
    """
    if not isinstance(W, QuantumCircuit):
        clean, accept, W = W.clean_qubit, W.accept_outcome, W.W
    n = W.width
    _check_width(n, MAX_DQC1_WIDTH)
    mixed = [q for q in range(n) if q != clean]
    total_inputs = 1 << len(mixed)
    batch = max(1, min(total_inputs, chunk_amplitudes >> n))
    acc = 0.0
    for start in range(0, total_inputs, batch):
        ws = np.arange(start, min(total_inputs, start + batch))
        # scatter each mixed-register basis string into full-width indices
        full = np.zeros(len(ws), dtype=np.int64)
        for pos, q in enumerate(mixed):
            bit = (ws >> (len(mixed) - 1 - pos)) & 1
            full |= bit << (n - 1 - q)
        block = np.zeros((1 << n, len(ws)), dtype=np.complex128)
        block[full, np.arange(len(ws))] = 1.0
        tensor = evolve(W, block.reshape((2,) * n + (len(ws),)))
        acc += float(np.sum(np.abs(tensor[_index(tensor.ndim, {clean: accept})]) ** 2))
    return acc / total_inputs

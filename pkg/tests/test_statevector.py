from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from reference import dense_unitary

from fgs.boolean import parse_dimacs
from fgs.circuit import MeasurementSpec, QGate, QuantumCircuit, gtoffoli, mcz
from fgs.constructions import build_sharp_marginal, embed_dqc1
from fgs.corpus import random_clifford_t
from fgs.statevector import (
    amplitude,
    basis_index,
    dqc1_accept_probability,
    outcome_probability,
    run,
)

W = cmath.exp(1j * math.pi / 4)


def one(name, width=1, *qs):
    return QuantumCircuit(width, (QGate(name, qs or (0,)),))


def test_run_examples():
    psi = run(one("H"), "0").amplitudes
    assert np.allclose(psi, [1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert np.allclose(run(one("T"), "1").amplitudes, [0, W])
    assert np.allclose(run(QuantumCircuit(2, (QGate("CZ", (0, 1)),)), "11").amplitudes, [0, 0, 0, -1])


def test_big_endian_ordering():
    qc = QuantumCircuit(3, (QGate("X", (0,)),))
    assert basis_index("100", 3) == 4
    assert run(qc).amplitude("100") == pytest.approx(1)


def test_amplitude_examples():
    assert amplitude(one("H"), "0", "0") == pytest.approx(1 / math.sqrt(2))
    hth = QuantumCircuit(1, (QGate("H", (0,)), QGate("T", (0,)), QGate("H", (0,))))
    assert amplitude(hth, "0", "0") == pytest.approx((1 + W) / 2)
    assert amplitude(QuantumCircuit(4), "0000", "0000") == 1


def test_amplitude_width_mismatch():
    with pytest.raises(ValueError):
        amplitude(one("H"), "00", "0")


def test_outcome_probability_examples():
    assert outcome_probability(one("H"), "0", MeasurementSpec((0,), (0,))) == pytest.approx(0.5)
    inst = build_sharp_marginal(parse_dimacs("p cnf 2 1\n1 2 0")).to_instance()
    assert outcome_probability(inst.circuit, (0,) * inst.circuit.width, inst.measurement) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        outcome_probability(one("H"), "0", MeasurementSpec((3,), (1,)))


def test_dqc1_examples():
    assert dqc1_accept_probability(QuantumCircuit(3), clean=0, accept=0) == pytest.approx(1)
    assert dqc1_accept_probability(embed_dqc1(one("H"))) == pytest.approx(0.5)
    assert dqc1_accept_probability(embed_dqc1(QuantumCircuit(1))) == pytest.approx(0, abs=1e-12)
    assert dqc1_accept_probability(embed_dqc1(one("X"))) == pytest.approx(0, abs=1e-12)


def test_dqc1_matches_density_average():
    # direct mixed-state average against the reference unitary
    V = QuantumCircuit(2, (QGate("H", (0,)), QGate("T", (0,)), QGate("CNOT", (0, 1)), QGate("H", (1,))))
    inst = embed_dqc1(V)
    U = dense_unitary(inst.W)
    n = inst.W.width
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for w in range(2 ** (n - 1)):
        rho[w, w] = 1 / 2 ** (n - 1)  # clean qubit 0 is the MSB, so these indices have it at 0
    out = U @ rho @ U.conj().T
    p = sum(out[i, i].real for i in range(2 ** (n - 1)))
    assert dqc1_accept_probability(inst) == pytest.approx(p, abs=1e-12)
    assert p == pytest.approx(float(inst.p_formula), abs=1e-12)


def test_multicontrolled_gates_simulate_directly():
    qc = QuantumCircuit(4, (gtoffoli([(0, 1), (1, 0), (2, 1)], 3), mcz([(0, 1), (3, 1)])))
    assert np.allclose(
        run(qc, "1010").amplitudes, dense_unitary(qc)[:, basis_index("1010", 4)], atol=1e-12
    )


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 25), st.integers(0, 2**32 - 1))
def test_matches_reference_and_preserves_norm(width, gates, seed):
    rng = np.random.default_rng(seed)
    qc = random_clifford_t(rng, width, gates, t_max=8)
    b = int(rng.integers(2**width))
    psi = run(qc, format(b, f"0{width}b")).amplitudes
    assert np.allclose(psi, dense_unitary(qc)[:, b], atol=1e-10)
    assert np.linalg.norm(psi) == pytest.approx(1, abs=1e-12)

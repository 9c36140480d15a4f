from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from reference import dense_unitary

from fgs.boolean import ParseError
from fgs.circuit import (
    MeasurementSpec,
    QGate,
    QuantumCircuit,
    decompose_multicontrolled,
    gtoffoli,
    inverse,
    lift_reversible,
    mcz,
    parse_quantum,
    rewrite_to_htcz,
    toffoli_network,
    toffoli_to_clifford_t,
)
from fgs.corpus import random_clifford_t, random_cnf
from fgs.reversible import NOT, TOF, ReversibleCircuit, compile_boolean_naive
from fgs.statevector import amplitude


def qc_of(width, *gates):
    return QuantumCircuit(width, tuple(QGate(name, qs) for name, *qs in gates))


def test_gate_validation():
    with pytest.raises(ValueError):
        QGate("CNOT", (1, 1))
    with pytest.raises(ValueError):
        QGate("H", (0, 1))
    with pytest.raises(ValueError):
        QGate("FOO", (0,))
    with pytest.raises(ValueError):
        mcz([(0, 1), (0, 0)])
    with pytest.raises(ValueError):
        QuantumCircuit(2, (QGate("H", (2,)),))


def test_lift_examples():
    assert lift_reversible(ReversibleCircuit(1, (NOT(0),))).gates == (QGate("X", (0,)),)
    tof = lift_reversible(ReversibleCircuit(3, (TOF(0, 1, 2),)))
    assert amplitude(tof, "111", "110") == pytest.approx(1)


def test_toffoli_network_counts():
    net = QuantumCircuit(3, tuple(toffoli_network(0, 1, 2)))
    assert net.t_count == 7
    assert (net.count("CNOT"), net.h_count, net.count("S")) == (6, 2, 1)


def test_toffoli_network_is_phase_exact():
    net = QuantumCircuit(3, tuple(toffoli_network(0, 1, 2)))
    ref = dense_unitary(QuantumCircuit(3, (QGate("TOFFOLI", (0, 1, 2)),)))
    assert np.allclose(dense_unitary(net), ref, atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_t_count_of_compiled_3cnf(m):
    f = random_cnf(np.random.default_rng(10 + m), 6, m, 3)
    U = toffoli_to_clifford_t(lift_reversible(compile_boolean_naive(f)))
    assert U.t_count == 21 * m - 7


def test_toffoli_to_clifford_t_rejects_multicontrolled():
    with pytest.raises(ValueError):
        toffoli_to_clifford_t(QuantumCircuit(4, (gtoffoli([(0, 1), (1, 1), (2, 1)], 3),)))


def test_rewrite_examples():
    s = rewrite_to_htcz(qc_of(1, ("S", 0)))
    assert [g.name for g in s.gates] == ["T", "T"]
    c = rewrite_to_htcz(qc_of(2, ("CNOT", 0, 1)))
    assert [g.name for g in c.gates] == ["H", "CZ", "H"]
    with pytest.raises(ValueError, match="TOFFOLI"):
        rewrite_to_htcz(QuantumCircuit(3, (QGate("TOFFOLI", (0, 1, 2)),)))


def test_inverse_examples():
    assert inverse(qc_of(1, ("H", 0))).gates == (QGate("H", (0,)),)
    assert inverse(qc_of(1, ("T", 0))).gates == (QGate("TDG", (0,)),)


def test_mcz_examples():
    single = QuantumCircuit(1, (mcz([(0, 1)]),))
    assert np.allclose(dense_unitary(single), np.diag([1, -1]))
    g = QuantumCircuit(3, (mcz([(0, 1), (1, 0), (2, 0)]),))
    diag = np.diag(dense_unitary(g))
    assert list(np.flatnonzero(diag.real < 0)) == [0b100]


@pytest.mark.parametrize("pol", [(1, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
def test_mcz_decomposition_matches_diagonal(pol):
    g = QuantumCircuit(4, (mcz(list(zip(range(3), pol))),))
    dec = decompose_multicontrolled(g, borrowed=3)
    for b in range(16):
        bits = format(b, "04b")
        assert amplitude(dec, bits, bits) == pytest.approx(amplitude(g, bits, bits), abs=1e-12)


def test_gtoffoli_lowering_with_borrowed_qubit():
    g = QuantumCircuit(6, (gtoffoli([(0, 1), (1, 0), (2, 1), (3, 1)], 4),))
    dec = decompose_multicontrolled(g, borrowed=5)
    assert np.allclose(dense_unitary(dec), dense_unitary(g), atol=1e-12)


def test_text_round_trip():
    qc = QuantumCircuit(
        4,
        (
            QGate("H", (3,)),
            QGate("TDG", (0,)),
            QGate("CZ", (1, 2)),
            QGate("TOFFOLI", (0, 1, 2)),
            gtoffoli([(0, 1), (1, 0)], 3),
            mcz([(0, 1), (1, 0), (2, 0)]),
            QGate("SDG", (1,)),
        ),
    )
    spec = MeasurementSpec((0, 2), (1, 0), "marginal")
    back, back_spec = parse_quantum(qc.to_text(spec))
    assert back == qc and back_spec == spec


@pytest.mark.parametrize("text", ["H 0\n", "qubits 1\nCNOT 0 0\n", "qubits 2\nGTOF 0 1\n", "qubits 1\nmeasure 3 accept 1\n"])
def test_parse_quantum_errors(text):
    with pytest.raises(ParseError):
        parse_quantum(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 20), st.integers(0, 2**32 - 1))
def test_rewrites_are_exact(width, gates, seed):
    qc = random_clifford_t(np.random.default_rng(seed), width, gates, t_max=6)
    ref = dense_unitary(qc)
    assert np.allclose(dense_unitary(rewrite_to_htcz(qc)), ref, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 20), st.integers(0, 2**32 - 1))
def test_inverse_is_involution_and_undoes(width, gates, seed):
    qc = random_clifford_t(np.random.default_rng(seed), width, gates, t_max=6)
    assert inverse(inverse(qc)) == qc
    prod = dense_unitary(qc + inverse(qc))
    assert np.allclose(prod, np.eye(2**width), atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_toffoli_lowering_preserves_counts(seed):
    rng = np.random.default_rng(seed)
    base = random_clifford_t(rng, 3, 10, t_max=3)
    tofs = int(rng.integers(0, 4))
    qc = base.then([QGate("TOFFOLI", (0, 1, 2))] * tofs)
    low = toffoli_to_clifford_t(qc)
    assert low.t_count == qc.t_count + 7 * tofs
    assert low.h_count == qc.h_count + 2 * tofs
    assert np.allclose(dense_unitary(low), dense_unitary(qc), atol=1e-12)

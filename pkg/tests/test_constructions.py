from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgs.boolean import BooleanCircuit, CnfFormula, Gate, constant_circuit, count, parse_dimacs
from fgs.circuit import QGate, QuantumCircuit
from fgs.constructions import (
    TARGETS,
    build_cliffordt_gap,
    build_cliffordt_sharp,
    build_dqc1,
    build_gap_core,
    build_hc1q,
    build_hcount_gap,
    build_sharp_marginal,
    build_target,
    embed_dqc1,
    gadgetize_t,
    hc1q_amplitude_law,
    hc1q_sandwich,
    load_instance,
)
from fgs.corpus import balanced_function, random_boolean_circuit, random_clifford_t, random_cnf, random_reversible
from fgs.statevector import amplitude
from fgs.verify import verify_instance

AND2 = BooleanCircuit(2, (Gate("AND", (0, 1)),), 2)
OR3 = parse_dimacs("p cnf 3 1\n1 2 3 0")


def padded_x1(n: int = 1) -> BooleanCircuit:
    """f = x1 written as AND(x1, x1)."""
    return BooleanCircuit(n, (Gate("AND", (0, 0)),), n)


def test_gap_core_examples():
    core = build_gap_core(AND2)
    assert (core.n, core.xi, core.gap, core.eta) == (2, 1, 2, Fraction(1, 8))
    assert abs(amplitude(core.V, "000", "000")) ** 2 == pytest.approx(1 / 8)
    assert build_gap_core(padded_x1()).eta == 0
    one = build_gap_core(constant_circuit(1, 1))
    assert one.gap == -2 and one.eta == Fraction(4, 2 ** (2 + one.xi))
    assert verify_instance(one.to_instance()).passed


def test_dqc1_examples():
    assert embed_dqc1(QuantumCircuit(1, (QGate("H", (0,)),))).p_formula == pytest.approx(0.5)
    inst = build_dqc1(AND2)
    assert inst.N == inst.m + 2
    assert inst.p_formula == 4 * Fraction(1, 8) * Fraction(7, 8) / 8
    assert verify_instance(inst.to_instance()).passed


def test_hc1q_examples():
    inst = build_hc1q(AND2)
    assert inst.p_formula == Fraction(1, 16)
    assert inst.circuit.width == inst.n + inst.xi + 2
    rep = verify_instance(inst.to_instance())
    assert rep.passed and rep.oracle_value == pytest.approx(1 / 16)
    zero = build_hc1q(padded_x1(2))
    assert zero.p_formula == 0 and verify_instance(zero.to_instance()).oracle_value == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        build_hc1q(BooleanCircuit(1, (), 0))


@pytest.mark.parametrize("seed", range(10))
def test_hc1q_amplitude_law_random_4bit(seed):
    rng = np.random.default_rng(seed)
    C = random_reversible(rng, 4, int(rng.integers(1, 10)))
    qc = hc1q_sandwich(C, range(3))
    for z in itertools.product((0, 1), repeat=4):
        law = hc1q_amplitude_law(C, z)
        assert amplitude(qc, z, (0, 0, 0, 0)) == pytest.approx(float(law), abs=1e-12)


def test_cliffordt_examples():
    sharp = build_cliffordt_sharp(OR3)
    assert (sharp.n, sharp.xi, sharp.t) == (3, 2, 14)
    assert sharp.p_formula == Fraction(49, 128)
    assert verify_instance(sharp.to_instance()).passed
    gap = build_cliffordt_gap(OR3)
    assert gap.p_formula == Fraction(36, 2**8) and gap.t == 14
    assert verify_instance(gap.to_instance()).passed
    two = random_cnf(np.random.default_rng(0), 4, 2, 3)
    assert build_cliffordt_sharp(two).t == 35


def test_cliffordt_unsat():
    unsat = CnfFormula(3, ((1, 1, 1), (-1, -1, -1)))
    inst = build_cliffordt_sharp(unsat)
    assert count(unsat).sharp == 0 and inst.p_formula == 0
    assert verify_instance(inst.to_instance()).oracle_value == pytest.approx(0, abs=1e-12)


def test_cliffordt_rejects_non_3cnf():
    with pytest.raises(ValueError):
        build_cliffordt_sharp(parse_dimacs("p cnf 3 1\n1 2 0"))
    with pytest.raises(ValueError):
        build_cliffordt_gap(AND2)


def test_hcount_examples():
    inst = build_hcount_gap(AND2)
    assert inst.W.h_count == 5 and inst.p_formula == Fraction(1, 8)
    assert verify_instance(inst.to_instance()).passed
    bal = build_hcount_gap(balanced_function(padded_x1()))
    assert bal.p_formula == 0 and verify_instance(bal.to_instance()).passed


def test_sharp_marginal_examples():
    assert build_sharp_marginal(parse_dimacs("p cnf 2 1\n1 2 0")).p_formula == Fraction(3, 4)
    assert build_sharp_marginal(constant_circuit(2, 0)).p_formula == 0
    always = build_sharp_marginal(constant_circuit(2, 1))
    assert always.p_formula == 1 and verify_instance(always.to_instance()).passed


def test_gadget_examples():
    t = gadgetize_t(QuantumCircuit(1, (QGate("T", (0,)),)))
    assert t.t == 1 and t.gadget_amplitude() == pytest.approx(1)
    hth = QuantumCircuit(1, (QGate("H", (0,)), QGate("T", (0,)), QGate("H", (0,))))
    assert gadgetize_t(hth).gadget_amplitude() == pytest.approx(amplitude(hth, "0", "0"), abs=1e-12)
    cliff = QuantumCircuit(2, (QGate("H", (0,)), QGate("CNOT", (0, 1))))
    g = gadgetize_t(cliff)
    assert g.t == 0 and g.Vc == cliff
    with pytest.raises(ValueError):
        gadgetize_t(QuantumCircuit(3, (QGate("TOFFOLI", (0, 1, 2)),)))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_gadget_relation(n, gates, seed):
    U = random_clifford_t(np.random.default_rng(seed), n, gates, t_max=5)
    g = gadgetize_t(U)
    assert g.t == U.t_count
    assert all(x.name not in ("T", "TDG") for x in g.Vc.gates)
    assert g.gadget_amplitude() == pytest.approx(amplitude(U, (0,) * n, (0,) * n), abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1), st.sampled_from(TARGETS))
def test_formula_matches_oracle(n, gates, seed, target):
    f = random_boolean_circuit(np.random.default_rng(seed), n, gates)
    if target.startswith("clifford-t"):
        f = random_cnf(np.random.default_rng(seed), 3, min(gates, 2), 3)
    rep = verify_instance(build_target(target, f))
    assert rep.passed, rep


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_hcount_h_is_2n_plus_1(n, gates, seed):
    f = random_boolean_circuit(np.random.default_rng(seed), n, gates)
    assert build_hcount_gap(f).W.h_count == 2 * n + 1
    assert build_sharp_marginal(f).W.h_count == n


@pytest.mark.parametrize("target", TARGETS)
def test_instance_round_trip(target):
    f = OR3 if target.startswith("clifford-t") else AND2
    inst = build_target(target, f)
    assert load_instance(inst.dumps()) == inst

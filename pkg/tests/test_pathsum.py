from __future__ import annotations

import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgs.boolean import BooleanCircuit, Gate
from fgs.circuit import QGate, QuantumCircuit, rewrite_to_htcz
from fgs.constructions import build_hcount_gap, build_hc1q
from fgs.corpus import balanced_function, random_boolean_circuit, random_clifford_t, random_htcz_circuit
from fgs.pathsum import (
    CyclotomicAmplitude,
    IntPolynomial,
    PhasePolynomialMod8,
    amplitude_via_counting,
    amplitude_via_direct_sum,
    count_roots_mod8,
    direct_sum,
    evaluate_all,
    exact_amplitude,
    extract_path_sum,
    extract_phase_polynomial,
    indicator_poly,
    mod_amplifier,
    partial_sum,
)
from fgs.pathsum.affine import path_sum_amplitude, simplify
from fgs.pathsum.multilinear import bit_indicator_q, bit_indicator_q_univariate, term_bound
from fgs.pathsum.phase import random_phase_polynomial
from fgs.statevector import amplitude
from fgs.verify import accepting_amplitudes

W = cmath.exp(1j * math.pi / 4)


def circ(width, *gates):
    return QuantumCircuit(width, tuple(QGate(name, qs) for name, *qs in gates))


def brute_counts(P: IntPolynomial) -> list[int]:
    counts = [0] * 8
    for x in itertools.product((0, 1), repeat=P.nvars):
        counts[P.evaluate(x) % 8] += 1
    return counts


def random_intpoly(rng, v: int, degree: int, terms: int) -> IntPolynomial:
    out = {}
    for _ in range(terms):
        idx = rng.choice(v, size=int(rng.integers(0, min(degree, v) + 1)), replace=False)
        mask = sum(1 << (v - 1 - int(i)) for i in idx)
        out[mask] = out.get(mask, 0) + int(rng.integers(-8, 9))
    return IntPolynomial(v, out)


# ---------------------------------------------------------------- cyclotomic


def test_cyclotomic_examples():
    assert complex(CyclotomicAmplitude((1, 0, 0, 0), 1)) == pytest.approx(1 / math.sqrt(2))
    assert CyclotomicAmplitude((1, 1, 0, 0), 2).to_complex() == pytest.approx((1 + W) / 2)
    assert CyclotomicAmplitude((2, 0, 0, 0), 2) == CyclotomicAmplitude((1, 0, 0, 0), 0)
    # 1 + w^4 = 0
    assert CyclotomicAmplitude.from_counts([1, 0, 0, 0, 1, 0, 0, 0]).is_zero()
    assert CyclotomicAmplitude((0, 1, 0, 0)).times_omega(7) == CyclotomicAmplitude((1, 0, 0, 0))


@given(st.lists(st.integers(-20, 20), min_size=4, max_size=4), st.integers(0, 6))
def test_cyclotomic_canonical_preserves_value(coeffs, e):
    a = CyclotomicAmplitude(tuple(coeffs), e)
    assert complex(a.canonical()) == pytest.approx(complex(a), abs=1e-9)
    assert complex(a.times_sqrt2()) == pytest.approx(complex(a) * math.sqrt(2), abs=1e-9)


# ---------------------------------------------------------------- extraction and direct sum


def test_extract_examples():
    p = extract_phase_polynomial(circ(1, ("H", 0)), "0", "0")
    assert (p.v, p.h) == (0, 1)
    assert complex(direct_sum(p)) == pytest.approx(1 / math.sqrt(2))
    t = extract_phase_polynomial(circ(1, ("T", 0)), "1", "1")
    assert complex(direct_sum(t)) == pytest.approx(W)
    hth = extract_phase_polynomial(circ(1, ("H", 0), ("T", 0), ("H", 0)), "0", "0")
    assert (hth.v, hth.h) == (1, 2)
    assert complex(direct_sum(hth)) == pytest.approx((1 + W) / 2)


def test_inconsistent_boundary_is_exact_zero():
    p = extract_phase_polynomial(circ(1, ("T", 0)), "1", "0")
    assert p.zero and direct_sum(p).is_zero()
    ps = extract_path_sum(circ(2, ("X", 0), ("CNOT", 0, 1)), "10", "00")
    assert ps.zero and path_sum_amplitude(ps).is_zero()


def test_extract_rejects_other_gates():
    with pytest.raises(ValueError):
        extract_phase_polynomial(circ(1, ("S", 0)), "0", "0")


def test_direct_sum_examples():
    assert direct_sum(PhasePolynomialMod8(1, linear=(4,))).is_zero()
    assert direct_sum(PhasePolynomialMod8(1, linear=(1,))) == CyclotomicAmplitude((1, 1, 0, 0))
    assert direct_sum(PhasePolynomialMod8(3)) == CyclotomicAmplitude((8, 0, 0, 0))


def test_phase_polynomial_validation():
    with pytest.raises(ValueError):
        PhasePolynomialMod8(2, quadratic={(0, 1): 2})
    with pytest.raises(ValueError):
        PhasePolynomialMod8(2, quadratic={(0, 0): 4})


# ---------------------------------------------------------------- modulus tools


def test_q_parity_table():
    for y in range(256):
        assert bit_indicator_q(y) % 2 == int(y % 8 == 0)
    qu = bit_indicator_q_univariate()
    assert qu.degree == 7
    assert all(qu(y) == bit_indicator_q(y) for y in range(-20, 40))


def test_mod_amplifier_examples():
    assert mod_amplifier(2)(3) == -27
    assert mod_amplifier(2)(2) == -4
    assert mod_amplifier(1).coeffs == (0, 1)
    with pytest.raises(ValueError):
        mod_amplifier(0)


@pytest.mark.parametrize("k", range(1, 7))
def test_mod_amplifier_property(k):
    r = mod_amplifier(k)
    assert r.degree == 2 * k - 1
    for x in range(-50, 51):
        assert r(x) % 2**k == x % 2


def test_evaluate_all_examples():
    x1x2 = IntPolynomial(2, {0b11: 1})
    assert list(evaluate_all(x1x2)) == [0, 0, 0, 1]
    lin = IntPolynomial(2, {0: 3, 0b10: -2})
    assert list(evaluate_all(lin)) == [3, 3, 1, 1]


def test_evaluate_all_random_cubic():
    rng = np.random.default_rng(4)
    P = random_intpoly(rng, 10, 3, 40)
    vals = evaluate_all(P)
    for i, x in enumerate(itertools.product((0, 1), repeat=10)):
        assert vals[i] == P.evaluate(x)


def test_indicator_example():
    x1 = IntPolynomial.variable(1, 0)
    p1 = indicator_poly(x1, 1)
    assert [p1.evaluate((x,)) % 2 for x in (0, 1)] == [0, 1]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(0, 7), st.integers(0, 2**32 - 1))
def test_indicator_law(v, j, seed):
    p = random_phase_polynomial(np.random.default_rng(seed), v)
    pj = indicator_poly(p, j)
    assert pj.degree <= 14
    for x in itertools.product((0, 1), repeat=v):
        assert pj.evaluate(x) % 2 == int(p.evaluate(x) == j)


def test_partial_sum_example():
    # p = x1 + x2, j = 1, k = 1: one z hits for each y
    pj = indicator_poly(IntPolynomial(2, {0b10: 1, 0b01: 1}), 1, modulus=4)
    s = partial_sum(pj, 1)
    assert s.nvars == 1
    assert [s.evaluate((y,)) % 4 for y in (0, 1)] == [1, 1]
    with pytest.raises(ValueError):
        partial_sum(pj, 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.integers(0, 7), st.data())
def test_partial_sum_counts_roots(v, j, data):
    k = data.draw(st.integers(1, min(3, v - 1)))
    p = random_phase_polynomial(np.random.default_rng(data.draw(st.integers(0, 2**32 - 1))), v)
    s = partial_sum(indicator_poly(p, j, modulus=2 ** (k + 1)), k)
    assert s.num_terms <= term_bound(v, k)
    vals = evaluate_all(s, modulus=2 ** (k + 1))
    for i, y in enumerate(itertools.product((0, 1), repeat=v - k)):
        hits = sum(p.evaluate(y + z) == j for z in itertools.product((0, 1), repeat=k))
        assert vals[i] == hits


# ---------------------------------------------------------------- root counting


def test_count_roots_examples():
    assert count_roots_mod8(IntPolynomial(2, {0b10: 1, 0b01: 1}), 1) == [1, 2, 1, 0, 0, 0, 0, 0]
    assert count_roots_mod8(PhasePolynomialMod8(3), 1) == [8, 0, 0, 0, 0, 0, 0, 0]
    assert count_roots_mod8(PhasePolynomialMod8(2, quadratic={(0, 1): 4}), 1) == [3, 0, 0, 0, 1, 0, 0, 0]
    with pytest.raises(ValueError):
        count_roots_mod8(PhasePolynomialMod8(2), 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1), st.data())
def test_counting_matches_enumeration(v, seed, data):
    k = data.draw(st.integers(1, min(3, v - 1)))
    p = random_phase_polynomial(np.random.default_rng(seed), v)
    counts = count_roots_mod8(p, k)
    assert sum(counts) == 2**v
    assert counts == brute_counts(IntPolynomial.from_phase(p))


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_counting_handles_higher_degree(v, seed):
    P = random_intpoly(np.random.default_rng(seed), v, 3, 12)
    assert count_roots_mod8(P, 1) == brute_counts(P)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_htcz_amplitudes_match_statevector(width, h, seed):
    rng = np.random.default_rng(seed)
    qc = random_htcz_circuit(rng, width, h)
    a = tuple(int(b) for b in rng.integers(0, 2, width))
    b = tuple(int(b) for b in rng.integers(0, 2, width))
    ref = amplitude(qc, a, b)
    direct = amplitude_via_direct_sum(qc, a, b)
    assert complex(direct) == pytest.approx(ref, abs=1e-9)
    assert amplitude_via_counting(qc, a, b) == direct


# ---------------------------------------------------------------- affine path sums


def test_path_sum_examples():
    ps = extract_path_sum(circ(1, ("H", 0), ("S", 0), ("H", 0)), "0", "0")
    assert ps.h == 2
    assert complex(path_sum_amplitude(ps)) == pytest.approx((1 + 1j) / 2)
    tof = circ(3, ("TOFFOLI", 0, 1, 2))
    assert exact_amplitude(tof, "111", "110") == CyclotomicAmplitude((1, 0, 0, 0))
    assert exact_amplitude(tof, "110", "110").is_zero()


def test_simplify_collapses_toffoli():
    from fgs.pathsum.affine import prepare_clifford_t

    qc = prepare_clifford_t(circ(3, ("TOFFOLI", 0, 1, 2)))
    raw = extract_path_sum(qc, "111", "110")
    small = simplify(raw)
    assert (raw.v, raw.h) == (1, 2) and (small.v, small.h) == (0, 0)
    assert path_sum_amplitude(small) == path_sum_amplitude(raw)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 25), st.integers(0, 2**32 - 1))
def test_exact_amplitude_matches_statevector(width, gates, seed):
    rng = np.random.default_rng(seed)
    qc = random_clifford_t(rng, width, gates, t_max=8)
    a = tuple(int(b) for b in rng.integers(0, 2, width))
    b = tuple(int(b) for b in rng.integers(0, 2, width))
    ref = amplitude(qc, a, b)
    raw = exact_amplitude(qc, a, b, reduce=False)
    assert complex(raw) == pytest.approx(ref, abs=1e-9)
    assert exact_amplitude(qc, a, b) == raw
    assert exact_amplitude(qc, a, b, method="counting") == raw


def test_simplify_agrees_with_htcz_rewrite():
    rng = np.random.default_rng(11)
    for _ in range(20):
        qc = rewrite_to_htcz(random_clifford_t(rng, 3, 15, t_max=4))
        assert exact_amplitude(qc, "000", "000") == amplitude_via_direct_sum(qc, "000", "000")


@pytest.mark.parametrize("seed", range(5))
def test_balanced_functions_give_exact_zero(seed):
    g = random_boolean_circuit(np.random.default_rng(seed), 2, 2)
    f = balanced_function(g)
    assert all(a.is_zero() for a in accepting_amplitudes(build_hcount_gap(f).to_instance()))
    assert all(a.is_zero() for a in accepting_amplitudes(build_hc1q(f).to_instance()))


def test_hc1q_amplitude_is_exact():
    and2 = BooleanCircuit(2, (Gate("AND", (0, 1)),), 2)
    amps = accepting_amplitudes(build_hc1q(and2).to_instance())
    assert sum(a.abs2() for a in amps) == pytest.approx(1 / 16, abs=1e-12)

"""Hardness-instance builders, each paired with its closed-form acceptance probability.

Every builder returns a rich dataclass; ``to_instance()`` flattens it into the
serializable :class:`Instance` (circuit + measurement + exact formula) used by
the CLI and the verifier.

The DQC1 and HC1Q circuits are reconstructed from their probability formulas;
the reconstructions are pinned by oracle checks, not by any drawing.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .boolean import BooleanFunction, CnfFormula, count
from .circuit import (
    CLIFFORD,
    MeasurementSpec,
    QGate,
    QuantumCircuit,
    decompose_multicontrolled,
    gtoffoli,
    inverse,
    layer,
    lift_reversible,
    mcz,
    parse_quantum,
    toffoli_to_clifford_t,
)
from .reversible import GTOF, ReversibleCircuit, compile_boolean_naive, decompose_gtoffoli
from .statevector import amplitude


def _zeros(k: int) -> tuple[int, ...]:
    return (0,) * k


@dataclass(frozen=True)
class Instance:
    """A circuit, what to measure, and the exact probability it should give.

    ``mixed_input`` marks DQC1 semantics: qubit ``measurement.measured_qubits[0]``
    starts clean in ``|0>`` and every other qubit is maximally mixed.  Otherwise
    the input is ``|0^N>``.
    """

    kind: str
    circuit: QuantumCircuit
    measurement: MeasurementSpec
    formula: Fraction
    n: int
    xi: int
    mixed_input: bool = False

    @property
    def t(self) -> int:
        return self.circuit.t_count

    @property
    def h(self) -> int:
        return self.circuit.h_count

    def header(self) -> dict:
        return {
            "type": self.kind,
            "n": self.n,
            "xi": self.xi,
            "t": self.t,
            "h": self.h,
            "width": self.circuit.width,
            "formula": {"num": str(self.formula.numerator), "den": str(self.formula.denominator)},
            "formula_float": float(self.formula),
            "accept_outcome": "".join(map(str, self.measurement.accept_outcome)),
            "mixed_input": self.mixed_input,
        }

    def dumps(self) -> str:
        return json.dumps(self.header(), sort_keys=True) + "\n" + self.circuit.to_text(self.measurement)


def load_instance(text: str) -> Instance:
    head, _, body = text.partition("\n")
    meta = json.loads(head)
    qc, spec = parse_quantum(body)
    if spec is None:
        raise ValueError("instance file lacks a measure line")
    return Instance(
        kind=meta["type"],
        circuit=qc,
        measurement=spec,
        formula=Fraction(int(meta["formula"]["num"]), int(meta["formula"]["den"])),
        n=int(meta["n"]),
        xi=int(meta["xi"]),
        mixed_input=bool(meta.get("mixed_input", False)),
    )


# ---------------------------------------------------------------- gap core and DQC1


@dataclass(frozen=True)
class GapCoreInstance:
    V: QuantumCircuit
    n: int
    xi: int
    gap: int
    U: ReversibleCircuit = field(repr=False)

    @property
    def eta(self) -> Fraction:
        return Fraction(self.gap**2, 2 ** (2 * self.n + self.xi))

    def to_instance(self) -> Instance:
        m = self.V.width
        spec = MeasurementSpec(tuple(range(m)), _zeros(m))
        return Instance("gap-core", self.V, spec, self.eta, self.n, self.xi)


def build_gap_core(f: BooleanFunction) -> GapCoreInstance:
    """V = H^{n+xi} (Z on last) U (H^n), so |<0|V|0>|^2 = gap(f)^2 / 2^{2n+xi}."""
    C = compile_boolean_naive(f)
    n, xi = C.ledger.n, C.ledger.xi
    m = n + xi
    gates = layer("H", range(n)) + list(lift_reversible(C).gates)
    gates += [QGate("Z", (m - 1,))] + layer("H", range(m))
    return GapCoreInstance(QuantumCircuit(m, tuple(gates)), n, xi, count(f).gap, C)


@dataclass(frozen=True)
class Dqc1Instance:
    W: QuantumCircuit
    m: int
    eta: Fraction | float
    n: int = 0
    xi: int = 0
    clean_qubit: int = 0
    accept_outcome: int = 0

    @property
    def N(self) -> int:
        return self.W.width

    @property
    def p_formula(self) -> Fraction | float:
        return 4 * self.eta * (1 - self.eta) / 2**self.m

    def to_instance(self) -> Instance:
        if not isinstance(self.eta, Fraction):
            raise ValueError("only instances with an exact eta serialize")
        spec = MeasurementSpec((self.clean_qubit,), (self.accept_outcome,))
        return Instance("dqc1", self.W, spec, self.p_formula, self.n, self.xi, mixed_input=True)


def embed_dqc1(V: QuantumCircuit, eta: Fraction | None = None, n: int = 0, xi: int = 0) -> Dqc1Instance:
    """One clean qubit (0), V's m work qubits (1..m), one borrowed mixed qubit (m+1).

    W = [flip clean iff work = 0^m] . V . [-1 iff clean = 1 and work = 0^m]
        . V^dag . [flip clean iff work = 0^m] . [X on clean]

    Only the mixed input work = 0^m can leave the clean qubit at 0, and it does
    so with probability 1 - |1 - 2 eta|^2 = 4 eta (1 - eta); averaging over the
    2^m work inputs gives 4 eta (1 - eta) / 2^m.  The borrowed qubit is only used
    to decompose the multi-controlled gates and is restored on every basis state.
    """
    m = V.width
    if m < 1:
        raise ValueError("V must act on at least one qubit")
    N = m + 2
    work = list(range(1, m + 1))
    body = V.widened(N, offset=1)
    flip = gtoffoli([(w, 0) for w in work], 0)
    gates = [flip] + list(body.gates) + [mcz([(0, 1)] + [(w, 0) for w in work])]
    gates += list(inverse(body).gates) + [flip, QGate("X", (0,))]
    W = decompose_multicontrolled(QuantumCircuit(N, tuple(gates)), borrowed=m + 1)
    if eta is None:
        eta = abs(amplitude(V, _zeros(m), _zeros(m))) ** 2
    return Dqc1Instance(W, m, eta, n, xi)


def build_dqc1(f: BooleanFunction) -> Dqc1Instance:
    core = build_gap_core(f)
    return embed_dqc1(core.V, core.eta, core.n, core.xi)


# ---------------------------------------------------------------- HC1Q


@dataclass(frozen=True)
class Hc1qInstance:
    C: ReversibleCircuit
    circuit: QuantumCircuit
    measurement: MeasurementSpec
    n: int
    xi: int
    gap: int

    @property
    def p_formula(self) -> Fraction:
        return Fraction(self.gap**2, 2 ** (2 * self.n + 2 * self.xi))

    def to_instance(self) -> Instance:
        return Instance("hc1q", self.circuit, self.measurement, self.p_formula, self.n, self.xi)


def hc1q_sandwich(C: ReversibleCircuit, hadamard_qubits) -> QuantumCircuit:
    h = layer("H", hadamard_qubits)
    return QuantumCircuit(C.width, tuple(h + list(lift_reversible(C).gates) + h))


def build_hc1q(f: BooleanFunction) -> Hc1qInstance:
    """Middle circuit: flip the last bit iff all xi ancillas are 0, then U.

    Bits: payload [0, n), ancillas [n, n+xi), borrowed n+xi, last n+xi+1.  The
    Hadamard layers cover every qubit but the last, the borrowed one included
    (it sits in |+> and is untouched on basis states), and it is not measured.
    """
    U = compile_boolean_naive(f)
    n, xi = U.ledger.n, U.ledger.xi
    if xi < 1:
        raise ValueError("HC1Q needs xi >= 1; pad f with a dummy AND gate")
    borrowed, last = n + xi, n + xi + 1
    width = n + xi + 2
    gates = decompose_gtoffoli(GTOF([(a, 0) for a in range(n, n + xi)], last), borrowed)
    C = ReversibleCircuit(width, tuple(gates) + U.gates)
    measured = tuple(q for q in range(width) if q != borrowed)
    spec = MeasurementSpec(measured, _zeros(n) + _zeros(xi - 1) + (1, 1))
    return Hc1qInstance(C, hc1q_sandwich(C, range(width - 1)), spec, n, xi, count(f).gap)


def hc1q_amplitude_law(C: ReversibleCircuit, z) -> Fraction:
    """2^{-(N-1)} sum_x (-1)^{sum_j z_j C_j(x0)} [z_N = C_N(x0)], by enumeration."""
    from .reversible import run_reversible_batch

    N = C.width
    xs = np.array([[(i >> (N - 2 - j)) & 1 for j in range(N - 1)] + [0] for i in range(1 << (N - 1))])
    out = run_reversible_batch(C, xs)
    z = np.array(z)
    signs = (-1) ** ((out[:, : N - 1] @ z[: N - 1]) % 2)
    total = int(np.sum(signs * (out[:, N - 1] == z[N - 1])))
    return Fraction(total, 2 ** (N - 1))


# ---------------------------------------------------------------- Clifford+T


@dataclass(frozen=True)
class CliffordTInstance:
    V: QuantumCircuit
    n: int
    xi: int
    variant: str
    sharp: int
    gap: int

    @property
    def t(self) -> int:
        return self.V.t_count

    @property
    def p_formula(self) -> Fraction:
        if self.variant == "sharp":
            return Fraction(self.sharp**2, 2 ** (2 * self.n + self.xi - 1))
        return Fraction(self.gap**2, 2 ** (2 * self.n + self.xi))

    def to_instance(self) -> Instance:
        m = self.V.width
        spec = MeasurementSpec(tuple(range(m)), _zeros(m))
        return Instance(f"clifford-t-{self.variant}", self.V, spec, self.p_formula, self.n, self.xi)


def _require_3cnf(f) -> CnfFormula:
    if not isinstance(f, CnfFormula) or f.m < 1 or any(len(c) != 3 for c in f.clauses):
        raise ValueError("Clifford+T constructions need a 3-CNF with every clause of width 3")
    return f


def _clifford_t_core(f: CnfFormula):
    C = compile_boolean_naive(f)
    U = toffoli_to_clifford_t(lift_reversible(C))
    return C.ledger.n, C.ledger.xi, U


def build_cliffordt_sharp(f: CnfFormula) -> CliffordTInstance:
    """V = (H^{n+xi-1} (x) X) U (H^n (x) I): |<0|V|0>|^2 = (#f)^2 / 2^{2n+xi-1}."""
    f = _require_3cnf(f)
    n, xi, U = _clifford_t_core(f)
    m = n + xi
    gates = layer("H", range(n)) + list(U.gates) + layer("H", range(m - 1)) + [QGate("X", (m - 1,))]
    rep = count(f)
    return CliffordTInstance(QuantumCircuit(m, tuple(gates)), n, xi, "sharp", rep.sharp, rep.gap)


def build_cliffordt_gap(f: CnfFormula) -> CliffordTInstance:
    """V = H^{n+xi} (Z on last) U (H^n (x) I): |<0|V|0>|^2 = gap(f)^2 / 2^{2n+xi}."""
    f = _require_3cnf(f)
    n, xi, U = _clifford_t_core(f)
    m = n + xi
    gates = layer("H", range(n)) + list(U.gates) + [QGate("Z", (m - 1,))] + layer("H", range(m))
    rep = count(f)
    return CliffordTInstance(QuantumCircuit(m, tuple(gates)), n, xi, "gap", rep.sharp, rep.gap)


# ---------------------------------------------------------------- H-count


@dataclass(frozen=True)
class HCountInstance:
    W: QuantumCircuit
    measurement: MeasurementSpec
    n: int
    xi: int
    value: int
    variant: str  # "gap" or "sharp"

    @property
    def p_formula(self) -> Fraction:
        if self.variant == "gap":
            return Fraction(self.value**2, 2 ** (2 * self.n + 1))
        return Fraction(self.value, 2**self.n)

    def to_instance(self) -> Instance:
        kind = "h-count" if self.variant == "gap" else "sharp-marginal"
        return Instance(kind, self.W, self.measurement, self.p_formula, self.n, self.xi)


def _clean_compute(f: BooleanFunction) -> tuple[QuantumCircuit, int, int]:
    """U^dag . CNOT(f-bit -> fresh) . U on n + xi + 1 qubits: |x,0,0> -> |x,0,f(x)>."""
    C = compile_boolean_naive(f)
    n, xi = C.ledger.n, C.ledger.xi
    width = n + xi + 1
    U = lift_reversible(C).widened(width)
    copy = QGate("CNOT", (C.ledger.output_bit, width - 1))
    return QuantumCircuit(width, U.gates + (copy,) + inverse(U).gates), n, xi


def build_hcount_gap(f: BooleanFunction) -> HCountInstance:
    """W = (H^n, I^xi, H) V (H^n, I^{xi+1}); outcome 0^{n+xi}1 has probability gap^2/2^{2n+1}."""
    V, n, xi = _clean_compute(f)
    width = V.width
    gates = layer("H", range(n)) + list(V.gates) + layer("H", range(n)) + [QGate("H", (width - 1,))]
    spec = MeasurementSpec(tuple(range(width)), _zeros(width - 1) + (1,))
    return HCountInstance(QuantumCircuit(width, tuple(gates)), spec, n, xi, count(f).gap, "gap")


def build_sharp_marginal(f: BooleanFunction) -> HCountInstance:
    """V = U (H^n, I^{xi+1}); Pr[last qubit = 1] = #f / 2^n."""
    U, n, xi = _clean_compute(f)
    width = U.width
    V = QuantumCircuit(width, tuple(layer("H", range(n))) + U.gates)
    spec = MeasurementSpec((width - 1,), (1,), "marginal")
    return HCountInstance(V, spec, n, xi, count(f).sharp, "sharp")


# ---------------------------------------------------------------- T gadgets


@dataclass(frozen=True)
class GadgetizedInstance:
    """Vc is Clifford-only on n + t qubits; qubits n.. start in the magic state |A>.

    Relation: <0^n|U|0^n> = sqrt(2)^t <0^{n+t}| Vc (|0^n> (x) |A>^t).
    """

    Vc: QuantumCircuit
    n: int
    t: int

    def magic_input(self) -> np.ndarray:
        a = np.array([1, np.exp(1j * math.pi / 4)]) / math.sqrt(2)
        psi = np.zeros(1 << self.n, dtype=np.complex128)
        psi[0] = 1
        for _ in range(self.t):
            psi = np.kron(psi, a)
        return psi

    def gadget_amplitude(self) -> complex:
        """sqrt(2)^t <0^{n+t}| Vc (|0^n> (x) |A>^t), via the statevector oracle."""
        from .statevector import run

        psi = run(self.Vc, self.magic_input()).amplitudes
        return complex(psi[0]) * math.sqrt(2) ** self.t


def magic_state_prep(q: int) -> list[QGate]:
    """|A> = T H |0>."""
    return [QGate("H", (q,)), QGate("T", (q,))]


def gadgetize_t(U: QuantumCircuit) -> GadgetizedInstance:
    """Replace every T by H . CZ . H onto a fresh |A> qubit post-selected on <0|.

    TDG becomes SDG followed by a T gadget.
    """
    n = U.width
    t = sum(g.name in ("T", "TDG") for g in U.gates)
    out: list[QGate] = []
    fresh = n
    for g in U.gates:
        if g.name in ("T", "TDG"):
            q = g.qubits[0]
            if g.name == "TDG":
                out.append(QGate("SDG", (q,)))
            out += [QGate("H", (fresh,)), QGate("CZ", (q, fresh)), QGate("H", (fresh,))]
            fresh += 1
        elif g.name in CLIFFORD:
            out.append(g)
        else:
            raise ValueError(f"non-Clifford gate {g.name} cannot be gadgetized")
    return GadgetizedInstance(QuantumCircuit(n + t, tuple(out)), n, t)


# ---------------------------------------------------------------- registry


def build_target(target: str, f: BooleanFunction) -> Instance:
    builders = {
        "gap-core": build_gap_core,
        "dqc1": build_dqc1,
        "hc1q": build_hc1q,
        "clifford-t-sharp": build_cliffordt_sharp,
        "clifford-t-gap": build_cliffordt_gap,
        "h-count": build_hcount_gap,
        "sharp-marginal": build_sharp_marginal,
    }
    if target not in builders:
        raise ValueError(f"unknown target {target!r}")
    return builders[target](f).to_instance()


TARGETS = ("gap-core", "dqc1", "hc1q", "clifford-t-sharp", "clifford-t-gap", "h-count", "sharp-marginal")


"""Quantum circuit IR over X/CNOT/TOFFOLI/GTOFFOLI/H/Z/S/T/CZ/MCZ.

Qubit 0 is the leftmost character of a ket string, and a statevector index is
the big-endian integer of that string.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .boolean import ParseError
from .reversible import RGate, ReversibleCircuit, decompose_gtoffoli

SINGLE = {"X", "H", "Z", "S", "SDG", "T", "TDG"}
CLIFFORD = {"X", "H", "Z", "S", "SDG", "CNOT", "CZ"}
_INVERSE_NAME = {"T": "TDG", "TDG": "T", "S": "SDG", "SDG": "S"}
_ARITY = {"CNOT": 2, "CZ": 2, "TOFFOLI": 3}


@dataclass(frozen=True)
class QGate:
    """One gate.  For GTOFFOLI the last qubit is the target and ``polarity``
    covers the controls; for MCZ ``polarity`` covers every qubit."""

    name: str
    qubits: tuple[int, ...]
    polarity: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "polarity", tuple(int(p) for p in self.polarity))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubit indices in {self.name} {self.qubits}")
        if self.name in SINGLE:
            ok = len(self.qubits) == 1
        elif self.name in _ARITY:
            ok = len(self.qubits) == _ARITY[self.name]
        elif self.name == "GTOFFOLI":
            ok = len(self.qubits) >= 1 and len(self.polarity) == len(self.qubits) - 1
        elif self.name == "MCZ":
            ok = len(self.qubits) >= 1 and len(self.polarity) == len(self.qubits)
        else:
            raise ValueError(f"unknown gate {self.name!r}")
        if not ok:
            raise ValueError(f"bad operands for {self.name}: {self.qubits} {self.polarity}")

    def inverse(self) -> QGate:
        return QGate(_INVERSE_NAME.get(self.name, self.name), self.qubits, self.polarity)

    def to_text(self) -> str:
        q = self.qubits
        if self.name == "TOFFOLI":
            return f"CCX {q[0]} {q[1]} {q[2]}"
        if self.name == "GTOFFOLI":
            ctl = " ".join(("+" if p else "-") + str(b) for b, p in zip(q[:-1], self.polarity))
            return f"GTOF {ctl} {q[-1]}".replace("  ", " ")
        if self.name == "MCZ":
            return "MCZ " + " ".join(("+" if p else "-") + str(b) for b, p in zip(q, self.polarity))
        return f"{self.name} " + " ".join(map(str, q))


def gate(name: str, *qubits: int) -> QGate:
    return QGate(name, qubits)


def mcz(controls: Sequence[tuple[int, int]]) -> QGate:
    """Phase -1 exactly on basis states matching every ``(qubit, polarity)``."""
    if not controls:
        raise ValueError("MCZ needs at least one qubit")
    return QGate("MCZ", tuple(q for q, _ in controls), tuple(p for _, p in controls))


def gtoffoli(controls: Sequence[tuple[int, int]], target: int) -> QGate:
    return QGate("GTOFFOLI", tuple(q for q, _ in controls) + (target,), tuple(p for _, p in controls))


@dataclass(frozen=True)
class MeasurementSpec:
    measured_qubits: tuple[int, ...]
    accept_outcome: tuple[int, ...]
    semantics: str = "exact-outcome"

    def __post_init__(self):
        object.__setattr__(self, "measured_qubits", tuple(self.measured_qubits))
        object.__setattr__(self, "accept_outcome", tuple(int(b) for b in self.accept_outcome))
        if self.semantics not in ("exact-outcome", "marginal"):
            raise ValueError(f"unknown semantics {self.semantics!r}")
        if len(self.accept_outcome) != len(self.measured_qubits):
            raise ValueError("accept outcome length differs from measured qubit count")
        if len(set(self.measured_qubits)) != len(self.measured_qubits):
            raise ValueError("qubit measured twice")

    def to_text(self) -> str:
        line = "measure " + " ".join(map(str, self.measured_qubits))
        line += " accept " + " ".join(map(str, self.accept_outcome))
        return line + (" marginal" if self.semantics == "marginal" else "")


@dataclass(frozen=True)
class QuantumCircuit:
    width: int
    gates: tuple[QGate, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(not 0 <= q < self.width for q in g.qubits):
                raise ValueError(f"{g.to_text()!r} touches a qubit outside width {self.width}")

    @cached_property
    def t_count(self) -> int:
        return sum(g.name in ("T", "TDG") for g in self.gates)

    @cached_property
    def h_count(self) -> int:
        return sum(g.name == "H" for g in self.gates)

    def count(self, name: str) -> int:
        return sum(g.name == name for g in self.gates)

    def __add__(self, other: QuantumCircuit) -> QuantumCircuit:
        if other.width != self.width:
            raise ValueError("width mismatch")
        return QuantumCircuit(self.width, self.gates + other.gates)

    def then(self, gates: Iterable[QGate]) -> QuantumCircuit:
        return QuantumCircuit(self.width, self.gates + tuple(gates))

    def widened(self, width: int, offset: int = 0) -> QuantumCircuit:
        """Embed into ``width`` qubits, shifting indices by ``offset``."""
        moved = [QGate(g.name, tuple(q + offset for q in g.qubits), g.polarity) for g in self.gates]
        return QuantumCircuit(width, tuple(moved))

    def to_text(self, measurement: MeasurementSpec | None = None) -> str:
        lines = [f"qubits {self.width}"] + [g.to_text() for g in self.gates]
        if measurement is not None:
            lines.append(measurement.to_text())
        return "\n".join(lines) + "\n"


def layer(name: str, qubits: Iterable[int]) -> list[QGate]:
    return [QGate(name, (q,)) for q in qubits]


# ---------------------------------------------------------------- text format


def _signed(tok: str) -> tuple[int, int]:
    if tok[0] not in "+-":
        raise ValueError(f"control {tok!r} lacks a polarity sign")
    return int(tok[1:]), int(tok[0] == "+")


def parse_quantum(text: str) -> tuple[QuantumCircuit, MeasurementSpec | None]:
    width = None
    gates: list[QGate] = []
    spec = None
    names = {"CCX": "TOFFOLI", "TOF": "TOFFOLI", "CX": "CNOT", "TDG": "TDG", "SDG": "SDG"}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, *args = line.split()
        try:
            if op == "qubits":
                width = int(args[0])
            elif op == "measure":
                if "accept" not in args:
                    raise ValueError("measure line needs 'accept'")
                i = args.index("accept")
                semantics = "exact-outcome"
                tail = args[i + 1:]
                if tail and tail[-1] == "marginal":
                    semantics, tail = "marginal", tail[:-1]
                spec = MeasurementSpec(tuple(map(int, args[:i])), tuple(map(int, tail)), semantics)
            elif op.upper() == "GTOF":
                ctl = [_signed(a) for a in args[:-1]]
                gates.append(gtoffoli(ctl, int(args[-1])))
            elif op.upper() == "MCZ":
                gates.append(mcz([_signed(a) for a in args]))
            else:
                name = names.get(op.upper(), op.upper())
                gates.append(QGate(name, tuple(map(int, args))))
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), lineno) from None
    if width is None:
        raise ParseError("missing 'qubits' line")
    try:
        qc = QuantumCircuit(width, tuple(gates))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if spec is not None and any(not 0 <= q < width for q in spec.measured_qubits):
        raise ParseError("measured qubit outside circuit")
    return qc, spec


# ---------------------------------------------------------------- transforms


def _lift_gate(g: RGate) -> QGate:
    kind = g.kind
    if kind == "NOT":
        return QGate("X", (g.target,))
    if kind == "CNOT":
        return QGate("CNOT", (g.controls[0][0], g.target))
    if kind == "TOF":
        return QGate("TOFFOLI", (g.controls[0][0], g.controls[1][0], g.target))
    return gtoffoli(g.controls, g.target)


def lift_reversible(circuit: ReversibleCircuit) -> QuantumCircuit:
    return QuantumCircuit(circuit.width, tuple(_lift_gate(g) for g in circuit.gates))


def decompose_multicontrolled(qc: QuantumCircuit, borrowed: int | None = None) -> QuantumCircuit:
    """Rewrite GTOFFOLI and MCZ into X/CNOT/TOFFOLI/H/Z using one borrowed qubit.

    MCZ is symmetric, so one of its qubits becomes the target of a GTOFFOLI
    conjugated by H (and by X when that qubit's polarity is 0).
    """
    out: list[QGate] = []
    for g in qc.gates:
        if g.name == "GTOFFOLI":
            ctl = tuple(zip(g.qubits[:-1], g.polarity))
            rg = RGate(ctl, g.qubits[-1])
            if rg.kind == "GTOF":
                out += [_lift_gate(x) for x in decompose_gtoffoli(rg, borrowed)]
            else:
                out.append(_lift_gate(rg))
        elif g.name == "MCZ":
            t, pt = g.qubits[-1], g.polarity[-1]
            ctl = tuple(zip(g.qubits[:-1], g.polarity[:-1]))
            flip = [] if pt else [QGate("X", (t,))]
            if not ctl:
                out += flip + [QGate("Z", (t,))] + flip
                continue
            body = [_lift_gate(x) for x in decompose_gtoffoli(RGate(ctl, t), borrowed)]
            h = [QGate("H", (t,))]
            out += flip + h + body + h + flip
        else:
            out.append(g)
    return QuantumCircuit(qc.width, tuple(out))


def toffoli_network(a: int, b: int, c: int) -> list[QGate]:
    """Exact CCX(a, b -> c): 6 CNOT, 2 H, 7 T/TDG, 1 S."""
    return [
        QGate("H", (c,)),
        QGate("CNOT", (b, c)),
        QGate("TDG", (c,)),
        QGate("CNOT", (a, c)),
        QGate("T", (c,)),
        QGate("CNOT", (b, c)),
        QGate("TDG", (c,)),
        QGate("CNOT", (a, c)),
        QGate("TDG", (b,)),
        QGate("T", (c,)),
        QGate("H", (c,)),
        QGate("CNOT", (a, b)),
        QGate("TDG", (b,)),
        QGate("CNOT", (a, b)),
        QGate("S", (b,)),
        QGate("T", (a,)),
    ]


def toffoli_to_clifford_t(qc: QuantumCircuit) -> QuantumCircuit:
    out: list[QGate] = []
    for g in qc.gates:
        if g.name in ("GTOFFOLI", "MCZ"):
            raise ValueError(f"{g.name} present; decompose multi-controlled gates first")
        if g.name == "TOFFOLI":
            out += toffoli_network(*g.qubits)
        else:
            out.append(g)
    return QuantumCircuit(qc.width, tuple(out))


def rewrite_to_htcz(qc: QuantumCircuit) -> QuantumCircuit:
    """Phase-exact rewrite into {H, T, CZ}."""
    out: list[QGate] = []
    powers = {"Z": 4, "S": 2, "SDG": 6, "TDG": 7}
    for g in qc.gates:
        q = g.qubits
        if g.name in ("H", "T", "CZ"):
            out.append(g)
        elif g.name in powers:
            out += [QGate("T", q)] * powers[g.name]
        elif g.name == "X":
            out += [QGate("H", q)] + [QGate("T", q)] * 4 + [QGate("H", q)]
        elif g.name == "CNOT":
            c, t = q
            out += [QGate("H", (t,)), QGate("CZ", (c, t)), QGate("H", (t,))]
        else:
            raise ValueError(f"cannot rewrite gate {g.name} into H/T/CZ")
    return QuantumCircuit(qc.width, tuple(out))


def inverse(qc: QuantumCircuit) -> QuantumCircuit:
    return QuantumCircuit(qc.width, tuple(g.inverse() for g in reversed(qc.gates)))

"""Reversible NOT/TOFFOLI circuits and the compilers that produce them.

Two compilers are provided:

* :func:`compile_boolean_naive` gives every AND/OR gate its own zeroed
  ancilla, producing ``|x>|0^xi> -> |junk(x)>|f(x)>`` with the output on the
  last bit.
* :func:`compile_cnf_counter` evaluates a k-CNF clause by clause into k-1
  reusable scratch bits, tallies satisfied clauses in a ``ceil(log2(L+1))``-bit
  counter, and compares the tally against ``L`` with one generalized TOFFOLI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .boolean import BooleanFunction, CnfFormula, ParseError, as_circuit

Control = tuple[int, int]  # (bit, polarity); polarity 1 fires on |1>, 0 on |0>


@dataclass(frozen=True)
class RGate:
    """X on ``target`` conditioned on every ``(bit, polarity)`` in ``controls``."""

    controls: tuple[Control, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple((int(b), int(p)) for b, p in self.controls))
        bits = [b for b, _ in self.controls] + [self.target]
        if len(set(bits)) != len(bits):
            raise ValueError(f"repeated bit in gate {self}")
        if any(p not in (0, 1) for _, p in self.controls):
            raise ValueError("polarity must be 0 or 1")

    @property
    def kind(self) -> str:
        if not self.controls:
            return "NOT"
        if all(p == 1 for _, p in self.controls):
            if len(self.controls) == 1:
                return "CNOT"
            if len(self.controls) == 2:
                return "TOF"
        return "GTOF"

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self.controls) + (self.target,)

    def to_text(self) -> str:
        kind = self.kind
        if kind == "NOT":
            return f"NOT {self.target}"
        if kind == "TOF":
            return f"TOF {self.controls[0][0]} {self.controls[1][0]} {self.target}"
        ctl = " ".join(("+" if p else "-") + str(b) for b, p in self.controls)
        return f"GTOF {ctl} {self.target}"


def NOT(t: int) -> RGate:
    return RGate((), t)


def CNOT(c: int, t: int) -> RGate:
    return RGate(((c, 1),), t)


def TOF(c1: int, c2: int, t: int) -> RGate:
    return RGate(((c1, 1), (c2, 1)), t)


def GTOF(controls: Sequence[Control], t: int) -> RGate:
    return RGate(tuple(controls), t)


@dataclass(frozen=True)
class AncillaLedger:
    n: int
    xi: int
    breakdown: dict[str, int]
    output_bit: int
    borrowed_bit: int | None = None

    def __post_init__(self):
        if sum(self.breakdown.values()) != self.xi:
            raise ValueError(f"ledger breakdown {self.breakdown} does not sum to xi={self.xi}")

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "xi": self.xi,
            "breakdown": dict(self.breakdown),
            "output_bit": self.output_bit,
            "borrowed_bit": self.borrowed_bit,
        }


@dataclass(frozen=True)
class ReversibleCircuit:
    width: int
    gates: tuple[RGate, ...]
    ledger: AncillaLedger | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(not 0 <= b < self.width for b in g.bits):
                raise ValueError(f"gate {g.to_text()!r} touches a bit outside width {self.width}")

    def inverse(self) -> ReversibleCircuit:
        # every gate is an involution
        return ReversibleCircuit(self.width, self.gates[::-1], self.ledger)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    def to_text(self) -> str:
        return "\n".join([f"width {self.width}"] + [g.to_text() for g in self.gates]) + "\n"


def parse_reversible(text: str) -> ReversibleCircuit:
    width = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, *args = line.split()
        try:
            if op == "width":
                width = int(args[0])
            elif op == "NOT" and len(args) == 1:
                gates.append(NOT(int(args[0])))
            elif op == "CNOT" and len(args) == 2:
                gates.append(CNOT(int(args[0]), int(args[1])))
            elif op == "TOF" and len(args) == 3:
                gates.append(TOF(*map(int, args)))
            elif op == "GTOF" and args:
                ctl = []
                for a in args[:-1]:
                    if a[0] not in "+-":
                        raise ValueError(f"control {a!r} lacks a polarity sign")
                    ctl.append((int(a[1:]), int(a[0] == "+")))
                gates.append(GTOF(ctl, int(args[-1])))
            else:
                raise ValueError(f"cannot parse {line!r}")
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), lineno) from None
    if width is None:
        raise ParseError("missing 'width' line")
    try:
        return ReversibleCircuit(width, tuple(gates))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# ---------------------------------------------------------------- execution


def run_reversible(circuit: ReversibleCircuit, bits: Sequence[int]) -> tuple[int, ...]:
    if len(bits) != circuit.width:
        raise ValueError(f"input has {len(bits)} bits, circuit width is {circuit.width}")
    state = [int(b) & 1 for b in bits]
    for g in circuit.gates:
        if all(state[b] == p for b, p in g.controls):
            state[g.target] ^= 1
    return tuple(state)


def run_reversible_batch(circuit: ReversibleCircuit, states: np.ndarray) -> np.ndarray:
    """Run on a ``(batch, width)`` 0/1 array; returns a new array."""
    s = np.array(states, dtype=bool).T.copy()
    if s.shape[0] != circuit.width:
        raise ValueError(f"states have {s.shape[0]} bits, circuit width is {circuit.width}")
    for g in circuit.gates:
        mask = np.ones(s.shape[1], dtype=bool)
        for b, p in g.controls:
            mask &= s[b] if p else ~s[b]
        s[g.target] ^= mask
    return s.T.astype(np.int8)


# ---------------------------------------------------------------- gadgets


def and_gadget(a: int, b: int, anc: int) -> list[RGate]:
    return [TOF(a, b, anc)]


def or_gadget(a: int, b: int, anc: int) -> list[RGate]:
    """OR(a, b) -> anc via De Morgan; a and b are restored."""
    return [NOT(a), NOT(b), TOF(a, b, anc), NOT(anc), NOT(a), NOT(b)]


def compile_gate_gadgets(op: str, a: int, b: int, anc: int) -> list[RGate]:
    if op == "AND":
        return and_gadget(a, b, anc)
    if op == "OR":
        return or_gadget(a, b, anc)
    raise ValueError(f"no gadget for {op!r}")


def _literal_gate(op: str, a: Control, b: Control, anc: int) -> list[RGate]:
    """AND/OR of two signed wires into a zeroed ancilla using NOT/CNOT/TOFFOLI."""
    (ba, pa), (bb, pb) = a, b
    if ba == bb:
        # degenerate: both inputs read the same bit
        if pa == pb:
            return [CNOT(ba, anc)] + ([NOT(anc)] if pa == 0 else [])
        return [NOT(anc)] if op == "OR" else []
    if op == "AND":
        flips = [NOT(x) for x, p in ((ba, pa), (bb, pb)) if p == 0]
        return flips + [TOF(ba, bb, anc)] + flips
    # OR gadget; a negated input cancels the gadget's own NOT on that wire
    flips = [NOT(x) for x, p in ((ba, pa), (bb, pb)) if p == 1]
    return flips + [TOF(ba, bb, anc), NOT(anc)] + flips


def build_counter(r: int, a: int = 0, register: Sequence[int] | None = None, width: int | None = None) -> ReversibleCircuit:
    """|a>|b> -> |a>|b + a mod 2^r> with r generalized TOFFOLIs, widest first.

    ``register`` lists the counter bits most-significant first; by default the
    control is bit 0 and the register occupies bits 1..r.
    """
    if r < 1:
        raise ValueError("counter needs r >= 1")
    reg = list(register) if register is not None else list(range(1, r + 1))
    if len(reg) != r:
        raise ValueError("register length must equal r")
    gates = [GTOF([(a, 1)] + [(c, 1) for c in reg[i + 1:]], reg[i]) for i in range(r)]
    return ReversibleCircuit(width if width is not None else max([a] + reg) + 1, tuple(gates))


# ---------------------------------------------------------------- compilers


def compile_cnf_counter(f: CnfFormula) -> ReversibleCircuit:
    """Clause-by-clause counter construction.

    Layout: payload ``[0, n)``, clause scratch (k-1 bits), counter register
    (``ceil(log2(m+1))`` bits, most significant first), one borrowed bit for
    generalized-TOFFOLI decomposition, and the output bit last.
    """
    if not isinstance(f, CnfFormula):
        raise TypeError("compile_cnf_counter expects a CnfFormula")
    if f.m == 0:
        raise ValueError("formula has no clauses")
    n, k, L = f.n, f.k, f.m
    if k > n:
        raise ValueError(f"clause width k={k} exceeds n={n}")
    r = math.ceil(math.log2(L + 1))
    scratch = list(range(n, n + k - 1))
    counter = list(range(n + k - 1, n + k - 1 + r))
    borrowed = n + k - 1 + r
    out = borrowed + 1
    width = out + 1

    gates: list[RGate] = []
    for clause in f.clauses:
        lits = [(abs(l) - 1, int(l > 0)) for l in clause]
        compute: list[RGate] = []
        acc = lits[0]
        for i, lit in enumerate(lits[1:]):
            compute += _literal_gate("OR", acc, lit, scratch[i])
            acc = (scratch[i], 1)
        gates += compute
        gates += [GTOF([acc] + [(c, 1) for c in counter[i + 1:]], counter[i]) for i in range(r)]
        gates += compute[::-1]
    pattern = [(c, (L >> (r - 1 - i)) & 1) for i, c in enumerate(counter)]
    gates.append(GTOF(pattern, out))

    ledger = AncillaLedger(
        n=n,
        xi=width - n,
        breakdown={"clause_scratch": k - 1, "counter": r, "borrowed": 1, "output": 1},
        output_bit=out,
        borrowed_bit=borrowed,
    )
    return ReversibleCircuit(width, tuple(gates), ledger)


def compile_boolean_naive(f: BooleanFunction) -> ReversibleCircuit:
    """One zeroed ancilla per AND/OR gate; the output gate's ancilla is the last bit.

    NOT gates cost nothing: they flip the polarity with which later gates read
    a wire.  A negated output is fixed up with a trailing NOT.
    """
    circ = as_circuit(f)
    n = circ.n
    gate_wires = [n + i for i, g in enumerate(circ.gates) if g.op != "NOT"]
    xi = len(gate_wires)

    # resolve the output wire through NOT chains to find its driving gate
    def root(w: int) -> tuple[int, int]:
        pol = 1
        while w >= n and circ.gates[w - n].op == "NOT":
            w = circ.gates[w - n].inputs[0]
            pol ^= 1
        return w, pol

    out_wire, out_pol = root(circ.output)
    slot: dict[int, int] = {}
    order = [w for w in gate_wires if w != out_wire] + ([out_wire] if out_wire >= n else [])
    for i, w in enumerate(order):
        slot[w] = n + i
    if out_wire < n and not (xi == 0 and out_wire == n - 1):
        raise ValueError("output is a bare input; pad f with a gate such as AND(x_i, x_i)")

    value: dict[int, Control] = {i: (i, 1) for i in range(n)}
    gates: list[RGate] = []
    for i, g in enumerate(circ.gates):
        w = n + i
        if g.op == "NOT":
            b, p = value[g.inputs[0]]
            value[w] = (b, p ^ 1)
            continue
        gates += _literal_gate(g.op, value[g.inputs[0]], value[g.inputs[1]], slot[w])
        value[w] = (slot[w], 1)
    out_bit = slot.get(out_wire, out_wire)
    if out_pol == 0:
        gates.append(NOT(out_bit))
    ledger = AncillaLedger(
        n=n,
        xi=xi,
        breakdown={"and": circ.num_and, "or": circ.num_or},
        output_bit=out_bit,
    )
    return ReversibleCircuit(n + xi, tuple(gates), ledger)


# ---------------------------------------------------------------- decomposition


def _vchain(controls: list[int], target: int, dirty: list[int]) -> list[RGate]:
    """C^c X with c-2 borrowed bits of arbitrary value, all restored."""
    c = len(controls)
    if c == 1:
        return [CNOT(controls[0], target)]
    if c == 2:
        return [TOF(controls[0], controls[1], target)]
    anc = dirty[: c - 2]
    if len(anc) < c - 2:
        raise ValueError(f"{c} controls need {c - 2} borrowed bits, have {len(dirty)}")
    top = TOF(controls[-1], anc[-1], target)
    down = [TOF(controls[i + 2], anc[i], anc[i + 1]) for i in range(c - 4, -1, -1)]
    base = TOF(controls[0], controls[1], anc[0])
    half = [top] + down + [base] + down[::-1]
    return half + half


def decompose_gtoffoli(g: RGate, borrowed: int | None) -> list[RGate]:
    """Rewrite a generalized TOFFOLI into NOT/CNOT/TOFFOLI.

    Three or more controls use the single ``borrowed`` bit, whose initial value
    may be anything and is restored.  The controls are split into halves A and
    B; the pattern ``[A->anc] [B,anc->t] [A->anc] [B,anc->t]`` leaves
    ``t ^= AND(A) AND(B)``, and each half is a V-chain borrowing the idle bits
    of the other half.
    """
    flips = [NOT(b) for b, p in g.controls if p == 0]
    ctl = [b for b, _ in g.controls]
    c = len(ctl)
    if c <= 2:
        core = [RGate(tuple((b, 1) for b in ctl), g.target)]
    else:
        if borrowed is None or borrowed in g.bits:
            raise ValueError("a free borrowed bit distinct from the gate's bits is required")
        m1 = (c + 1) // 2
        A, B = ctl[:m1], ctl[m1:]
        first = _vchain(A, borrowed, B + [g.target])
        second = _vchain(B + [borrowed], g.target, A)
        core = first + second + first + second
    return flips + core + flips


def decompose_circuit(circuit: ReversibleCircuit, borrowed: int | None = None) -> ReversibleCircuit:
    """Decompose every gate with three or more controls."""
    if borrowed is None and circuit.ledger is not None:
        borrowed = circuit.ledger.borrowed_bit
    gates: list[RGate] = []
    for g in circuit.gates:
        if g.kind == "GTOF":
            gates += decompose_gtoffoli(g, borrowed)
        else:
            gates.append(g)
    return ReversibleCircuit(circuit.width, tuple(gates), circuit.ledger)

"""Seeded random instances for tests, verification sweeps and benchmarks."""
from __future__ import annotations

import numpy as np

from .boolean import BooleanCircuit, CnfFormula, Gate, as_circuit
from .circuit import QGate, QuantumCircuit
from .reversible import CNOT, NOT, TOF, ReversibleCircuit


def random_boolean_circuit(rng: np.random.Generator, n: int, gates: int, not_rate: float = 0.3) -> BooleanCircuit:
    """``gates`` AND/OR gates over n inputs with optional NOTs; the output is the last AND/OR."""
    if n < 1 or gates < 1:
        raise ValueError("need n >= 1 and at least one AND/OR gate")
    out: list[Gate] = []
    wires = list(range(n))
    for _ in range(gates):
        ins = []
        for _ in range(2):
            w = int(rng.choice(wires))
            if rng.random() < not_rate:
                out.append(Gate("NOT", (w,)))
                w = n + len(out) - 1
            ins.append(w)
        out.append(Gate("AND" if rng.random() < 0.5 else "OR", tuple(ins)))
        wires.append(n + len(out) - 1)
    return BooleanCircuit(n, tuple(out), n + len(out) - 1)


def random_cnf(rng: np.random.Generator, n: int, m: int, k: int) -> CnfFormula:
    """m clauses of k distinct variables with random signs."""
    if k > n:
        raise ValueError("clause width exceeds n")
    clauses = []
    for _ in range(m):
        vs = rng.choice(n, size=k, replace=False) + 1
        signs = rng.choice([-1, 1], size=k)
        clauses.append(tuple(int(v * s) for v, s in zip(vs, signs)))
    return CnfFormula(n, tuple(clauses))


def _embed(g: BooleanCircuit, n: int, shift: int) -> tuple[list[Gate], int]:
    """g's gates with input i renamed to i + shift and gate wires moved into an n-input circuit."""
    gates = []
    for gt in g.gates:
        gates.append(Gate(gt.op, tuple(w + shift if w < g.n else w - g.n + n for w in gt.inputs)))
    out = g.output + shift if g.output < g.n else g.output - g.n + n
    return gates, out


def balanced_function(g: BooleanCircuit) -> BooleanCircuit:
    """f(x1, y) = (x1 AND g(y)) OR (NOT x1 AND NOT g(y)): #f = 2^g.n exactly."""
    g = as_circuit(g)
    n = g.n + 1
    gates, gout = _embed(g, n, 1)

    def add(op, *ins):
        gates.append(Gate(op, ins))
        return n + len(gates) - 1

    left = add("AND", 0, gout)
    nx = add("NOT", 0)
    ng = add("NOT", gout)
    right = add("AND", nx, ng)
    add("OR", left, right)
    return BooleanCircuit(n, tuple(gates), n + len(gates) - 1)


def pinned_function(g: BooleanCircuit, a: tuple[int, ...]) -> BooleanCircuit:
    """g AND [x = a]: #f is 1 when g(a) = 1 and 0 otherwise."""
    g = as_circuit(g)
    n = g.n
    if len(a) != n:
        raise ValueError("pin length differs from n")
    gates = list(g.gates)

    def add(op, *ins):
        gates.append(Gate(op, ins))
        return n + len(gates) - 1

    acc = g.output
    for i, bit in enumerate(a):
        lit = i if bit else add("NOT", i)
        acc = add("AND", acc, lit)
    return BooleanCircuit(n, tuple(gates), acc)


def random_htcz_circuit(rng: np.random.Generator, width: int, h: int, extra: int | None = None) -> QuantumCircuit:
    """A circuit over {H, T, CZ} with exactly ``h`` Hadamards."""
    extra = 2 * h if extra is None else extra
    kinds = ["H"] * h + [("T" if width < 2 or rng.random() < 0.5 else "CZ") for _ in range(extra)]
    rng.shuffle(kinds)
    gates = []
    for name in kinds:
        if name == "CZ":
            q = rng.choice(width, size=2, replace=False)
            gates.append(QGate("CZ", (int(q[0]), int(q[1]))))
        else:
            gates.append(QGate(name, (int(rng.integers(width)),)))
    return QuantumCircuit(width, tuple(gates))


_CLIFFORD_T_1Q = ("H", "S", "SDG", "X", "Z", "T", "TDG")


def random_clifford_t(rng: np.random.Generator, width: int, gates: int, t_max: int) -> QuantumCircuit:
    """Random Clifford+T circuit with at most ``t_max`` T/TDG gates."""
    out = []
    t = 0
    for _ in range(gates):
        choice = int(rng.integers(len(_CLIFFORD_T_1Q) + 2))
        if choice >= len(_CLIFFORD_T_1Q) and width >= 2:
            q = rng.choice(width, size=2, replace=False)
            out.append(QGate("CNOT" if choice == len(_CLIFFORD_T_1Q) else "CZ", (int(q[0]), int(q[1]))))
            continue
        name = _CLIFFORD_T_1Q[choice % len(_CLIFFORD_T_1Q)]
        if name in ("T", "TDG"):
            if t >= t_max:
                name = "S"
            else:
                t += 1
        out.append(QGate(name, (int(rng.integers(width)),)))
    return QuantumCircuit(width, tuple(out))


def random_reversible(rng: np.random.Generator, width: int, gates: int) -> ReversibleCircuit:
    """NOT/CNOT/TOF circuit on ``width`` bits."""
    out = []
    for _ in range(gates):
        kind = int(rng.integers(3)) if width >= 3 else int(rng.integers(min(width, 2)))
        bits = [int(b) for b in rng.choice(width, size=kind + 1, replace=False)]
        out.append((NOT, CNOT, TOF)[kind](*bits))
    return ReversibleCircuit(width, tuple(out))


def formula_corpus(seed: int, size: int, n_max: int = 5, xi_max: int = 4) -> list[BooleanCircuit]:
    """Random circuits with 1 <= n <= n_max and 1 <= xi <= xi_max."""
    rng = np.random.default_rng(seed)
    return [
        random_boolean_circuit(rng, int(rng.integers(1, n_max + 1)), int(rng.integers(1, xi_max + 1)))
        for _ in range(size)
    ]

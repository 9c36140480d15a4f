"""Boolean functions: CNF formulas, AND/OR/NOT circuits, and brute-force counting.

Assignments are bit tuples ``x = (x1, ..., xn)``.  Enumeration order is
lexicographic with ``x1`` as the most significant bit, so assignment index
``i`` has ``x_j = (i >> (n - j)) & 1``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_ENUM_CAP = 28
_CHUNK = 1 << 18


class ParseError(ValueError):
    """Malformed DIMACS or circuit text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EnumerationLimitError(ValueError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get("FGS_ENUM_CAP")
    return int(raw) if raw else DEFAULT_ENUM_CAP


@dataclass(frozen=True)
class CnfFormula:
    """A CNF over variables ``1..n``; literals are signed ints as in DIMACS."""

    n: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.n < 0:
            raise ValueError("negative variable count")
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f"literal {lit} out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def k(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    @property
    def density(self) -> float:
        """Clause density m/n (recorded only; never used computationally)."""
        return self.m / self.n if self.n else float("inf")

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Gate:
    op: str  # "AND" | "OR" | "NOT"
    inputs: tuple[int, ...]


@dataclass(frozen=True)
class BooleanCircuit:
    """Topologically ordered AND/OR/NOT circuit.

    Wires ``0..n-1`` are the inputs ``x1..xn``; gate ``i`` drives wire ``n + i``.
    """

    n: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for i, g in enumerate(self.gates):
            arity = 1 if g.op == "NOT" else 2
            if g.op not in ("AND", "OR", "NOT"):
                raise ValueError(f"unknown gate {g.op!r}")
            if len(g.inputs) != arity:
                raise ValueError(f"gate {i} ({g.op}) needs {arity} inputs")
            for w in g.inputs:
                if not 0 <= w < self.n + i:
                    raise ValueError(f"gate {i} reads wire {w}, not yet defined")
        if not 0 <= self.output < self.n + len(self.gates):
            raise ValueError("output wire out of range")

    @property
    def num_and(self) -> int:
        return sum(g.op == "AND" for g in self.gates)

    @property
    def num_or(self) -> int:
        return sum(g.op == "OR" for g in self.gates)

    def to_text(self) -> str:
        lines = [f"inputs {self.n}"]
        for i, g in enumerate(self.gates):
            lines.append(f"g{i + 1} = {g.op} " + " ".join(self._wire_name(w) for w in g.inputs))
        lines.append(f"out {self._wire_name(self.output)}")
        return "\n".join(lines) + "\n"

    def _wire_name(self, w: int) -> str:
        return f"x{w + 1}" if w < self.n else f"g{w - self.n + 1}"


BooleanFunction = Union[CnfFormula, BooleanCircuit]


@dataclass(frozen=True)
class CountReport:
    sharp: int
    gap: int
    n: int

    def as_dict(self) -> dict:
        return {"sharp": self.sharp, "gap": self.gap, "n": self.n}


# ---------------------------------------------------------------- parsing


def parse_dimacs(text: str) -> CnfFormula:
    n = m = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad header {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("negative counts in header", lineno)
            continue
        if n is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"unexpected token {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > n:
                raise ParseError(f"literal {lit} out of range 1..{n}", lineno)
            else:
                current.append(lit)
    if n is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def parse_circuit(text: str) -> BooleanCircuit:
    """Parse the ``g<i> = OP a b`` / ``out w`` circuit format."""
    n_declared = None
    gates: list[tuple[str, list[str], int]] = []
    out = None
    names: dict[str, int] = {}
    max_input = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "inputs":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"bad inputs line {line!r}", lineno)
            n_declared = int(parts[1])
        elif parts[0] == "out":
            if len(parts) != 2:
                raise ParseError(f"bad out line {line!r}", lineno)
            out = (parts[1], lineno)
        elif len(parts) >= 3 and parts[1] == "=":
            name, op, args = parts[0], parts[2].upper(), parts[3:]
            if name in names:
                raise ParseError(f"gate {name} redefined", lineno)
            if op not in ("AND", "OR", "NOT"):
                raise ParseError(f"unknown gate type {op!r}", lineno)
            if len(args) != (1 if op == "NOT" else 2):
                raise ParseError(f"{op} takes {1 if op == 'NOT' else 2} inputs", lineno)
            names[name] = len(gates)
            gates.append((op, args, lineno))
            for a in args:
                if a.startswith("x") and a[1:].isdigit():
                    max_input = max(max_input, int(a[1:]))
        else:
            raise ParseError(f"cannot parse {line!r}", lineno)
    if out is None:
        raise ParseError("missing 'out' line")
    if out[0].startswith("x") and out[0][1:].isdigit():
        max_input = max(max_input, int(out[0][1:]))
    n = n_declared if n_declared is not None else max_input

    def resolve(ref: str, lineno: int, before: int) -> int:
        if ref.startswith("x") and ref[1:].isdigit():
            i = int(ref[1:])
            if not 1 <= i <= n:
                raise ParseError(f"input {ref} out of range 1..{n}", lineno)
            return i - 1
        if ref in names and names[ref] < before:
            return n + names[ref]
        raise ParseError(f"undefined wire {ref!r}", lineno)

    built = [Gate(op, tuple(resolve(a, ln, i) for a in args)) for i, (op, args, ln) in enumerate(gates)]
    return BooleanCircuit(n, tuple(built), resolve(out[0], out[1], len(gates)))


# ---------------------------------------------------------------- evaluation


def eval_function(f: BooleanFunction, x: Sequence[int]) -> int:
    if len(x) != f.n:
        raise ValueError(f"assignment has length {len(x)}, expected {f.n}")
    if isinstance(f, CnfFormula):
        return int(all(any((x[abs(l) - 1] == 1) == (l > 0) for l in c) for c in f.clauses))
    wires = list(x)
    for g in f.gates:
        a = wires[g.inputs[0]]
        if g.op == "NOT":
            wires.append(1 - a)
        elif g.op == "AND":
            wires.append(a & wires[g.inputs[1]])
        else:
            wires.append(a | wires[g.inputs[1]])
    return int(wires[f.output])


def _eval_batch(f: BooleanFunction, idx: np.ndarray) -> np.ndarray:
    n = f.n
    bits = [((idx >> (n - 1 - j)) & 1).astype(bool) for j in range(n)]
    if isinstance(f, CnfFormula):
        result = np.ones(idx.shape, dtype=bool)
        for c in f.clauses:
            sat = np.zeros(idx.shape, dtype=bool)
            for l in c:
                b = bits[abs(l) - 1]
                sat |= b if l > 0 else ~b
            result &= sat
        return result
    wires = list(bits)
    for g in f.gates:
        a = wires[g.inputs[0]]
        if g.op == "NOT":
            wires.append(~a)
        elif g.op == "AND":
            wires.append(a & wires[g.inputs[1]])
        else:
            wires.append(a | wires[g.inputs[1]])
    out = wires[f.output]
    return np.broadcast_to(out, idx.shape)


def truth_table(f: BooleanFunction) -> np.ndarray:
    """f(x) for every x, in enumeration order (small n only)."""
    _check_cap(f.n)
    return _eval_batch(f, np.arange(1 << f.n, dtype=np.int64)).astype(np.int8)


def _check_cap(n: int, cap: int | None = None) -> None:
    cap = enumeration_cap() if cap is None else cap
    if n > cap:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration cap of {cap}")


def count(f: BooleanFunction, cap: int | None = None) -> CountReport:
    _check_cap(f.n, cap)
    total = 1 << f.n
    sharp = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        sharp += int(np.count_nonzero(_eval_batch(f, idx)))
    return CountReport(sharp=sharp, gap=total - 2 * sharp, n=f.n)


def assignments(n: int) -> Iterable[tuple[int, ...]]:
    for i in range(1 << n):
        yield tuple((i >> (n - 1 - j)) & 1 for j in range(n))


# ---------------------------------------------------------------- lowering


@dataclass
class _Builder:
    n: int
    gates: list[Gate] = field(default_factory=list)

    def add(self, op: str, *inputs: int) -> int:
        self.gates.append(Gate(op, tuple(inputs)))
        return self.n + len(self.gates) - 1

    def tree(self, op: str, wires: list[int]) -> int:
        while len(wires) > 1:
            nxt = [self.add(op, wires[i], wires[i + 1]) for i in range(0, len(wires) - 1, 2)]
            if len(wires) % 2:
                nxt.append(wires[-1])
            wires = nxt
        return wires[0]

    def build(self, output: int) -> BooleanCircuit:
        return BooleanCircuit(self.n, tuple(self.gates), output)


def cnf_to_circuit(f: CnfFormula) -> BooleanCircuit:
    """Balanced OR tree per clause, balanced AND tree over clauses.

    A width-3 clause costs exactly two ORs and the conjunction m-1 ANDs, so a
    3-CNF lowers to 2m ORs and m-1 ANDs.
    """
    if f.m == 0:
        raise ValueError("cannot lower a CNF with no clauses")
    b = _Builder(f.n)
    negated: dict[int, int] = {}

    def literal(l: int) -> int:
        v = abs(l) - 1
        if l > 0:
            return v
        if v not in negated:
            negated[v] = b.add("NOT", v)
        return negated[v]

    clause_wires = [b.tree("OR", [literal(l) for l in c]) for c in f.clauses]
    return b.build(b.tree("AND", clause_wires))


def as_circuit(f: BooleanFunction) -> BooleanCircuit:
    return cnf_to_circuit(f) if isinstance(f, CnfFormula) else f


def constant_circuit(n: int, value: int) -> BooleanCircuit:
    """f = x1 AND NOT x1 (value 0) or x1 OR NOT x1 (value 1)."""
    if n < 1:
        raise ValueError("need at least one input")
    b = _Builder(n)
    nx = b.add("NOT", 0)
    return b.build(b.add("OR" if value else "AND", 0, nx))


def unique_gap_reduction(f: BooleanFunction) -> BooleanCircuit:
    """g(x, x_{n+1}) = [x_{n+1} AND NOT f(x)] OR [NOT x_{n+1} AND x1 AND ... AND xn].

    gap(g) = 2^n - 2 + sum_x (-1)^{NOT f(x)}, so #f = 1 gives gap(g) = 0 and
    #f = 0 gives gap(g) = -2.
    """
    f = as_circuit(f)
    if f.n < 1:
        raise ValueError("unique_gap_reduction needs n >= 1")
    n = f.n
    b = _Builder(n + 1)

    def shift(w: int) -> int:
        # f's gate wires move up by one because the new input x_{n+1} is inserted
        return w if w < n else w + 1

    for g in f.gates:
        b.add(g.op, *(shift(w) for w in g.inputs))
    xnew = n
    not_f = b.add("NOT", shift(f.output))
    left = b.add("AND", xnew, not_f)
    all_x = b.tree("AND", list(range(n)))
    right = b.add("AND", b.add("NOT", xnew), all_x)
    return b.build(b.add("OR", left, right))

"""Path sums for Clifford+T circuits with affine wire values.

Wires carry GF(2)-affine forms over the Hadamard variables, so X, CNOT, Z, S,
T and CZ add phases without adding variables.  A phase w^{a e} on a wire with
value e uses the integer lift of e: for bits u, w, u xor w = u + w - 2uw.  The
resulting polynomial is taken mod 8, where lifted products of four or more
variables vanish, so the degree is at most 3 before boundary substitution.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..circuit import QuantumCircuit, decompose_multicontrolled, toffoli_to_clifford_t
from ..statevector import Basis, basis_bits
from .cyclotomic import CyclotomicAmplitude
from .multilinear import IntPolynomial
from .phase import PhasePolynomialMod8

_PHASE_WEIGHT = {"Z": 4, "S": 2, "SDG": 6, "T": 1, "TDG": 7}


@dataclass(frozen=True)
class PathSum:
    """amplitude = 2^{-h/2} sum_{x in {0,1}^v} w^{poly(x)}, coefficients mod 8."""

    poly: IntPolynomial
    h: int
    zero: bool = False

    @property
    def v(self) -> int:
        return self.poly.nvars

    def as_phase_polynomial(self) -> PhasePolynomialMod8 | None:
        """The {0,4}-quadratic form, when the polynomial has one."""
        if self.zero:
            return PhasePolynomialMod8(0, h=self.h, zero=True)
        v = self.v
        lin = [0] * v
        quad = {}
        const = 0
        for m, c in self.poly.terms.items():
            idx = [i for i in range(v) if m >> (v - 1 - i) & 1]
            if not idx:
                const = c
            elif len(idx) == 1:
                lin[idx[0]] = c
            elif len(idx) == 2 and c % 8 in (0, 4):
                quad[tuple(idx)] = c
            else:
                return None
        return PhasePolynomialMod8(v, const, tuple(lin), quad, h=self.h)


class _Builder:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self.terms: dict[int, int] = {}

    def bit(self, i: int) -> int:
        return 1 << (self.nvars - 1 - i)

    def add(self, mask: int, coeff: int) -> None:
        c = (self.terms.get(mask, 0) + coeff) % 8
        if c:
            self.terms[mask] = c
        else:
            self.terms.pop(mask, None)

    def add_lift(self, expr: tuple[int, int], weight: int) -> None:
        """Add weight * lift(expr) where expr = (variable mask, constant bit)."""
        mask, c = expr
        self.add_lift_monomials([1 << b for b in range(self.nvars) if mask >> b & 1], c, weight)

    def add_lift_monomials(self, monos: list[int], c: int, weight: int) -> None:
        """Add weight * lift(c xor m_1 xor m_2 ...) for Boolean monomials m_i."""
        sign = -1 if c else 1
        self.add(0, weight * c)
        for size in (1, 2, 3):
            coeff = weight * sign * (-2) ** (size - 1)
            if coeff % 8 == 0:
                continue
            for combo in combinations(monos, size):
                m = 0
                for b in combo:
                    m |= b
                self.add(m, coeff)

    def add_product4(self, e1: tuple[int, int], e2: tuple[int, int]) -> None:
        """Add 4 e1 e2 (only parities matter)."""
        (m1, c1), (m2, c2) = e1, e2
        b1 = [1 << b for b in range(self.nvars) if m1 >> b & 1]
        b2 = [1 << b for b in range(self.nvars) if m2 >> b & 1]
        for x in b1:
            for y in b2:
                self.add(x | y, 4)
        if c2:
            for x in b1:
                self.add(x, 4)
        if c1:
            for y in b2:
                self.add(y, 4)
        self.add(0, 4 * c1 * c2)


def _lift_poly(nvars: int, expr: tuple[int, int]) -> IntPolynomial:
    b = _Builder(nvars)
    b.add_lift(expr, 1)
    return IntPolynomial(nvars, b.terms)


def extract_path_sum(qc: QuantumCircuit, a: Basis, b: Basis) -> PathSum:
    """Path sum of <a|qc|b> over {X, CNOT, CZ, H, Z, S, SDG, T, TDG}.

    Boundary conditions ``e_q = a_q`` are solved by Gaussian elimination over
    GF(2); each pivot variable is replaced by the lift of its affine solution.
    """
    n = qc.width
    a_bits, b_bits = basis_bits(a, n), basis_bits(b, n)
    h = qc.h_count
    pb = _Builder(h)
    wire = [(0, bit) for bit in b_bits]
    nxt = 0
    for g in qc.gates:
        q = g.qubits
        if g.name == "H":
            y = pb.bit(nxt)
            nxt += 1
            pb.add_product4(wire[q[0]], (y, 0))
            wire[q[0]] = (y, 0)
        elif g.name in _PHASE_WEIGHT:
            pb.add_lift(wire[q[0]], _PHASE_WEIGHT[g.name])
        elif g.name == "X":
            m, c = wire[q[0]]
            wire[q[0]] = (m, c ^ 1)
        elif g.name == "CNOT":
            (mc, cc), (mt, ct) = wire[q[0]], wire[q[1]]
            wire[q[1]] = (mc ^ mt, cc ^ ct)
        elif g.name == "CZ":
            pb.add_product4(wire[q[0]], wire[q[1]])
        else:
            raise ValueError(f"gate {g.name} is not supported by the affine path sum")

    # GF(2) elimination of e_q xor a_q = 0
    pivots: dict[int, tuple[int, int]] = {}  # pivot bit -> (mask of other vars, const)
    for (m, c), target in zip(wire, a_bits):
        c ^= target
        for pbit, (pm, pc) in pivots.items():
            if m & pbit:
                m = (m ^ pbit) ^ pm
                c ^= pc
        if not m:
            if c:
                return PathSum(IntPolynomial(0, {}), h, zero=True)
            continue
        pbit = m & -m
        expr = (m ^ pbit, c)
        for other, (om, oc) in list(pivots.items()):
            if om & pbit:
                pivots[other] = (om ^ pbit ^ expr[0], oc ^ expr[1])
        pivots[pbit] = expr

    poly = IntPolynomial(h, pb.terms)
    if pivots:
        lifts = {pbit: _lift_poly(h, expr) for pbit, expr in pivots.items()}
        out = IntPolynomial(h, {})
        for mono, coeff in poly.terms.items():
            term = IntPolynomial(h, {mono & ~_mask(pivots): coeff})
            for pbit in pivots:
                if mono & pbit:
                    term = term * lifts[pbit]
            out = out + term
        poly = out.reduce(8)

    # compact the free variables
    free = [i for i in range(h) if not (pb.bit(i) in pivots)]
    v = len(free)
    terms: dict[int, int] = {}
    for mono, coeff in poly.terms.items():
        nm = 0
        for new, old in enumerate(free):
            if mono & pb.bit(old):
                nm |= 1 << (v - 1 - new)
        terms[nm] = (terms.get(nm, 0) + coeff) % 8
    return PathSum(IntPolynomial(v, terms), h)


def _substitute(terms: dict[int, int], nvars: int, zbit: int, monos: list[int], const: int) -> dict[int, int]:
    """Replace variable ``zbit`` by lift(const xor monos), mod 8."""
    b = _Builder(nvars)
    b.add_lift_monomials(monos, const, 1)
    lift = b.terms
    out: dict[int, int] = {}
    for mono, c in terms.items():
        if not mono & zbit:
            out[mono] = (out.get(mono, 0) + c) % 8
            continue
        rest = mono ^ zbit
        for lm, lc in lift.items():
            key = rest | lm
            out[key] = (out.get(key, 0) + c * lc) % 8
    return {m: c for m, c in out.items() if c}


def simplify(ps: PathSum) -> PathSum:
    """Exact variable elimination by the standard path-sum rules.

    Take a variable y whose every appearance is either c y or 4 y m(x) for a
    monomial m, so the sum over y is sum_y w^{c y + 4 y Q(x)} with
    Q = xor of those monomials:

    - c in {0, 4}: the sum is 2 [Q + c/4 = 0 mod 2].  A constant Q either kills
      the amplitude or just scales it; otherwise a variable z that occurs in Q
      only as the bare monomial z is solved for and substituted.
    - c in {2, 6}: the sum is sqrt(2) w^{s (1 - 2 Q)} with s = +1 or -1.

    A factor 2 lowers ``h`` by 2 and a factor sqrt(2) by 1.
    """
    if ps.zero:
        return ps
    v = ps.v
    terms = dict(ps.poly.reduce(8).terms)
    h = ps.h
    alive = {1 << (v - 1 - i) for i in range(v)}
    changed = True
    while changed:
        changed = False
        for ybit in sorted(alive, reverse=True):
            if ybit not in alive:
                continue
            c = terms.get(ybit, 0)
            if c % 2:
                continue
            monos = [m ^ ybit for m in terms if m & ybit and m != ybit]
            if any(terms[m | ybit] != 4 for m in monos):
                continue
            const = c // 4 if c in (0, 4) else 0
            if c in (0, 4) and monos:
                # a pivot must occur in Q only as a bare variable
                pivots = [m for m in monos if not m & (m - 1) and sum(1 for o in monos if o & m) == 1]
                if not pivots:
                    continue
                zbit = min(pivots, key=lambda b: sum(1 for m in terms if m & b))
            for mono in [m for m in terms if m & ybit]:
                del terms[mono]
            alive.discard(ybit)
            changed = True
            if c in (0, 4):
                h -= 2
                if not monos:
                    if const:
                        return PathSum(IntPolynomial(0, {}), ps.h, zero=True)
                    continue
                rest = [m for m in monos if m != zbit]
                terms = _substitute(terms, v, zbit, rest, const)
                alive.discard(zbit)
            else:
                h -= 1
                s = 1 if c == 2 else -1
                b = _Builder(v)
                b.terms = terms
                b.add(0, s)
                b.add_lift_monomials(monos, 0, -2 * s)
                terms = b.terms
    # compact the survivors
    w = len(alive)
    remap = {bit: 1 << (w - 1 - i) for i, bit in enumerate(sorted(alive, reverse=True))}
    out: dict[int, int] = {}
    for mono, coeff in terms.items():
        nm = 0
        for bit, nb in remap.items():
            if mono & bit:
                nm |= nb
        out[nm] = (out.get(nm, 0) + coeff) % 8
    return PathSum(IntPolynomial(w, {m: c for m, c in out.items() if c}), h)


def _mask(pivots: dict[int, tuple[int, int]]) -> int:
    m = 0
    for pbit in pivots:
        m |= pbit
    return m


def prepare_clifford_t(qc: QuantumCircuit, borrowed: int | None = None) -> QuantumCircuit:
    """Lower multi-controlled gates and TOFFOLIs to Clifford+T."""
    if any(g.name in ("GTOFFOLI", "MCZ") for g in qc.gates):
        qc = decompose_multicontrolled(qc, borrowed)
    return toffoli_to_clifford_t(qc)


def path_sum_amplitude(ps: PathSum, method: str = "direct", k: int | None = None) -> CyclotomicAmplitude:
    from .counting import counting_sum_poly
    from .phase import root_counts_poly

    if ps.zero:
        return CyclotomicAmplitude((0, 0, 0, 0), ps.h)
    if method == "direct" or ps.v < 2:
        return CyclotomicAmplitude.from_counts(root_counts_poly(ps.poly), ps.h)
    return CyclotomicAmplitude.from_counts(counting_sum_poly(ps.poly, k), ps.h)


def exact_amplitude(qc: QuantumCircuit, a: Basis, b: Basis, method: str = "direct", k: int | None = None,
                    borrowed: int | None = None, reduce: bool = True) -> CyclotomicAmplitude:
    """Exact <a|qc|b> for any IR circuit; multi-controlled gates need ``borrowed``."""
    ps = extract_path_sum(prepare_clifford_t(qc, borrowed), a, b)
    if reduce:
        ps = simplify(ps)
    return path_sum_amplitude(ps, method, k)

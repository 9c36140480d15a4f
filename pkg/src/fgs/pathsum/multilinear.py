"""Multilinear integer polynomials and the polynomial tools of the counting algorithm.

A monomial over variables ``0..w-1`` is a bitmask in which variable ``i`` is
bit ``w-1-i``.  The same integer indexes assignments (``x_1`` most
significant), so the subset-zeta transform of a dense coefficient table is
the table of values at every assignment.

Products use x_i^2 = x_i, i.e. the monomial of a product is the union of the
factors' monomials.  Dense products are computed as subset-union convolutions
(zeta, pointwise product, Moebius), either exactly or modulo a power of two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .phase import PhasePolynomialMod8

MAX_EVAL_VARS = 26
_SPARSE_LIMIT = 1 << 14


# ---------------------------------------------------------------- dense transforms


def _transform(arr: np.ndarray, w: int, modulus: int | None, sign: int) -> np.ndarray:
    # reduce once at the end when the unreduced partial sums cannot overflow int64
    per_pass = modulus is not None and (arr.dtype == object or modulus.bit_length() + w > 60)
    for b in range(w):
        view = arr.reshape(-1, 2, 1 << b)
        if sign > 0:
            view[:, 1, :] += view[:, 0, :]
        else:
            view[:, 1, :] -= view[:, 0, :]
        if per_pass:
            view[:, 1, :] %= modulus
    if modulus is not None and not per_pass:
        arr %= modulus
    return arr


def zeta(arr: np.ndarray, w: int, modulus: int | None = None) -> np.ndarray:
    """In place: arr[X] <- sum over S subset of X of arr[S]."""
    return _transform(arr, w, modulus, 1)


def moebius(arr: np.ndarray, w: int, modulus: int | None = None) -> np.ndarray:
    """In place inverse of :func:`zeta`."""
    return _transform(arr, w, modulus, -1)


def _dense_dtype(modulus: int | None):
    if modulus is not None and modulus < (1 << 31):
        return np.int64
    return object


def union_product(a: np.ndarray, b: np.ndarray, w: int, modulus: int | None = None) -> np.ndarray:
    """Coefficients of the multilinear product of two dense coefficient tables."""
    za = zeta(a.copy(), w, modulus)
    zb = zeta(b.copy(), w, modulus)
    prod = za * zb
    if modulus is not None:
        prod %= modulus
    return moebius(prod, w, modulus)


# ---------------------------------------------------------------- sparse polynomial


@dataclass(frozen=True)
class IntPolynomial:
    nvars: int
    terms: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        limit = 1 << self.nvars
        clean = {}
        for mask, c in self.terms.items():
            if not 0 <= mask < limit:
                raise ValueError(f"monomial {mask:b} outside {self.nvars} variables")
            if c:
                clean[int(mask)] = int(c)
        object.__setattr__(self, "terms", clean)

    # construction
    @classmethod
    def constant(cls, nvars: int, c: int) -> IntPolynomial:
        return cls(nvars, {0: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> IntPolynomial:
        return cls(nvars, {1 << (nvars - 1 - i): 1})

    @classmethod
    def from_dense(cls, arr: np.ndarray, nvars: int) -> IntPolynomial:
        nz = np.flatnonzero(arr)
        return cls(nvars, {int(m): int(arr[m]) for m in nz})

    @classmethod
    def from_phase(cls, p: PhasePolynomialMod8) -> IntPolynomial:
        """The integer polynomial with p's coefficients as representatives in [0, 8)."""
        v = p.v
        terms = {0: p.constant}
        for i, a in enumerate(p.linear):
            terms[1 << (v - 1 - i)] = a
        for (i, j), c in p.quadratic.items():
            terms[(1 << (v - 1 - i)) | (1 << (v - 1 - j))] = c
        return cls(v, terms)

    def to_dense(self, modulus: int | None = None) -> np.ndarray:
        arr = np.zeros(1 << self.nvars, dtype=_dense_dtype(modulus))
        if arr.dtype == object:
            arr[:] = 0
        for m, c in self.terms.items():
            arr[m] = c % modulus if modulus else c
        return arr

    # queries
    @property
    def degree(self) -> int:
        return max((bin(m).count("1") for m in self.terms), default=0)

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.nvars:
            raise ValueError("assignment length differs from nvars")
        point = 0
        for b in x:
            point = (point << 1) | (int(b) & 1)
        return sum(c for m, c in self.terms.items() if m & point == m)

    # arithmetic
    def _check(self, other: IntPolynomial) -> None:
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other: Union[IntPolynomial, int]) -> IntPolynomial:
        if isinstance(other, int):
            other = IntPolynomial.constant(self.nvars, other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return IntPolynomial(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Union[IntPolynomial, int]) -> IntPolynomial:
        return self + (-other if isinstance(other, IntPolynomial) else -other)

    def __rsub__(self, other: int) -> IntPolynomial:
        return (-self) + other

    def __mul__(self, other: Union[IntPolynomial, int]) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(self.nvars, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        if len(self.terms) * len(other.terms) <= _SPARSE_LIMIT:
            terms: dict[int, int] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = m1 | m2
                    terms[m] = terms.get(m, 0) + c1 * c2
            return IntPolynomial(self.nvars, terms)
        w = self.nvars
        return IntPolynomial.from_dense(union_product(self.to_dense(), other.to_dense(), w), w)

    __rmul__ = __mul__

    def exact_div(self, d: int) -> IntPolynomial:
        if any(c % d for c in self.terms.values()):
            raise ArithmeticError(f"coefficients not divisible by {d}")
        return IntPolynomial(self.nvars, {m: c // d for m, c in self.terms.items()})

    def reduce(self, modulus: int) -> IntPolynomial:
        return IntPolynomial(self.nvars, {m: c % modulus for m, c in self.terms.items()})

    def sum_out_last(self, k: int) -> IntPolynomial:
        """sum over z in {0,1}^k of self(y, z), as a polynomial in y."""
        out: dict[int, int] = {}
        for m, c in self.terms.items():
            zpart = m & ((1 << k) - 1)
            out[m >> k] = out.get(m >> k, 0) + c * (1 << (k - bin(zpart).count("1")))
        return IntPolynomial(self.nvars - k, out)


def evaluate_all(poly: Union[IntPolynomial, np.ndarray], w: int | None = None, modulus: int | None = None) -> np.ndarray:
    """Value at every assignment (x_1 most significant) via the subset-zeta transform."""
    if isinstance(poly, IntPolynomial):
        w = poly.nvars if w is None else w
        if w != poly.nvars:
            raise ValueError("w differs from the polynomial's variable count")
        arr = poly.to_dense(modulus)
    else:
        arr = np.array(poly, copy=True)
        if w is None:
            w = int(arr.size).bit_length() - 1
    if w > MAX_EVAL_VARS:
        raise ValueError(f"w={w} exceeds the evaluate-all limit of {MAX_EVAL_VARS}")
    if arr.size != 1 << w:
        raise ValueError("table size must be 2^w")
    zeta(arr, w, modulus)
    return arr % modulus if modulus is not None else arr


# ---------------------------------------------------------------- univariate tools


@dataclass(frozen=True)
class Univariate:
    """Polynomial in one variable; ``coeffs[i]`` multiplies x^i."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c]
        return nz[-1] if nz else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _poly_mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def mod_amplifier(k: int) -> Univariate:
    """r_k(x) = x^k sum_{j<k} C(k-1+j, j) (1-x)^j, degree 2k-1.

    Even x gives r_k(x) = 0 and odd x gives r_k(x) = 1 modulo 2^k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    total = [0]
    one_minus_x_pow = [1]
    for j in range(k):
        term = [math.comb(k - 1 + j, j) * c for c in one_minus_x_pow]
        total = [x + y for x, y in zip(total + [0] * (len(term) - len(total)), term + [0] * (len(total) - len(term)))]
        one_minus_x_pow = _poly_mul(one_minus_x_pow, [1, -1])
    return Univariate(tuple([0] * k + total))


def binom_poly(y: int, k: int) -> int:
    """C(y, k) as the polynomial y(y-1)...(y-k+1)/k!, valid for every integer y."""
    num = 1
    for i in range(k):
        num *= y - i
    return num // math.factorial(k)


def bit_indicator_q(y: int) -> int:
    """q(y) = (1 - C(y,1)) (1 - C(y,2)) (1 - C(y,4)); odd exactly when y = 0 mod 8 (y >= 0)."""
    return (1 - binom_poly(y, 1)) * (1 - binom_poly(y, 2)) * (1 - binom_poly(y, 4))


def bit_indicator_q_univariate() -> Univariate:
    """q as a degree-7 polynomial with rational coefficients."""

    def one_minus_binom(k):
        acc = [Fraction(1)]
        for i in range(k):
            acc = _poly_mul(acc, [Fraction(-i), Fraction(1)])
        acc = [-c / math.factorial(k) for c in acc]
        acc[0] += 1
        return acc

    prod = [Fraction(1)]
    for k in (1, 2, 4):
        prod = _poly_mul(prod, one_minus_binom(k))
    return Univariate(tuple(prod))


# ---------------------------------------------------------------- indicator and partial sums


def _as_intpoly(p) -> IntPolynomial:
    if isinstance(p, PhasePolynomialMod8):
        return IntPolynomial.from_phase(p)
    if isinstance(p, IntPolynomial):
        if p.degree > 2:
            raise ValueError("indicator polynomials need a degree-2 input")
        return p
    raise TypeError(f"expected a phase or integer polynomial, got {type(p).__name__}")


def nonnegative_shift(p: IntPolynomial, j: int) -> int:
    """Smallest B >= 0 with p(x) - j + 8B >= 0 on every Boolean x (coefficient bound)."""
    lower = p.terms.get(0, 0) - j + sum(c for m, c in p.terms.items() if m and c < 0)
    return max(0, -(lower // 8)) if lower < 0 else 0


def _indicator_dense(y: np.ndarray, w: int, modulus: int | None) -> np.ndarray:
    """Dense q(y) for a dense multilinear y, exactly or modulo ``modulus``.

    The binomial factors are divided exactly: y(y-1) is computed modulo 2M and
    y(y-1)(y-2)(y-3) modulo 24M, since their coefficients are divisible by 2
    and 24 respectively.
    """
    def mod(k):
        return None if modulus is None else k * modulus

    def shifted(arr, c, m):
        out = arr.copy()
        out[0] -= c
        return out % m if m else out

    y24 = y % mod(24) if modulus else y
    y2 = union_product(y24, shifted(y, 1, mod(24)), w, mod(24))
    y4 = union_product(y2, shifted(y, 2, mod(24)), w, mod(24))
    y4 = union_product(y4, shifted(y, 3, mod(24)), w, mod(24))
    c1 = y24 % modulus if modulus else y
    c2 = (y2 % mod(2)) // 2 if modulus else _exact_div(y2, 2)
    c4 = y4 // 24 if modulus else _exact_div(y4, 24)

    def one_minus(arr):
        out = -arr
        out[0] += 1
        return out % modulus if modulus else out

    q = union_product(one_minus(c1), one_minus(c2), w, modulus)
    return union_product(q, one_minus(c4), w, modulus)


def _exact_div(arr: np.ndarray, d: int) -> np.ndarray:
    if any(int(c) % d for c in arr):
        raise ArithmeticError(f"coefficients not divisible by {d}")
    return np.array([int(c) // d for c in arr], dtype=object)


def indicator_poly(p, j: int, modulus: int | None = None) -> IntPolynomial:
    """Multilinear p_j = q(p - j + 8B) with p_j(x) odd iff p(x) = j mod 8.

    Exact integer coefficients unless ``modulus`` (a power of two) is given, in
    which case they are reduced modulo it.  Degree is at most 14.
    """
    P = _as_intpoly(p)
    w = P.nvars
    B = nonnegative_shift(P, j)
    y = P + (8 * B - j)
    dense = y.to_dense(None if modulus is None else 24 * modulus)
    return IntPolynomial.from_dense(_indicator_dense(dense, w, modulus), w)


def amplify_dense(pj: np.ndarray, w: int, k: int, modulus: int) -> np.ndarray:
    """Dense coefficients of r_k(p_j) modulo ``modulus`` by Horner's rule."""
    coeffs = mod_amplifier(k).coeffs
    z = zeta(pj.copy() % modulus, w, modulus)
    acc = np.zeros(1 << w, dtype=np.int64)
    acc[0] = coeffs[-1] % modulus
    for c in reversed(coeffs[:-1]):
        acc = moebius(zeta(acc, w, modulus) * z % modulus, w, modulus)
        acc[0] = (acc[0] + c) % modulus
    return acc


def sum_out_dense(arr: np.ndarray, w: int, k: int, modulus: int) -> np.ndarray:
    """Coefficients of sum_{z in {0,1}^k} P(y, z) from P's dense coefficients."""
    weights = np.array([1 << (k - bin(zm).count("1")) for zm in range(1 << k)], dtype=np.int64)
    return (arr.reshape(1 << (w - k), 1 << k) % modulus) @ weights % modulus


def partial_sum(pj: IntPolynomial, k: int) -> IntPolynomial:
    """s_{j,k}(y) = sum_z r_{k+1}(p_j(y, z)) modulo 2^{k+1}, over the first v-k variables."""
    v = pj.nvars
    if not 1 <= k < v:
        raise ValueError(f"k must satisfy 1 <= k < v (k={k}, v={v})")
    M = 1 << (k + 1)
    amplified = amplify_dense(pj.to_dense(M), v, k + 1, M)
    return IntPolynomial.from_dense(sum_out_dense(amplified, v, k, M), v - k)


def term_bound(v: int, k: int) -> int:
    """sum_{d <= 14(2k+1)} C(v-k, d): monomials available to s_{j,k}."""
    return sum(math.comb(v - k, d) for d in range(min(v - k, 14 * (2 * k + 1)) + 1))

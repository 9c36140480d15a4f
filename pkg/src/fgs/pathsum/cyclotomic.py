"""Exact elements of Z[w] / sqrt(2)^e with w = exp(i pi / 4)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

OMEGA = cmath.exp(1j * math.pi / 4)


def _rotate(c: tuple[int, int, int, int], j: int) -> tuple[int, int, int, int]:
    """Multiply a0 + a1 w + a2 w^2 + a3 w^3 by w^j (w^4 = -1)."""
    a = list(c)
    for _ in range(j % 8):
        a = [-a[3], a[0], a[1], a[2]]
    return tuple(a)


@dataclass(frozen=True, eq=False)
class CyclotomicAmplitude:
    """(a0 + a1 w + a2 w^2 + a3 w^3) / sqrt(2)^half_exponent."""

    coeffs: tuple[int, int, int, int]
    half_exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != 4:
            raise ValueError("need four coefficients")

    @classmethod
    def from_counts(cls, counts: Sequence[int], half_exponent: int = 0) -> CyclotomicAmplitude:
        """sum_j w^j counts[j] for j = 0..7."""
        total = [0, 0, 0, 0]
        for j, nj in enumerate(counts):
            sign = -1 if j >= 4 else 1
            total[j % 4] += sign * int(nj)
        return cls(tuple(total), half_exponent)

    @classmethod
    def zero(cls) -> CyclotomicAmplitude:
        return cls((0, 0, 0, 0), 0)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def times_omega(self, j: int) -> CyclotomicAmplitude:
        return CyclotomicAmplitude(_rotate(self.coeffs, j), self.half_exponent)

    def times_sqrt2(self) -> CyclotomicAmplitude:
        # sqrt(2) = w - w^3, so the numerator is multiplied and e is unchanged
        a, b = _rotate(self.coeffs, 1), _rotate(self.coeffs, 3)
        return CyclotomicAmplitude(tuple(x - y for x, y in zip(a, b)), self.half_exponent)

    def canonical(self) -> CyclotomicAmplitude:
        """Smallest non-negative half_exponent representing the same value."""
        cur = self
        while cur.half_exponent > 0 and any(cur.coeffs):
            # x / sqrt(2) = x (w - w^3) / 2
            num = cur.times_sqrt2().coeffs
            if any(c % 2 for c in num):
                break
            cur = CyclotomicAmplitude(tuple(c // 2 for c in num), cur.half_exponent - 1)
        if not any(cur.coeffs):
            return CyclotomicAmplitude((0, 0, 0, 0), 0)
        return cur

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicAmplitude):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.coeffs == b.coeffs and a.half_exponent == b.half_exponent

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.coeffs, c.half_exponent))

    def __complex__(self) -> complex:
        z = sum(c * OMEGA**i for i, c in enumerate(self.coeffs))
        return complex(z / math.sqrt(2) ** self.half_exponent)

    def to_complex(self) -> complex:
        return complex(self)

    def abs2(self) -> float:
        return abs(complex(self)) ** 2

    def as_dict(self) -> dict:
        z = complex(self)
        return {
            "coeffs": list(self.coeffs),
            "half_exponent": self.half_exponent,
            "complex": {"re": z.real, "im": z.imag},
        }

"""Exact dimension and measure values.

A dimension is stored as log_N(r) for integers r >= 1, N >= 2.  A measure is
stored as coeff * base**s with rational coeff and base and s a dimension;
whole powers of N are folded into the coefficient whenever that stays
rational, so equal measures compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .digitset import DigitSet
from .errors import SigmaNotPM
from .kernel import to_delta_plus


def iroot(x: int, k: int) -> int:
    """Largest r with r**k <= x."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def perfect_power(x: int) -> tuple[int, int]:
    """(g, c) with x = g**c and c as large as possible."""
    if x < 2:
        return x, 1
    for c in range(x.bit_length(), 1, -1):
        g = iroot(x, c)
        if g > 1 and g ** c == x:
            return g, c
    return x, 1


@dataclass(frozen=True)
class DimensionValue:
    count: int
    base: int

    def __post_init__(self):
        if self.count < 1 or self.base < 2:
            raise ValueError("dimension needs count >= 1 and base >= 2")

    @property
    def float(self) -> float:
        return math.log(self.count) / math.log(self.base)

    def key(self) -> tuple:
        if self.count == 1:
            return (0,)
        g, c = perfect_power(self.base)
        rho, e = perfect_power(self.count)
        return (Fraction(e, c), rho, g)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DimensionValue):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    @property
    def exact(self) -> str:
        return f"log_{self.base}({self.count})"

    def __str__(self) -> str:
        return self.exact

    def to_dict(self) -> dict:
        return {"exact": self.exact, "count": self.count, "base": self.base,
                "float": self.float}

    @classmethod
    def from_dict(cls, data: dict) -> "DimensionValue":
        return cls(data["count"], data["base"])

    @classmethod
    def from_counts(cls, n: int, counts: Iterable[int]) -> "DimensionValue":
        """(1/q) Σ log_n c_j written as log_{n^q}(Π c_j)."""
        counts = list(counts)
        return cls(math.prod(counts), n ** len(counts))


@dataclass(frozen=True)
class MeasureValue:
    coeff: Fraction
    base: Fraction
    dim: DimensionValue

    def __init__(self, coeff, base, dim: DimensionValue):
        coeff, base = Fraction(coeff), Fraction(base)
        if coeff <= 0 or base <= 0:
            raise ValueError("measures here are positive")
        coeff, base = _fold(coeff, base, dim)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dim", dim)

    @property
    def is_rational(self) -> bool:
        return self.base == 1 or self.dim.count == 1

    @property
    def float(self) -> float:
        return float(self.coeff) * float(self.base) ** self.dim.float

    @property
    def exact(self) -> str:
        if self.is_rational:
            return str(self.coeff)
        power = f"({self.base})^({self.dim.exact})"
        return power if self.coeff == 1 else f"{self.coeff} * {power}"

    def __str__(self) -> str:
        return self.exact

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasureValue):
            return NotImplemented
        if self.is_rational and other.is_rational:
            return self.coeff == other.coeff
        return (self.coeff, self.base, self.dim) == (other.coeff, other.base, other.dim)

    def __hash__(self) -> int:
        return hash((self.coeff, self.base if not self.is_rational else 1))

    def to_dict(self) -> dict:
        return {"exact": self.exact, "float": self.float, "coeff": str(self.coeff),
                "base": str(self.base), "dimension": self.dim.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "MeasureValue":
        return cls(Fraction(data["coeff"]), Fraction(data["base"]),
                   DimensionValue.from_dict(data["dimension"]))


def _fold(coeff: Fraction, base: Fraction, dim: DimensionValue):
    """Move factors N^e out of base: (N^e)^(log_N r) = r^e."""
    if dim.count == 1:
        return coeff, Fraction(1)
    g, c = perfect_power(dim.base)
    e = 0
    num, den = base.numerator, base.denominator
    while num % g == 0:
        num //= g
        e += 1
    while den % g == 0:
        den //= g
        e -= 1
    # (g^e)^(log_{g^c} r) = r^(e/c), rational only when r is a perfect power
    ex = Fraction(e, c)
    root = iroot(dim.count, ex.denominator)
    if root ** ex.denominator != dim.count:
        return coeff, base
    return coeff * Fraction(root) ** ex.numerator, Fraction(num, den)


def measure_two_digit(n: int, a: int, b: int) -> MeasureValue:
    """H^s of C_{n,{a,b}} with s = log_n 2."""
    if not (n >= 3 and 0 <= a < b < n):
        raise ValueError("need n >= 3 and 0 <= a < b < n")
    return MeasureValue(1, Fraction(b - a, n - 1), DimensionValue(2, n))


def measure_scaled(copies: int, scale: Fraction, base_measure: MeasureValue) -> MeasureValue:
    """Measure of ``copies`` disjoint copies of scale * B: copies * scale^s * H^s(B)."""
    return MeasureValue(base_measure.coeff * copies, base_measure.base * Fraction(scale),
                        base_measure.dim)


def counting_measure(points: int, n: int) -> MeasureValue:
    """H^0 of a finite set is its cardinality."""
    return MeasureValue(points, 1, DimensionValue(1, n))


def dimension(ds: DigitSet, code) -> DimensionValue:
    """Dimension of C ∩ (C + t) from the periodic digits of the recoded translation."""
    y, _, _ = to_delta_plus(ds, code)
    if y.is_prefix:
        raise SigmaNotPM("dimension needs an eventually periodic translation")
    counts = [len(ds.digit_set & {d + x for d in ds.digits}) for x in y.period]
    return DimensionValue.from_counts(ds.base, counts)

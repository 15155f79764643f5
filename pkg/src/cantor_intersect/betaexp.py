"""Transport of digit codes from base N to beta-expansions.

g_beta sends Σ x_k N^-k to Σ x_k beta^k.  For beta ≤ 1/N and a sparse digit
set it is increasing on C, so every digit-level statement about
C ∩ (C + t) carries over to the image.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .digitset import DigitSet, is_sparse_digits
from .equivalence import self_similar_report
from .errors import NotApplicable
from .radix import PeriodicCode, value_of


@dataclass(frozen=True)
class BetaSystem:
    N: int
    omega: tuple[int, ...]
    beta: Fraction

    def __init__(self, N: int, omega: Sequence[int], beta):
        omega = tuple(sorted(set(int(x) for x in omega)))
        beta = Fraction(beta)
        if N < 2:
            raise NotApplicable("N must be at least 2")
        if len(omega) < 2 or omega[0] < 0 or omega[-1] > N - 1:
            raise NotApplicable(f"omega must hold at least two digits in [0, {N - 1}]")
        if not 0 < beta <= Fraction(1, N):
            raise NotApplicable(f"beta must lie in (0, 1/{N}]; larger values may overlap")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "beta", beta)
        try:
            top = max(self.digits)
        except NotApplicable:
            top = omega[-1]
        if beta > Fraction(1, top + 1):
            raise NotApplicable(f"beta above 1/{top + 1} is outside the monotone regime")

    @property
    def multiplier(self) -> int:
        """Smallest d for which d * omega is sparse with largest digit at most N - 1."""
        top = self.omega[-1]
        for d in range(1, (self.N - 1) // top + 1):
            if is_sparse_digits([d * x for x in self.omega]):
                return d
        raise NotApplicable(f"no multiple of {list(self.omega)} is sparse below {self.N}")

    @property
    def digits(self) -> tuple[int, ...]:
        d = self.multiplier
        return tuple(d * x for x in self.omega)

    def digit_set(self) -> DigitSet:
        return DigitSet(self.N, self.digits)

    def to_dict(self) -> dict:
        return {"N": self.N, "omega": list(self.omega), "beta": str(self.beta),
                "digits": list(self.digits)}


def _series(preperiod: Sequence[int], period: Sequence[int], r: Fraction) -> Fraction:
    head = sum((Fraction(x) * r ** j for j, x in enumerate(preperiod, 1)), Fraction(0))
    if not period:
        return head
    k = len(preperiod)
    block = sum((Fraction(x) * r ** j for j, x in enumerate(period, 1)), Fraction(0))
    return head + r ** k * block / (1 - r ** len(period))


def g_beta(sys: BetaSystem, code: PeriodicCode) -> Fraction:
    """Σ γ_k beta^k in closed form (a prefix code sums its known digits)."""
    if code.base != sys.N:
        raise NotApplicable(f"code is in base {code.base}, system base is {sys.N}")
    return _series(code.preperiod, code.period, sys.beta)


def gamma_scale(sys: BetaSystem) -> Fraction:
    """(1 - beta) / (beta (N - 1)), the factor taking g_beta(C) onto Γ."""
    sys.multiplier  # raises when no sparse multiple exists
    return (1 - sys.beta) / (sys.beta * (sys.N - 1))


def gamma_point(sys: BetaSystem, code: PeriodicCode) -> Fraction:
    """Σ x_k beta^(k-1) (1 - beta) / (N - 1)."""
    weight = (1 - sys.beta) / (sys.N - 1)
    return weight * _series(code.preperiod, code.period, sys.beta) / sys.beta


def _random_code(rng: random.Random, ds: DigitSet) -> PeriodicCode:
    pre = [rng.choice(ds.digits) for _ in range(rng.randint(0, 4))]
    per = [rng.choice(ds.digits) for _ in range(rng.randint(1, 4))]
    return PeriodicCode(ds.base, pre, per)


@dataclass(frozen=True)
class TransportReport:
    preserved: bool
    monotone: bool
    structure: bool
    verdict: str
    copies: int
    ratio: Fraction
    offsets: tuple[Fraction, ...]
    samples: tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...]

    def to_dict(self) -> dict:
        return {"preserved": self.preserved, "monotone": self.monotone,
                "structure": self.structure, "verdict": self.verdict, "copies": self.copies,
                "ratio": str(self.ratio), "offsets": [str(x) for x in self.offsets],
                "samples": [[str(v) for v in row] for row in self.samples]}


def transport_report(sys: BetaSystem, ds: DigitSet, code: PeriodicCode,
                     pairs: int = 100, seed: int = 0, depth: int | None = None) -> TransportReport:
    """Check that g_beta keeps order on C and carries the intersection's structure.

    ``samples`` holds (x, y, g(x), g(y)) for random points x < y of C.  The
    structure check rebuilds the image of C ∩ (C + t) at a finite depth from
    digits and compares it with the translated pieces beta^k g(E-words) + offsets.
    """
    if ds.base != sys.N:
        raise NotApplicable("digit set and beta system use different bases")
    rng = random.Random(seed)
    samples = []
    monotone = True
    while len(samples) < pairs:
        x, y = _random_code(rng, ds), _random_code(rng, ds)
        vx, vy = value_of(x), value_of(y)
        if vx == vy:
            continue
        if vx > vy:
            x, y, vx, vy = y, x, vy, vx
        gx, gy = g_beta(sys, x), g_beta(sys, y)
        monotone &= gx < gy
        samples.append((vx, vy, gx, gy))

    report = self_similar_report(ds, code)
    y = report.y
    k, q = report.k, report.q
    b = sys.beta
    digits = ds.digit_set

    def survivors(x: int) -> list[int]:
        return sorted(digits & {d + x for d in ds.digits})

    heads = sorted(_series(us, (), b) for us in
                   itertools.product(*(survivors(x) for x in y.preperiod)))
    blocks = [_series(us, (), b) for us in itertools.product(*(survivors(x) for x in y.period))]
    depth = depth if depth is not None else k + 2 * q
    reps = max(0, (depth - k) // q)
    pieces = {Fraction(0)}
    for r in range(reps):
        pieces = {p + b ** (r * q) * w for p in pieces for w in blocks}
    predicted = {h + b ** k * p for h in heads for p in pieces}
    brute = {_series(us, (), b) for us in
             itertools.product(*(survivors(y.digit_at(j)) for j in range(1, k + reps * q + 1)))}
    expected = len(heads) * len(blocks) ** reps
    structure = predicted == brute and len(brute) == expected
    return TransportReport(monotone and structure, monotone, structure, report.verdict,
                           len(heads), b ** k, tuple(heads), tuple(samples))

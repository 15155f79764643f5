"""Brute-force geometry of C_k and C_k ∩ (C_k + t) with exact endpoints.

Nothing here uses the case automaton: cells are generated from digits,
intersections come from comparing endpoints, and cases are read off from
which shifted cells touch which.  That makes the module usable as an
independent oracle for ``kernel``.
"""

from __future__ import annotations

import bisect
import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .digitset import DigitSet
from .errors import BudgetExceeded, SigmaNotPM
from .kernel import ONE, MINUS_ONE, SigmaValue, sigma_trace
from .radix import Alphabet, PeriodicCode, abs_canonicalize, truncate, value_of

DEFAULT_BUDGET = 2_000_000
FULL_CLASSIFY_LIMIT = 100_000


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint closed intervals [starts[i]/den, ends[i]/den]."""

    starts: tuple[int, ...]
    ends: tuple[int, ...]
    denominator: int
    level: int

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        d = self.denominator
        return [(Fraction(a, d), Fraction(b, d)) for a, b in zip(self.starts, self.ends)]

    @property
    def lengths(self) -> set[Fraction]:
        return {Fraction(b - a, self.denominator) for a, b in zip(self.starts, self.ends)}

    def contains_point(self, x: Fraction) -> bool:
        y = x * self.denominator
        i = bisect.bisect_right(self.starts, math.floor(y)) - 1
        for j in (i, i + 1):
            if 0 <= j < len(self.starts) and self.starts[j] <= y <= self.ends[j]:
                return True
        return False

    def contains(self, other: "IntervalSet") -> bool:
        """True when every interval of ``other`` lies inside one of ours."""
        for a, b in other.intervals:
            y = a * self.denominator
            i = bisect.bisect_right(self.starts, math.floor(y)) - 1
            ok = False
            for j in (i - 1, i, i + 1):
                if 0 <= j < len(self.starts):
                    lo = Fraction(self.starts[j], self.denominator)
                    hi = Fraction(self.ends[j], self.denominator)
                    if lo <= a and b <= hi:
                        ok = True
                        break
            if not ok:
                return False
        return True

    def shifted(self, amount: Fraction) -> "IntervalSet":
        return from_fractions([(a + amount, b + amount) for a, b in self.intervals], self.level)

    def to_dict(self) -> dict:
        return {"level": self.level,
                "intervals": [[str(a), str(b)] for a, b in self.intervals]}

    @classmethod
    def from_dict(cls, data: dict) -> "IntervalSet":
        pairs = [(Fraction(a), Fraction(b)) for a, b in data["intervals"]]
        return from_fractions(pairs, data["level"])


def from_fractions(pairs: list[tuple[Fraction, Fraction]], level: int) -> IntervalSet:
    pairs = sorted(pairs)
    den = 1
    for a, b in pairs:
        den = math.lcm(den, a.denominator, b.denominator)
    return IntervalSet(tuple(int(a * den) for a, _ in pairs),
                       tuple(int(b * den) for _, b in pairs), den, level)


def _check_budget(needed: int, budget: int) -> None:
    if needed > budget:
        raise BudgetExceeded(needed, budget)


def level_lefts(ds: DigitSet, k: int, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Left endpoints of the cells of C_k in units of n^-k, sorted."""
    _check_budget(ds.m ** k, budget)
    lefts = [0]
    for _ in range(k):
        lefts = [h * ds.base + d for h in lefts for d in ds.digits]
    return lefts


def build_level(ds: DigitSet, k: int, budget: int = DEFAULT_BUDGET) -> IntervalSet:
    lefts = level_lefts(ds, k, budget)
    return IntervalSet(tuple(lefts), tuple(h + 1 for h in lefts), ds.base ** k, k)


@dataclass(frozen=True)
class CaseTable:
    """How the cells of C_k meet C_k + ⌊t⌋_k.

    ``interval``: the cell itself is a shifted cell; ``potential``: its left
    neighbour is; ``potentially_empty``: its right neighbour is; ``empty``:
    none of the three.  The last two are None when only the cells near the
    translate were examined.
    """

    level: int
    interval_lefts: tuple[int, ...]
    potential_lefts: tuple[int, ...]
    potentially_empty: int | None
    empty: int | None

    @property
    def interval(self) -> int:
        return len(self.interval_lefts)

    @property
    def potential(self) -> int:
        return len(self.potential_lefts)

    @property
    def complete(self) -> bool:
        return self.empty is not None

    def sigma_class(self) -> SigmaValue:
        """The trace value these counts correspond to."""
        if self.interval and self.potential:
            return SigmaValue.I
        if self.interval:
            return ONE
        if self.potential:
            return MINUS_ONE
        return SigmaValue.ZERO

    def to_dict(self) -> dict:
        return {"level": self.level, "interval": self.interval, "potential": self.potential,
                "potentially_empty": self.potentially_empty, "empty": self.empty}


@dataclass(frozen=True)
class LevelResult:
    level: int
    cases: CaseTable
    tight: IntervalSet
    points: tuple[Fraction, ...]
    shift: Fraction

    def to_dict(self) -> dict:
        return {"level": self.level, "cases": self.cases.to_dict(),
                "tight": self.tight.to_dict()["intervals"],
                "points": [str(p) for p in self.points]}


def _as_nary(ds: DigitSet, code: PeriodicCode) -> PeriodicCode:
    if code.alphabet is Alphabet.DELTA:
        code = abs_canonicalize(code, ds)
    if code.is_prefix:
        raise ValueError("the oracle needs an exact translation, not a prefix")
    return code


def _overlaps(a_lefts: list[int], b_lefts: list[int], width: int, shift: int):
    """All pairs of closed cells [a, a+w] and [b+shift, b+shift+w] that meet."""
    shifted = [b + shift for b in b_lefts]
    for h in a_lefts:
        lo = bisect.bisect_left(shifted, h - width)
        hi = bisect.bisect_right(shifted, h + width)
        for j in range(lo, hi):
            yield h, b_lefts[j], max(h, shifted[j]), min(h + width, shifted[j] + width)


def iter_levels(ds: DigitSet, code: PeriodicCode, kmax: int,
                budget: int = DEFAULT_BUDGET,
                full_limit: int = FULL_CLASSIFY_LIMIT) -> Iterator[LevelResult]:
    """Levels 0..kmax of C_k ∩ (C_k + t), refining only cells that still meet."""
    code = _as_nary(ds, code)
    n = ds.base
    t = value_of(code)
    a, b = t.numerator, t.denominator
    left_cells = [0]
    right_cells = [0]
    for k in range(kmax + 1):
        if k:
            left_cells = [h * n + d for h in left_cells for d in ds.digits]
            right_cells = [g * n + d for g in right_cells for d in ds.digits]
            _check_budget(len(left_cells) + len(right_cells), budget)
        scale = n ** k
        # units of 1/(n^k b): a cell is [h b, h b + b], the translate adds a n^k
        pairs = list(_overlaps([h * b for h in left_cells], [g * b for g in right_cells],
                               b, a * scale))
        left_cells = sorted({h // b for h, _, _, _ in pairs})
        right_cells = sorted({g // b for _, g, _, _ in pairs})

        den = scale * b
        pieces = sorted((lo, hi) for _, _, lo, hi in pairs if hi > lo)
        merged: list[list[int]] = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        pts = sorted({lo for _, _, lo, hi in pairs if hi == lo})
        pts = [p for p in pts if not _inside(merged, p)]
        tight = IntervalSet(tuple(x for x, _ in merged), tuple(y for _, y in merged), den, k)

        shift = int(truncate(code, k) * scale)
        cases = _classify(ds, k, left_cells, set(right_cells), shift, t * scale - shift,
                          full_limit, budget)
        yield LevelResult(k, cases, tight, tuple(Fraction(p, den) for p in pts),
                          Fraction(shift, scale))


def _inside(merged: list[list[int]], p: int) -> bool:
    i = bisect.bisect_right([lo for lo, _ in merged], p) - 1
    return i >= 0 and merged[i][0] <= p <= merged[i][1]


def _classify(ds: DigitSet, k: int, pool: list[int], partners: set[int], shift: int,
              rho: Fraction, full_limit: int, budget: int) -> CaseTable:
    if ds.m ** k <= min(full_limit, budget):
        cells = level_lefts(ds, k, budget)
        moved = {g + shift for g in cells}
        inter = tuple(h for h in cells if h in moved)
        pot = tuple(h for h in cells if h - 1 in moved)
        pe = sum(1 for h in cells if h + 1 in moved)
        empty = sum(1 for h in cells if not ({h - 1, h, h + 1} & moved))
        return CaseTable(k, inter, pot, pe, empty)
    # every interval or potential-interval cell meets C_k + t, so the pool has them all
    inter = tuple(h for h in pool if h - shift in partners)
    pot = tuple(h for h in pool if h - 1 - shift in partners)
    pe = sum(1 for h in pool if h + 1 - shift in partners) if rho == 0 else None
    return CaseTable(k, inter, pot, pe, None)


def intersect_level(ds: DigitSet, code: PeriodicCode, k: int,
                    budget: int = DEFAULT_BUDGET) -> LevelResult:
    result = None
    for result in iter_levels(ds, code, k, budget):
        pass
    return result


@dataclass(frozen=True)
class Offsets:
    """C∩(C+t) = union over eta of (eta + n^-k (C ∩ (C + residual)))."""

    level: int
    sigma: SigmaValue
    offsets: tuple[Fraction, ...]
    residual: Fraction


def offsets(ds: DigitSet, code: PeriodicCode, k: int,
            budget: int = DEFAULT_BUDGET) -> Offsets:
    code = _as_nary(ds, code)
    s = sigma_trace(ds, code, k).values[k]
    res = intersect_level(ds, code, k, budget)
    scale = ds.base ** k
    rho = value_of(code) * scale - res.shift * scale
    if s is ONE:
        etas = tuple(Fraction(h, scale) for h in res.cases.interval_lefts)
        return Offsets(k, s, etas, rho)
    if s is MINUS_ONE:
        etas = tuple(Fraction(h - 1, scale) + rho / scale for h in res.cases.potential_lefts)
        return Offsets(k, s, etas, 1 - rho)
    raise SigmaNotPM(f"sigma({k}) = {s.label}; offsets need sigma = +1 or -1")


@dataclass(frozen=True)
class BoxCount:
    rows: tuple[tuple[int, int, Fraction], ...]
    slope: float

    def ratios(self) -> list[float]:
        return [math.log(c) / -math.log(e) for _, c, e in self.rows if c > 1]


def boxcount_curve(ds: DigitSet, code: PeriodicCode, kmax: int,
                   budget: int = DEFAULT_BUDGET) -> BoxCount:
    """Counts and common lengths of the tight pieces for k = 1..kmax.

    ``slope`` is the least-squares slope of log(count) against -log(length)
    over the upper half of the levels; single-level ratios carry an O(1/k)
    bias from the constant prefactor.
    """
    trace = sigma_trace(ds, code, kmax)
    if not all(v.is_pm_one for v in trace.values):
        raise SigmaNotPM("box counting needs sigma = +1 or -1 through kmax")
    rows = []
    for res in iter_levels(ds, code, kmax, budget):
        if res.level == 0:
            continue
        lengths = res.tight.lengths
        if len(lengths) != 1:
            raise SigmaNotPM(f"level {res.level} pieces have unequal lengths")
        rows.append((res.level, len(res.tight), lengths.pop()))
    upper = rows[len(rows) // 2:]
    xs = [-math.log(e) for _, _, e in upper]
    ys = [math.log(c) for _, c, _ in upper]
    slope = statistics.linear_regression(xs, ys).slope
    return BoxCount(tuple(rows), slope)

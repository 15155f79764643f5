"""Digit sets, their difference sets and slices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InvalidDigitSet


@dataclass(frozen=True)
class DigitSet:
    """A base ``n`` and a sorted list of digits defining the Cantor set C_{n,D}.

    The smallest digit is normally 0.  Sets with a positive smallest digit are
    accepted because derived digit sets (for instance the ones describing an
    intersection) need not start at 0; ``normalized`` shifts such a set down.
    """

    base: int
    digits: tuple[int, ...]

    def __init__(self, base: int, digits: Iterable[int]):
        digits = tuple(int(d) for d in digits)
        object.__setattr__(self, "base", int(base))
        object.__setattr__(self, "digits", digits)
        self._validate()

    def _validate(self) -> None:
        n, d = self.base, self.digits
        if n < 3:
            raise InvalidDigitSet(f"base must be at least 3, got {n}")
        if len(d) < 2:
            raise InvalidDigitSet("a digit set needs at least two digits")
        if len(d) >= n:
            raise InvalidDigitSet(f"need fewer digits than the base ({len(d)} >= {n})")
        if any(b <= a for a, b in zip(d, d[1:])):
            raise InvalidDigitSet(f"digits must be strictly increasing: {list(d)}")
        if d[0] < 0 or d[-1] > n - 1:
            raise InvalidDigitSet(f"digits must lie in [0, {n - 1}]")

    @property
    def m(self) -> int:
        return len(self.digits)

    @property
    def max_digit(self) -> int:
        return self.digits[-1]

    @cached_property
    def digit_set(self) -> frozenset[int]:
        return frozenset(self.digits)

    @cached_property
    def deltas(self) -> tuple[int, ...]:
        return tuple(sorted({a - b for a in self.digits for b in self.digits}))

    @cached_property
    def deltas_nonneg(self) -> tuple[int, ...]:
        return tuple(x for x in self.deltas if x >= 0)

    @cached_property
    def delta_set(self) -> frozenset[int]:
        return frozenset(self.deltas)

    def normalized(self) -> "DigitSet":
        lo = self.digits[0]
        return DigitSet(self.base, (d - lo for d in self.digits))

    def to_dict(self) -> dict:
        return {"base": self.base, "digits": list(self.digits)}

    @classmethod
    def from_dict(cls, data: dict) -> "DigitSet":
        return cls(data["base"], data["digits"])


@dataclass(frozen=True)
class Classification:
    sparse: bool
    regular: bool
    uniform: bool
    gap: int | None

    def to_dict(self) -> dict:
        return {"sparse": self.sparse, "regular": self.regular,
                "uniform": self.uniform, "gap": self.gap}


@dataclass(frozen=True)
class SliceSet:
    """D ∩ (D + delta) shifted to start at 0, together with its minimum."""

    delta: int
    members: tuple[int, ...]
    offset: int | None

    @property
    def empty(self) -> bool:
        return not self.members

    def __len__(self) -> int:
        return len(self.members)

    def issubset(self, other: "SliceSet") -> bool:
        return set(self.members) <= set(other.members)


def is_sparse_digits(digits: Iterable[int]) -> bool:
    """True when distinct differences of the digits are at least 2 apart."""
    digits = list(digits)
    deltas = sorted({a - b for a in digits for b in digits})
    return all(b - a >= 2 for a, b in zip(deltas, deltas[1:]))


def _uniform_sets(n: int):
    for gap in range(2, n):
        for start in range(gap):
            run = list(range(start, n, gap))
            if len(run) >= 2:
                yield gap, run


def classify(ds: DigitSet) -> Classification:
    d = ds.digits
    gaps = {b - a for a, b in zip(d, d[1:])}
    uniform = len(gaps) == 1 and min(gaps) >= 2
    members = ds.digit_set
    regular = any(members <= set(run) for _, run in _uniform_sets(ds.base))
    sparse = is_sparse_digits(d)
    return Classification(sparse=sparse, regular=regular, uniform=uniform,
                          gap=min(gaps) if uniform else None)


def slice_of(ds: DigitSet, delta: int) -> SliceSet:
    common = sorted(ds.digit_set & {d + delta for d in ds.digits})
    if not common:
        return SliceSet(delta, (), None)
    lo = common[0]
    return SliceSet(delta, tuple(x - lo for x in common), lo)


def sumset_decompose(target: SliceSet | Iterable[int],
                     base: SliceSet | Iterable[int]) -> tuple[int, ...] | None:
    """Find S with base + S = target exactly.

    Among all solutions the one with the lexicographically smallest indicator
    vector is returned, i.e. small elements are left out whenever possible.
    """
    t = set(target.members if isinstance(target, SliceSet) else target)
    b = sorted(set(base.members if isinstance(base, SliceSet) else base))
    if not t or not b:
        raise ValueError("sumset_decompose needs nonempty sets")
    candidates = sorted(s for s in {x - b[0] for x in t}
                        if all(s + y in t for y in b))

    def covers(chosen: Iterable[int]) -> bool:
        return {s + y for s in chosen for y in b} == t

    if not covers(candidates):
        return None
    chosen: list[int] = []
    for i, s in enumerate(candidates):
        if not covers(chosen + candidates[i + 1:]):
            chosen.append(s)
    return tuple(chosen)

"""The interval-case automaton: transition table, case trace, counts and lengths.

The trace sigma(k) records how the level-k cells of C meet those of
C + ⌊t⌋_k: +1 when only aligned (interval) cases occur, -1 when only
left-neighbour (potential interval) cases occur, i when both occur and 0
when neither does.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .digitset import DigitSet
from .errors import FiniteRepresentation, SigmaNotPM
from .radix import (Alphabet, PeriodicCode, abs_canonicalize, alternate_nary, check_alphabet,
                    has_finite_expansion, tail_value, value_of)


class SigmaValue(enum.Enum):
    ZERO = 0j
    PLUS_ONE = 1 + 0j
    MINUS_ONE = -1 + 0j
    I = 1j
    MINUS_I = -1j

    def __mul__(self, other: "SigmaValue") -> "SigmaValue":
        return SigmaValue(self.value * other.value)

    @property
    def is_pm_one(self) -> bool:
        return self in (SigmaValue.PLUS_ONE, SigmaValue.MINUS_ONE)

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "SigmaValue":
        for k, v in _LABELS.items():
            if v == text:
                return k
        raise ValueError(f"unknown sigma label {text!r}")


_LABELS = {SigmaValue.ZERO: "0", SigmaValue.PLUS_ONE: "1", SigmaValue.MINUS_ONE: "-1",
           SigmaValue.I: "i", SigmaValue.MINUS_I: "-i"}

ONE, MINUS_ONE, I, ZERO = (SigmaValue.PLUS_ONE, SigmaValue.MINUS_ONE,
                           SigmaValue.I, SigmaValue.ZERO)


def _table(ds: DigitSet):
    n = ds.base
    delta = ds.delta_set
    return (delta, {x - 1 for x in delta}, {n - x for x in delta}, {n - x - 1 for x in delta})


def _pick(h: int, first: set, second: set, only_first, only_second, both) -> SigmaValue:
    a, b = h in first, h in second
    if a and b:
        return both
    if a:
        return only_first
    if b:
        return only_second
    return ZERO


def xi(state: SigmaValue, digit: int, ds: DigitSet) -> SigmaValue:
    """Transition multiplier; the next state is xi(state, digit) * state."""
    h = abs(digit)
    delta, delta_m1, n_delta, n_delta_m1 = _table(ds)
    if state is ZERO:
        return ZERO
    if state is ONE:
        return _pick(h, delta, delta_m1, ONE, MINUS_ONE, I)
    if state is MINUS_ONE:
        return _pick(h, n_delta, n_delta_m1, MINUS_ONE, ONE, SigmaValue.MINUS_I)
    if state is I:
        return _pick(h, delta | n_delta, delta_m1 | n_delta_m1, SigmaValue.MINUS_I, I, ONE)
    raise ValueError(f"sigma never takes the value {state.label}")


def step(state: SigmaValue, digit: int, ds: DigitSet) -> SigmaValue:
    nxt = xi(state, digit, ds) * state
    assert nxt is not SigmaValue.MINUS_I, "case trace reached -i"
    return nxt


def mu_factor(state: SigmaValue, digit: int, ds: DigitSet) -> int | None:
    """Number of children that survive below one surviving cell."""
    d = ds.digit_set
    if state is ONE:
        return len({x - digit for x in d} & (d | {x + 1 for x in d}))
    if state is MINUS_ONE:
        n = ds.base
        return len({x - n + digit for x in d} & (d | {x - 1 for x in d}))
    return None


def _nonneg_code(ds: DigitSet, code: PeriodicCode) -> PeriodicCode:
    if code.alphabet is Alphabet.DELTA:
        return abs_canonicalize(code, ds)
    return code


@dataclass(frozen=True)
class SigmaProfile:
    """The full trace of an eventually periodic code.

    ``values`` holds sigma(0..start+q); from ``start`` on the trace repeats
    with period ``q``, a multiple of the code period ``p``.
    """

    values: tuple[SigmaValue, ...]
    start: int
    q: int
    p: int

    def at(self, j: int) -> SigmaValue:
        if j < len(self.values):
            return self.values[j]
        return self.values[self.start + (j - self.start) % self.q]

    @property
    def certified(self) -> bool:
        return self.q in (self.p, 2 * self.p)

    @property
    def all_pm_one(self) -> bool:
        return all(v.is_pm_one for v in self.values)

    @property
    def all_one(self) -> bool:
        return all(v is ONE for v in self.values)


def sigma_profile(ds: DigitSet, code: PeriodicCode) -> SigmaProfile:
    """Trace sigma until the pair (sigma, position in period) repeats."""
    code = _nonneg_code(ds, code)
    if code.is_prefix:
        raise ValueError("a prefix code has no eventual period")
    a, p = len(code.preperiod), len(code.period)
    vals = [ONE]
    for j in range(1, a + 1):
        vals.append(step(vals[-1], code.digit_at(j), ds))
    seen = {vals[a]: 0}
    i = 0
    while True:
        for r in range(1, p + 1):
            vals.append(step(vals[-1], code.period[r - 1], ds))
        i += 1
        s = vals[a + i * p]
        if s in seen:
            break
        seen[s] = i
    i0 = seen[s]
    q = (i - i0) * p
    start = a + i0 * p
    while start > 0 and vals[start - 1] == vals[start - 1 + q]:
        start -= 1
    return SigmaProfile(tuple(vals[: a + i * p + 1]), start, q, p)


@dataclass(frozen=True)
class SigmaTrace:
    digits: tuple[int, ...]
    values: tuple[SigmaValue, ...]
    mu: tuple[int | None, ...]
    eventual_period: tuple[int, int] | None
    all_pm_one: bool

    @property
    def depth(self) -> int:
        return len(self.values) - 1

    def to_dict(self) -> dict:
        return {
            "digits": list(self.digits),
            "sigma": [v.label for v in self.values],
            "mu": list(self.mu),
            "eventual_period": (None if self.eventual_period is None else
                                {"start": self.eventual_period[0],
                                 "q": self.eventual_period[1]}),
            "all_pm_one": self.all_pm_one,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SigmaTrace":
        ep = data["eventual_period"]
        return cls(tuple(data["digits"]),
                   tuple(SigmaValue.from_label(s) for s in data["sigma"]),
                   tuple(data["mu"]),
                   None if ep is None else (ep["start"], ep["q"]),
                   data["all_pm_one"])


def sigma_trace(ds: DigitSet, code: PeriodicCode, depth: int) -> SigmaTrace:
    code = _nonneg_code(ds, code)
    if code.is_prefix:
        depth = min(depth, len(code.preperiod))
    digits = code.digits(depth)
    vals = [ONE]
    mu: list[int | None] = [1]
    for h in digits:
        prev = vals[-1]
        vals.append(step(prev, h, ds))
        # counts only mean something while the trace stays at +1 or -1
        f = mu_factor(prev, h, ds) if mu[-1] is not None and vals[-1].is_pm_one else None
        mu.append(None if f is None else mu[-1] * f)
    if code.is_prefix:
        return SigmaTrace(tuple(digits), tuple(vals), tuple(mu), None,
                          all(v.is_pm_one for v in vals))
    prof = sigma_profile(ds, code)
    return SigmaTrace(tuple(digits), tuple(vals), tuple(mu), (prof.start, prof.q),
                      prof.all_pm_one)


def sigma_at(ds: DigitSet, code: PeriodicCode, k: int) -> SigmaValue:
    state = ONE
    for h in _nonneg_code(ds, code).digits(k):
        state = step(state, h, ds)
    return state


def mu_at(ds: DigitSet, code: PeriodicCode, k: int) -> int | None:
    return sigma_trace(ds, code, k).mu[k]


def ell(ds: DigitSet, code: PeriodicCode, k: int) -> Fraction:
    """Common length of the overlaps of a cell of C_k with a cell of C_k + t.

    When t terminates, overlaps of length 0 also occur and touching overlaps
    may merge, so the oracle's merged pieces need not all have this length.
    """
    code = _nonneg_code(ds, code)
    s = sigma_at(ds, code, k)
    r = tail_value(code, k)
    if s is ONE:
        return Fraction(1, code.base ** k) - r
    if s is MINUS_ONE:
        return r
    raise SigmaNotPM(f"sigma({k}) = {s.label}; lengths need sigma = +1 or -1")


@dataclass(frozen=True)
class PsiResult:
    """y = ψ(t) together with the shift c such that C∩(C+t) = C∩(C+y) - c."""

    y: PeriodicCode
    offset: Fraction | None
    complete: bool
    q: int | None


def _psi_digit(t: int, before: SigmaValue, after: SigmaValue, n: int) -> int:
    if before is ONE:
        return t if after is ONE else t + 1
    return n - 1 - t if after is MINUS_ONE else n - t


def psi(ds: DigitSet, code: PeriodicCode) -> PsiResult:
    """Recode t so that its case trace is constantly +1.

    Wherever sigma switches sign, the tail is reflected; the accumulated
    reflection shifts add up to the offset c.
    """
    code = _nonneg_code(ds, code)
    n = code.base
    if code.is_prefix:
        vals = [ONE]
        ys = []
        for h in code.preperiod:
            nxt = step(vals[-1], h, ds)
            if not nxt.is_pm_one:
                raise SigmaNotPM("the recoding needs sigma = +1 or -1 at every level")
            ys.append(_psi_digit(h, vals[-1], nxt, n))
            vals.append(nxt)
        return PsiResult(PeriodicCode(n, ys, (), Alphabet.NARY), None, False, None)

    if has_finite_expansion(value_of(code), n):
        raise FiniteRepresentation("the recoding needs a value without terminating expansion")
    prof = sigma_profile(ds, code)
    if not prof.all_pm_one:
        raise SigmaNotPM("the recoding needs sigma = +1 or -1 at every level")
    a, q = len(code.preperiod), prof.q
    head = max(a, prof.start)
    ys = [_psi_digit(code.digit_at(j), prof.at(j - 1), prof.at(j), n)
          for j in range(1, head + q + 1)]
    y = PeriodicCode(n, ys[:head], ys[head:], Alphabet.NARY)

    def term(k: int) -> Fraction:
        before, after = prof.at(k - 1), prof.at(k)
        if before is after:
            return Fraction(0)
        if after is MINUS_ONE:
            return Fraction(1, n ** k) - tail_value(code, k)
        return tail_value(code, k)

    c = sum((term(k) for k in range(1, head + 1)), Fraction(0))
    block = sum((term(k) for k in range(head + 1, head + q + 1)), Fraction(0))
    c += block / (1 - Fraction(1, n ** q))
    return PsiResult(y, c, True, q)


def to_delta_plus(ds: DigitSet, code: PeriodicCode) -> tuple[PeriodicCode, Fraction | None, str]:
    """A Δ⁺ code y and shift c with C ∩ (C + t) = C ∩ (C + y) - c.

    Routes: ``abs`` for Δ codes, ``direct`` when the digits already lie in
    Δ⁺ with trace constantly +1 (possibly after switching a terminating
    expansion to its (n-1)-tail form), and ``psi`` otherwise.
    """
    n = ds.base
    plus = set(ds.deltas_nonneg)
    if code.alphabet is not Alphabet.NARY:
        check_alphabet(code, ds)
    if code.alphabet is Alphabet.DELTA:
        return abs_canonicalize(code, ds), Fraction(0), "abs"

    def direct(c: PeriodicCode) -> bool:
        if not set(c.preperiod + c.period) <= plus:
            return False
        if c.is_prefix:
            return all(v is ONE for v in sigma_trace(ds, c, len(c.preperiod)).values)
        return sigma_profile(ds, c).all_one

    if direct(code):
        return code.with_alphabet(Alphabet.DELTA_PLUS), Fraction(0), "direct"
    if code.is_prefix:
        res = psi(ds, code)
        return res.y.with_alphabet(Alphabet.DELTA_PLUS), None, "psi"
    if has_finite_expansion(value_of(code), n):
        alt = alternate_nary(code)
        if alt is not None and direct(alt):
            return alt.with_alphabet(Alphabet.DELTA_PLUS), Fraction(0), "direct"
        raise FiniteRepresentation(
            "neither expansion of this terminating value uses only nonnegative differences")
    res = psi(ds, code)
    assert set(res.y.preperiod + res.y.period) <= plus
    return res.y.with_alphabet(Alphabet.DELTA_PLUS), res.offset, "psi"

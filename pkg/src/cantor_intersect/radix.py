"""Eventually periodic base-n digit strings and their exact values."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .digitset import DigitSet, classify
from .errors import BudgetExceeded, InvalidCode, NotRepresentable, NotSparse


class Alphabet(enum.Enum):
    NARY = "nary"
    DELTA = "delta"
    DELTA_PLUS = "delta_plus"
    D_ONLY = "d_only"


def _primitive(word: tuple[int, ...]) -> tuple[int, ...]:
    p = len(word)
    for d in range(1, p + 1):
        if p % d == 0 and word == word[:d] * (p // d):
            return word[:d]
    return word


def _reduce(pre: tuple[int, ...], per: tuple[int, ...]):
    per = _primitive(per)
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1:] + per[:-1]
    return pre, per


@dataclass(frozen=True)
class PeriodicCode:
    """0._n t_1 ... t_k (t_{k+1} ... t_{k+p}) over a declared alphabet.

    An empty period marks a prefix code: only the listed digits are known
    and the tail is unspecified (used for irrational inputs).
    """

    base: int
    alphabet: Alphabet
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __init__(self, base: int, preperiod: Iterable[int] = (),
                 period: Iterable[int] = (), alphabet: Alphabet = Alphabet.NARY):
        pre = tuple(int(x) for x in preperiod)
        per = tuple(int(x) for x in period)
        if base < 2:
            raise InvalidCode(f"base must be at least 2, got {base}")
        lo = -(base - 1) if alphabet is Alphabet.DELTA else 0
        for x in pre + per:
            if not lo <= x <= base - 1:
                raise InvalidCode(f"digit {x} out of range for {alphabet.value} base {base}")
        if per:
            pre, per = _reduce(pre, per)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @property
    def is_prefix(self) -> bool:
        return not self.period

    @property
    def known_length(self) -> int:
        """Digits available before repetition (or at all, for prefix codes)."""
        return len(self.preperiod) + len(self.period)

    def digit_at(self, j: int) -> int:
        """The j-th digit, counting from 1."""
        if j < 1:
            raise IndexError("digits are numbered from 1")
        k = len(self.preperiod)
        if j <= k:
            return self.preperiod[j - 1]
        if not self.period:
            raise IndexError(f"prefix code has only {k} digits")
        return self.period[(j - k - 1) % len(self.period)]

    def digits(self, count: int) -> list[int]:
        return [self.digit_at(j) for j in range(1, count + 1)]

    @property
    def value(self) -> Fraction:
        return value_of(self)

    def with_alphabet(self, alphabet: Alphabet) -> "PeriodicCode":
        return PeriodicCode(self.base, self.preperiod, self.period, alphabet)

    def __str__(self) -> str:
        return format_code(self)

    def to_dict(self) -> dict:
        return {"base": self.base, "alphabet": self.alphabet.value,
                "preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_dict(cls, data: dict) -> "PeriodicCode":
        return cls(data["base"], data["preperiod"], data["period"],
                   Alphabet(data.get("alphabet", "nary")))


def _word_value(word: Sequence[int], n: int) -> int:
    v = 0
    for x in word:
        v = v * n + x
    return v


def value_of(code: PeriodicCode) -> Fraction:
    n, k, p = code.base, len(code.preperiod), len(code.period)
    head = Fraction(_word_value(code.preperiod, n), n ** k)
    if not p:
        return head
    tail = Fraction(_word_value(code.period, n), n ** k * (n ** p - 1))
    return head + tail


def truncate(code: PeriodicCode, k: int) -> Fraction:
    """⌊t⌋_k: the value of the first k digits."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return Fraction(_word_value(code.digits(k), code.base), code.base ** k)


def tail_value(code: PeriodicCode, k: int) -> Fraction:
    """t - ⌊t⌋_k."""
    return value_of(code) - truncate(code, k)


def has_finite_expansion(value: Fraction, base: int) -> bool:
    den = Fraction(value).denominator
    g = math.gcd(den, base)
    while g > 1:
        while den % g == 0:
            den //= g
        g = math.gcd(den, base)
    return den == 1


def alternate_nary(code: PeriodicCode) -> PeriodicCode | None:
    """The other base-n expansion of a value with a terminating expansion.

    0.x_1..x_k(0) with x_k > 0 becomes 0.x_1..(x_k - 1)((n-1)) and vice versa.
    Returns None when the value has a single expansion.
    """
    n = code.base
    if code.period == (0,) and any(code.preperiod):
        pre = list(code.preperiod)
        while pre[-1] == 0:
            pre.pop()
        pre[-1] -= 1
        return PeriodicCode(n, pre, (n - 1,))
    if code.period == (n - 1,) and value_of(code) < 1:
        pre = list(code.preperiod)
        pre[-1] += 1
        return PeriodicCode(n, pre, (0,))
    return None


def _allowed(alphabet: Alphabet, base: int, ds: DigitSet | None) -> list[int]:
    if alphabet is Alphabet.NARY:
        return list(range(base))
    if ds is None:
        raise ValueError(f"alphabet {alphabet.value} needs a digit set")
    if alphabet is Alphabet.DELTA:
        return list(ds.deltas)
    if alphabet is Alphabet.DELTA_PLUS:
        return list(ds.deltas_nonneg)
    return list(ds.digits)


def check_alphabet(code: PeriodicCode, ds: DigitSet) -> None:
    allowed = set(_allowed(code.alphabet, code.base, ds))
    bad = [x for x in code.preperiod + code.period if x not in allowed]
    if bad:
        raise InvalidCode(f"digits {bad} are not in the {code.alphabet.value} alphabet")


def _nary_from_rational(value: Fraction, n: int) -> PeriodicCode:
    if value == 1:
        return PeriodicCode(n, (), (n - 1,))
    r, den = value.numerator, value.denominator
    seen: dict[int, int] = {}
    digits: list[int] = []
    while r not in seen:
        seen[r] = len(digits)
        r *= n
        digits.append(r // den)
        r %= den
    start = seen[r]
    return PeriodicCode(n, digits[:start], digits[start:])


def code_from_rational(value: Fraction | int | str, base: int,
                       alphabet: Alphabet = Alphabet.NARY,
                       ds: DigitSet | None = None,
                       max_states: int = 1_000_000) -> PeriodicCode:
    """Eventually periodic code of a rational over the requested alphabet.

    NARY uses long division and never ends in a tail of (n-1)s unless the
    value is 1.  Restricted alphabets explore the finite graph of remainders
    (each remainder must stay within the range a tail can reach), discard
    states with no infinite continuation, then follow the largest admissible
    digit until a remainder repeats.
    """
    value = Fraction(value)
    n = base
    if alphabet is Alphabet.NARY:
        if not 0 <= value <= 1:
            raise NotRepresentable(f"{value} is outside [0, 1]")
        return _nary_from_rational(value, n)

    digits = sorted(_allowed(alphabet, n, ds))
    lo = Fraction(digits[0], n - 1)
    hi = Fraction(digits[-1], n - 1)
    if not lo <= value <= hi:
        raise NotRepresentable(f"{value} is outside [{lo}, {hi}]")

    edges: dict[Fraction, list[tuple[int, Fraction]]] = {}
    stack = [value]
    while stack:
        x = stack.pop()
        if x in edges:
            continue
        if len(edges) >= max_states:
            raise BudgetExceeded(len(edges) + 1, max_states)
        out = []
        for a in digits:
            y = n * x - a
            if lo <= y <= hi:
                out.append((a, y))
                if y not in edges:
                    stack.append(y)
        edges[x] = out

    alive = set(edges)
    changed = True
    while changed:
        changed = False
        for x in list(alive):
            if not any(y in alive for _, y in edges[x]):
                alive.discard(x)
                changed = True
    if value not in alive:
        raise NotRepresentable(f"{value} has no {alphabet.value} expansion in base {n}")

    order: dict[Fraction, int] = {}
    out_digits: list[int] = []
    x = value
    while x not in order:
        order[x] = len(out_digits)
        a, x = max((a, y) for a, y in edges[x] if y in alive)
        out_digits.append(a)
    start = order[x]
    return PeriodicCode(n, out_digits[:start], out_digits[start:], alphabet)


def abs_canonicalize(code: PeriodicCode, ds: DigitSet) -> PeriodicCode:
    """Replace every digit by its absolute value (a Δ code becomes a Δ⁺ code)."""
    if not classify(ds).sparse:
        raise NotSparse("taking absolute values of digits requires a sparse digit set")
    return PeriodicCode(code.base, [abs(x) for x in code.preperiod],
                        [abs(x) for x in code.period], Alphabet.DELTA_PLUS)


# textual grammar: PREPERIOD(PERIOD), PREFIX..., or p/q

def _parse_group(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if "." in text:
        return [int(part) for part in text.split(".") if part != ""]
    if not text.isdigit():
        raise InvalidCode(f"cannot read digits {text!r}; separate digits with '.'")
    return [int(ch) for ch in text]


def parse_code(text: str, base: int, alphabet: Alphabet = Alphabet.NARY,
               ds: DigitSet | None = None) -> tuple[PeriodicCode, int]:
    """Parse a number and return (code, sign).

    Accepted forms: ``02(20)``, ``54(4728)``, ``(12.3)`` for digits of 10 or
    more, ``0220...`` for a bare prefix, ``3/4`` or ``-3/4`` for a rational,
    and a plain digit string ``02`` meaning 0.02 followed by zeros.
    """
    s = text.strip()
    if not s:
        raise InvalidCode("empty number")
    if "/" in s:
        try:
            value = Fraction(s)
        except ValueError as exc:
            raise InvalidCode(f"bad rational {s!r}") from exc
        sign = -1 if value < 0 else 1
        return code_from_rational(abs(value), base, alphabet, ds), sign
    if s.endswith("..."):
        return PeriodicCode(base, _parse_group(s[:-3]), (), alphabet), 1
    if "(" in s:
        if not s.endswith(")") or s.count("(") != 1:
            raise InvalidCode(f"bad periodic code {s!r}")
        head, per = s[:-1].split("(")
        per_digits = _parse_group(per)
        if not per_digits:
            raise InvalidCode("empty period; write a prefix code as DIGITS...")
        return PeriodicCode(base, _parse_group(head), per_digits, alphabet), 1
    return PeriodicCode(base, _parse_group(s), (0,), alphabet), 1


def _format_group(word: Sequence[int]) -> str:
    if all(0 <= x <= 9 for x in word):
        return "".join(str(x) for x in word)
    body = ".".join(str(x) for x in word)
    return body + "." if len(word) == 1 else body


def format_code(code: PeriodicCode) -> str:
    head = _format_group(code.preperiod)
    if code.is_prefix:
        return head + "..."
    return f"{head}({_format_group(code.period)})"

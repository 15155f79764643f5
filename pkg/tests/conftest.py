import random
from fractions import Fraction

import pytest

from cantor_intersect.digitset import DigitSet, is_sparse_digits
from cantor_intersect.radix import PeriodicCode, code_from_rational, has_finite_expansion, value_of

MTC = DigitSet(3, (0, 2))


def random_sparse(rng: random.Random, max_base: int = 12) -> DigitSet:
    while True:
        n = rng.randint(3, max_base)
        m = rng.randint(2, max(2, min(n - 1, 5)))
        digits = sorted(rng.sample(range(n), m))
        if digits[0] != 0:
            digits = [0] + digits[1:]
        if len(set(digits)) == len(digits) and is_sparse_digits(digits):
            return DigitSet(n, digits)


def random_word(rng: random.Random, alphabet, lo: int, hi: int) -> list[int]:
    return [rng.choice(alphabet) for _ in range(rng.randint(lo, hi))]


def random_translation(rng: random.Random, ds: DigitSet) -> PeriodicCode:
    """n-ary code of x - y for random eventually periodic x, y in C, non-terminating."""
    while True:
        x = PeriodicCode(ds.base, random_word(rng, ds.digits, 0, 3),
                         random_word(rng, ds.digits, 1, 3))
        y = PeriodicCode(ds.base, random_word(rng, ds.digits, 0, 3),
                         random_word(rng, ds.digits, 1, 3))
        t = abs(value_of(x) - value_of(y))
        if not has_finite_expansion(t, ds.base):
            return code_from_rational(t, ds.base)


@pytest.fixture
def mtc() -> DigitSet:
    return MTC


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def frac(text: str) -> Fraction:
    return Fraction(text)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, text = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {text}")

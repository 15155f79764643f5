"""Exact computations on intersections of deleted-digits Cantor sets with their translates."""

from .digitset import DigitSet, classify, slice_of, sumset_decompose
from .errors import BudgetExceeded, CantorError, DomainError
from .radix import Alphabet, PeriodicCode, code_from_rational, parse_code, value_of

__all__ = [
    "Alphabet",
    "BudgetExceeded",
    "CantorError",
    "DigitSet",
    "DomainError",
    "PeriodicCode",
    "classify",
    "code_from_rational",
    "parse_code",
    "slice_of",
    "sumset_decompose",
    "value_of",
]

__version__ = "0.1.0"

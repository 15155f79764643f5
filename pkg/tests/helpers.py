"""Shared brute-force comparisons used by several test modules."""

from fractions import Fraction

from cantor_intersect.intervals import iter_levels
from cantor_intersect.kernel import MINUS_ONE, ONE, SigmaValue, ell, sigma_trace
from cantor_intersect.radix import has_finite_expansion, value_of


def oracle_mismatches(ds, code, depth, budget=2_000_000):
    """Compare the trace, counts and lengths with the enumerated levels.

    Returns a list of human-readable mismatches (empty when everything agrees).
    """
    trace = sigma_trace(ds, code, depth)
    terminating = has_finite_expansion(value_of(code), ds.base)
    problems = []
    for res in iter_levels(ds, code, depth, budget):
        k = res.level
        s = trace.values[k]
        seen = res.cases.sigma_class()
        if s is SigmaValue.ZERO:
            if len(res.tight) or res.points:
                problems.append(f"k={k}: trace says empty, oracle has pieces")
            continue
        if seen is not s:
            problems.append(f"k={k}: trace {s.label}, cases {seen.label}")
            continue
        if s in (ONE, MINUS_ONE) and not terminating:
            if len(res.tight) != trace.mu[k]:
                problems.append(f"k={k}: {len(res.tight)} pieces, mu={trace.mu[k]}")
            length = ell(ds, code, k)
            if res.tight.lengths != {length}:
                problems.append(f"k={k}: lengths {res.tight.lengths}, ell={length}")
    return problems


def level_depth(ds, code, limit, cap=20_000):
    """Largest depth <= limit whose interval count stays below ``cap``."""
    trace = sigma_trace(ds, code, limit)
    depth = 0
    for k in range(limit + 1):
        mu = trace.mu[k]
        if mu is not None and mu > cap:
            break
        if ds.m ** k > cap and mu is None:
            break
        depth = k
    return depth


def covering_cells(ds, code, level):
    """Left ends (exact) of the interval-case cells at a level, moved by the slice minima."""
    from cantor_intersect.digitset import slice_of
    from cantor_intersect.intervals import intersect_level

    res = intersect_level(ds, code, level)
    n = ds.base
    lows = sum(Fraction(slice_of(ds, code.digit_at(j)).offset, n ** j)
               for j in range(1, level + 1))
    return sorted(Fraction(h, n ** level) - lows for h in res.cases.interval_lefts)

"""One test per acceptance criterion; a PASS/FAIL line per criterion is printed at the end."""

import functools
import math
import random
import time
from fractions import Fraction

from cantor_intersect.betaexp import BetaSystem, g_beta, transport_report
from cantor_intersect.digitset import DigitSet, is_sparse_digits
from cantor_intersect.equivalence import (generate_nonequivalent, rational_equivalent,
                                          self_similar_report, similarity_system,
                                          strongly_periodic, thue_morse)
from cantor_intersect.intervals import boxcount_curve, build_level, intersect_level
from cantor_intersect.kernel import ONE, psi, sigma_profile, sigma_trace
from cantor_intersect.measure import DimensionValue, MeasureValue
from cantor_intersect.radix import Alphabet, PeriodicCode, code_from_rational, value_of

from conftest import MTC, random_sparse, random_translation
from helpers import covering_cells, level_depth, oracle_mismatches

F = Fraction
D057 = DigitSet(8, (0, 5, 7))
D17 = DigitSet(17, (0, 3, 6, 12))

RESULTS: dict[int, tuple[bool, str]] = {}


def criterion(number: int, title: str, seconds: float):
    def wrap(test):
        @functools.wraps(test)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                test(*args, **kwargs)
                elapsed = time.perf_counter() - start
                assert elapsed < seconds, f"took {elapsed:.2f}s, limit {seconds}s"
            except BaseException as exc:
                detail = str(exc).splitlines()[0] if str(exc) else ""
                RESULTS[number] = (False, f"{title}: {type(exc).__name__}: {detail}")
                raise
            RESULTS[number] = (True, f"{title} ({elapsed:.2f}s)")
        return run
    return wrap


@criterion(1, "middle thirds, t = 3/4", 1)
def test_criterion_01_three_quarters():
    rep = self_similar_report(MTC, code_from_rational(F(3, 4), 3))
    assert rep.E == (6, 8) and rep.E_base == 9
    assert rep.dimension == DimensionValue(2, 9)
    assert rep.measure == MeasureValue(1, F(1, 4), DimensionValue(2, 9))
    assert abs(rep.measure.float - 4 ** -(math.log(2) / math.log(9))) <= 1e-12


@criterion(2, "n=8, D={0,5,7}, t=0.(07)", 1)
def test_criterion_02_three_digit_e():
    rep = self_similar_report(D057, PeriodicCode(8, (), (0, 7)))
    assert rep.E == (7, 47, 63) and rep.E_base == 64
    assert rep.dimension == DimensionValue(3, 64)


@criterion(3, "n=8, D={0,5,7}, alpha=0.0(7) is finite with points {1/8, 3/4, 1}", 1)
def test_criterion_03_finite():
    rep = self_similar_report(D057, PeriodicCode(8, (0,), (7,)))
    assert rep.verdict == "FINITE"
    assert set(rep.points) == {F(1, 8), F(3, 4), F(1)}, f"points are {sorted(map(str, rep.points))}"


@criterion(4, "middle thirds, 0.02(0) strongly periodic and 0.02(20) not", 2)
def test_criterion_04_pair():
    sp = self_similar_report(MTC, PeriodicCode(3, (0, 2), (0,)))
    assert sp.verdict == "STRONGLY_PERIODIC" and len(sp.offsets) == 2
    assert sp.measure.is_rational and sp.measure.coeff == F(1, 2)
    other = self_similar_report(MTC, PeriodicCode(3, (0, 2), (2, 0)))
    assert other.verdict == "RATIONAL_EQUIVALENT" and not other.strong.sp
    assert other.measure == MeasureValue(1, F(1, 4), DimensionValue(2, 9))


@criterion(5, "recoding of 0.54(4728) over {0,2,7,9}", 1)
def test_criterion_05_recoding():
    res = psi(DigitSet(10, (0, 2, 7, 9)), PeriodicCode(10, (5, 4), (4, 7, 2, 8)))
    assert res.y == PeriodicCode(10, (5, 5), (5, 2, 7, 2))


@criterion(6, "n=9, D={0,2,4,8}, 0.2(0): subset condition without strong periodicity", 1)
def test_criterion_06_subset_only():
    ds = DigitSet(9, (0, 2, 4, 8))
    alpha = PeriodicCode(9, (2,), (0,))
    assert rational_equivalent(ds, alpha).verdict == "YES"
    sp = strongly_periodic(ds, alpha)
    assert sp.subset_condition_q is not None and not sp.sp


@criterion(7, "trace, counts and lengths agree with enumeration on 100 random systems", 60)
def test_criterion_07_oracle():
    rng = random.Random(2024)
    failures = []
    for _ in range(100):
        ds = random_sparse(rng, 12)
        plus = ds.deltas_nonneg
        code = PeriodicCode(ds.base, [rng.choice(plus) for _ in range(rng.randint(0, 3))],
                            [rng.choice(plus) for _ in range(rng.randint(1, 3))],
                            Alphabet.DELTA_PLUS)
        depth = level_depth(ds, code, 10)
        problems = oracle_mismatches(ds, code, depth)
        if problems:
            failures.append((ds, code, problems))
    assert failures == []


@criterion(8, "trace period is p or 2p on 100 random codes", 10)
def test_criterion_08_period_law():
    rng = random.Random(8)
    checked = 0
    while checked < 100:
        ds = random_sparse(rng, 12)
        code = random_translation(rng, ds)
        prof = sigma_profile(ds, code)
        if not prof.all_pm_one:
            continue
        checked += 1
        assert prof.q in (len(code.period), 2 * len(code.period)), (ds, code, prof)


@criterion(9, "E is sparse on 200 random sparse systems", 30)
def test_criterion_09_e_sparse():
    rng = random.Random(9)
    for _ in range(200):
        ds = random_sparse(rng, 12)
        rep = self_similar_report(ds, random_translation(rng, ds))
        assert len(rep.E) == 1 or is_sparse_digits(rep.E), (ds, rep.E)


@criterion(10, "similarity maps carry the level-6 covering onto the deeper covering", 30)
def test_criterion_10_similarity_closure():
    cases = [(MTC, PeriodicCode(3, (), (2, 0))), (D057, PeriodicCode(8, (), (0, 7))),
             (MTC, PeriodicCode(3, (0, 2), (0,)))]
    for ds, code in cases:
        rep = self_similar_report(ds, code)
        assert rep.verdict == "STRONGLY_PERIODIC"
        sim = similarity_system(ds, rep.y)
        level = 6
        before = covering_cells(ds, rep.y, level)
        after = covering_cells(ds, rep.y, level + sim.block)
        image = sorted(sim.ratio * c + b for c in before for b in sim.offsets)
        assert image == after, code


@criterion(11, "box-count slopes at depth 12 within 0.05 of the dimension", 60)
def test_criterion_11_boxcount():
    cases = [(MTC, code_from_rational(F(3, 4), 3)), (D057, PeriodicCode(8, (), (0, 7))),
             (MTC, PeriodicCode(3, (0, 2), (0,))), (MTC, PeriodicCode(3, (0, 2), (2, 0))),
             (D17, PeriodicCode(17, (), (3,)))]
    for ds, code in cases:
        exact = self_similar_report(ds, code).dimension.float
        slope = boxcount_curve(ds, code, 12).slope
        assert abs(slope - exact) < 0.05, (code, slope, exact)


@criterion(12, "Thue-Morse substitution gives an undecided prefix with violations for q <= 12", 5)
def test_criterion_12_generator():
    gen = generate_nonequivalent(D17, PeriodicCode(17, (), (3,)), 6, thue_morse(200), 120)
    assert len(gen.gamma.preperiod) == 120
    res = rational_equivalent(D17, gen.gamma, qmax=12)
    assert res.verdict == "UNDECIDED_PREFIX"
    for q in range(1, 13):
        j = res.violations[q]
        assert j is not None and j + q <= 120


@criterion(13, "n=10, D={0,1,2,6,8}, t=2/9 follows C_{10,{2,8}}", 5)
def test_criterion_13_non_sparse():
    ds = DigitSet(10, (0, 1, 2, 6, 8))
    code = code_from_rational(F(2, 9), 10)
    assert all(v is ONE for v in sigma_trace(ds, code, 30).values)
    assert sigma_profile(ds, code).all_one
    res = intersect_level(ds, code, 5)
    target = build_level(DigitSet(10, (2, 8)), 5)
    # the surviving level-5 cells are exactly the level-5 cells of C_{10,{2,8}}
    cells = set(res.cases.interval_lefts)
    assert cells == set(target.starts)
    width = F(1, 10 ** 5)
    pieces = res.tight.intervals
    assert len(pieces) == len(target) and not res.points
    for a, b in pieces:
        owners = [h for h in cells if F(h) * width <= a and b <= F(h + 1) * width]
        assert len(owners) == 1
    # and every point of C_{10,{2,8}} at this depth lies in the tight set
    for h in target.starts:
        x = F(h) * width + width * F(2, 9)
        assert res.tight.contains_point(x)


@criterion(14, "beta transport: monotone, verdict unchanged, identity at 1/N", 10)
def test_criterion_14_beta():
    code = PeriodicCode(8, (), (0, 7))
    rep = transport_report(BetaSystem(8, (0, 5, 7), F(1, 10)), D057, code, pairs=100)
    assert rep.monotone and rep.structure and len(rep.samples) == 100
    other = transport_report(BetaSystem(8, (0, 5, 7), F(1, 11)), D057, code, pairs=10)
    assert other.verdict == rep.verdict == self_similar_report(D057, code).verdict
    ident = BetaSystem(8, (0, 5, 7), F(1, 8))
    rng = random.Random(14)
    for _ in range(100):
        c = PeriodicCode(8, [rng.choice((0, 5, 7)) for _ in range(3)],
                         [rng.choice((0, 5, 7)) for _ in range(2)])
        assert g_beta(ident, c) == value_of(c)

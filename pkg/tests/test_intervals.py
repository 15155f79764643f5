import math
from fractions import Fraction

import pytest

from cantor_intersect.digitset import DigitSet
from cantor_intersect.errors import BudgetExceeded, SigmaNotPM
from cantor_intersect.intervals import (IntervalSet, boxcount_curve, build_level,
                                        intersect_level, iter_levels, offsets)
from cantor_intersect.kernel import ONE, ell, sigma_trace
from cantor_intersect.radix import PeriodicCode, code_from_rational

from conftest import MTC

F = Fraction


def test_levels_of_middle_thirds():
    assert build_level(MTC, 0).intervals == [(F(0), F(1))]
    assert build_level(MTC, 1).intervals == [(F(0), F(1, 3)), (F(2, 3), F(1))]


def test_level_two_of_zero_five_seven():
    level = build_level(DigitSet(8, (0, 5, 7)), 2)
    assert len(level) == 9
    assert level.lengths == {F(1, 64)}
    assert F(47, 64) in {a for a, _ in level.intervals}


def test_three_quarters_level_two():
    code = PeriodicCode(3, (), (2, 0))
    res = intersect_level(MTC, code, 2)
    mu = sigma_trace(MTC, code, 2).mu[2]
    assert len(res.tight) == mu == 2
    assert res.tight.lengths == {ell(MTC, code, 2)}
    # both pieces start at points of C_{9,{6,8}}
    assert [a for a, _ in res.tight.intervals] == [F(3, 4), F(3, 4) + F(2, 9)]


def test_zero_translation():
    code = PeriodicCode(3, (), (0,))
    for res in iter_levels(MTC, code, 5):
        assert res.tight == build_level(MTC, res.level)
        assert res.cases.interval == 2 ** res.level


def test_non_sparse_level_three():
    ds = DigitSet(10, (0, 1, 2, 6, 8))
    res = intersect_level(ds, code_from_rational(F(2, 9), 10), 3)
    target = build_level(DigitSet(10, (2, 8)), 3)
    assert set(res.cases.interval_lefts) == set(target.starts)
    assert len(res.tight) == len(target)


def test_offsets():
    out = offsets(MTC, PeriodicCode(3, (0, 2), (0,)), 2)
    assert out.offsets == (F(2, 9), F(8, 9))
    out = offsets(MTC, PeriodicCode(3, (), (0,)), 1)
    assert out.offsets == (F(0), F(2, 3))
    out = offsets(MTC, PeriodicCode(3, (0, 2), (2, 0)), 2)
    assert len(out.offsets) == 2 and out.sigma is ONE


def test_offsets_need_sign():
    with pytest.raises(SigmaNotPM):
        offsets(DigitSet(17, (0, 2, 4, 7, 10, 13)), PeriodicCode(17, (), (2,)), 2)


def test_terminating_translation_gives_points():
    res = intersect_level(MTC, code_from_rational(F(1, 3), 3), 6)
    assert F(1, 3) in res.points or res.tight.contains_point(F(1, 3))


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        intersect_level(MTC, PeriodicCode(3, (), (0,)), 12, budget=1000)
    assert info.value.budget == 1000


def test_boxcount_zero():
    curve = boxcount_curve(DigitSet(8, (0, 5, 7)), PeriodicCode(8, (), (0,)), 6)
    assert curve.slope == pytest.approx(math.log(3) / math.log(8), abs=1e-9)
    assert curve.rows[0] == (1, 3, F(1, 8))


def test_interval_set_roundtrip():
    res = intersect_level(MTC, PeriodicCode(3, (), (2, 0)), 4)
    assert IntervalSet.from_dict(res.tight.to_dict()) == res.tight
    moved = res.tight.shifted(F(1, 7)).shifted(F(-1, 7))
    assert moved.intervals == res.tight.intervals

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cantor_intersect.betaexp import (BetaSystem, gamma_point, gamma_scale, g_beta,
                                      transport_report)
from cantor_intersect.digitset import DigitSet
from cantor_intersect.errors import NotApplicable
from cantor_intersect.radix import PeriodicCode, value_of

from conftest import MTC

F = Fraction
D057 = DigitSet(8, (0, 5, 7))


def test_g_beta_values():
    sys3 = BetaSystem(3, (0, 2), F(1, 4))
    assert g_beta(sys3, PeriodicCode(3, (), (0,))) == 0
    assert g_beta(sys3, PeriodicCode(3, (), (2,))) == F(2, 3)
    ident = BetaSystem(8, (0, 5, 7), F(1, 8))
    code = PeriodicCode(8, (5,), (0, 7))
    assert g_beta(ident, code) == value_of(code)


def test_gamma_scale():
    assert gamma_scale(BetaSystem(3, (0, 2), F(1, 3))) == 1
    assert gamma_scale(BetaSystem(3, (0, 2), F(1, 4))) == F(3, 2)
    assert gamma_scale(BetaSystem(8, (0, 5, 7), F(1, 10))) == F(9, 7)


@pytest.mark.parametrize("system", [
    BetaSystem(3, (0, 2), F(1, 4)),
    BetaSystem(8, (0, 5, 7), F(1, 10)),
    BetaSystem(17, (0, 3, 6, 12), F(2, 41)),
])
def test_gamma_identity(system):
    rng = random.Random(1)
    for _ in range(20):
        pre = [rng.choice(system.digits) for _ in range(3)]
        per = [rng.choice(system.digits) for _ in range(2)]
        code = PeriodicCode(system.N, pre, per)
        assert gamma_point(system, code) == gamma_scale(system) * g_beta(system, code)


def test_multiplier():
    assert BetaSystem(5, (0, 1, 2), F(1, 5)).digits == (0, 2, 4)
    with pytest.raises(NotApplicable):
        gamma_scale(BetaSystem(4, (0, 1, 2, 3), F(1, 4)))


def test_rejected_betas():
    with pytest.raises(NotApplicable):
        BetaSystem(3, (0, 2), F(1, 2))
    with pytest.raises(NotApplicable):
        BetaSystem(8, (0, 5), F(1, 7))
    with pytest.raises(NotApplicable):
        BetaSystem(8, (0, 5), F(0))


def test_transport_middle_thirds():
    rep = transport_report(BetaSystem(3, (0, 2), F(1, 4)), MTC, PeriodicCode(3, (0, 2), (0,)))
    assert rep.preserved and rep.verdict == "STRONGLY_PERIODIC"
    assert rep.copies == 2
    # the digit prefixes 00 and 20 plus the shared 02 tail, in powers of 1/4
    assert rep.offsets == (F(2, 16), F(2, 4) + F(2, 16))
    assert rep.ratio == F(1, 16)


def test_transport_verdict_does_not_depend_on_beta():
    code = PeriodicCode(8, (), (0, 7))
    verdicts = {transport_report(BetaSystem(8, (0, 5, 7), b), D057, code).verdict
                for b in (F(1, 8), F(1, 10), F(1, 11), F(1, 50))}
    assert verdicts == {"STRONGLY_PERIODIC"}


@given(st.lists(st.sampled_from((0, 5, 7)), min_size=1, max_size=6),
       st.lists(st.sampled_from((0, 5, 7)), min_size=1, max_size=6),
       st.integers(8, 40))
def test_g_beta_increasing(a, b, denominator):
    system = BetaSystem(8, (0, 5, 7), F(1, denominator))
    x, y = PeriodicCode(8, a, (0,)), PeriodicCode(8, b, (0,))
    if value_of(x) < value_of(y):
        assert g_beta(system, x) < g_beta(system, y)
    elif value_of(x) == value_of(y):
        assert g_beta(system, x) == g_beta(system, y)


def test_union_of_images():
    system = BetaSystem(8, (0, 5, 7), F(1, 10))
    xs = [PeriodicCode(8, (d,), (0,)) for d in (0, 5)]
    ys = [PeriodicCode(8, (d,), (0,)) for d in (5, 7)]
    image = {g_beta(system, c) for c in xs + ys}
    assert image == {g_beta(system, c) for c in xs} | {g_beta(system, c) for c in ys}

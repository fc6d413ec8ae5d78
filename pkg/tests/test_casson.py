from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from lensurg import casson
from lensurg.core import DomainError
from lensurg.lens import LensSpace
from lensurg.seifert import SeifertFibration, to_lens

coprime = st.tuples(st.integers(1, 300), st.integers(-300, 300)).filter(lambda t: gcd(*t) == 1)


def test_small_dedekind_values():
    assert casson.dedekind_sum(1, 3) == Fraction(1, 18)
    assert casson.dedekind_sum(2, 5) == 0
    assert casson.dedekind_sum(1, 5) == Fraction(1, 5)
    with pytest.raises(DomainError):
        casson.dedekind_sum(2, 4)


@given(coprime)
def test_two_routes_agree(ab):
    a, b = ab
    assert casson.dedekind_sum(b, a) == casson.dedekind_sum_reciprocity(b, a)


@given(coprime)
def test_oddness_and_period(ab):
    a, b = ab
    assert casson.dedekind_sum(-b, a) == -casson.dedekind_sum(b, a)
    assert casson.dedekind_sum(b + a, a) == casson.dedekind_sum(b, a)


@given(st.integers(1, 200), st.integers(1, 200))
def test_reciprocity_law(a, b):
    assume(gcd(a, b) == 1)
    lhs = casson.dedekind_sum(a, b) + casson.dedekind_sum(b, a)
    assert lhs == Fraction(-1, 4) + Fraction(a * a + b * b + 1, 12 * a * b)


@pytest.mark.parametrize("q", range(3, 200, 2))
def test_lens_closed_forms(q):
    assert casson.lambda_Lq1_closed(q) == casson.lambda_lens(q, 1)
    assert casson.lambda_Lq2_closed(q) == casson.lambda_lens(q, 2)
    assert casson.lambda_Lq2_signed(-q) == -casson.lambda_Lq2_closed(q)


fiber = st.tuples(st.integers(2, 12), st.integers(-30, 30)).filter(lambda t: gcd(*t) == 1)


@given(fiber, fiber, st.integers(-5, 5))
def test_two_fiber_seifert_lambda_matches_lens(f1, f2, n):
    fibers = [f1, f2, (1, n)]
    e = sum(Fraction(b, a) for a, b in fibers)
    assume(e != 0)
    L = to_lens(SeifertFibration(tuple(fibers)), canonical=False)
    assert casson.lambda_seifert(fibers) == casson.lambda_of(L)


@given(st.integers(1, 20), st.data())
def test_simple_knot_closed_forms(h, data):
    p = 2 * h + 1
    k = data.draw(st.integers(1, p - 1))
    m = data.draw(st.integers(-60, 60))
    assume(m != k and p * m != k * k)
    general = casson.lambda_seifert([(k, 1), (p - k, 1), (m - k, 1)])
    if m - k > 0 and p * m - k * k > 0:
        assert casson.lambda_seifert_pos(p, m, k) == general
    if m <= 0:
        assert casson.lambda_seifert_neg(p, m, k) == general
    assert casson.lambda_M(p, m, k) == general


def test_sign_filter_domains():
    assert casson.cw_sign_filter(7, 3, 2) == frozenset({-17})
    assert casson.cw_sign_filter(19, 2, 1) == frozenset({37, -37})
    # m=-2, k=1 leaves only the construction sign
    for p in range(3, 40, 2):
        assert casson.cw_sign_filter(p, -2, 1) == frozenset({2 * p + 1})


@pytest.mark.parametrize("p", range(7, 61, 2))
def test_delta_lambda_case_formulas(p):
    # scaled by |q|: (m,k)=(2,3), q=9-2p and (m,k)=(2,1), q=1-2p
    if p > 5:
        assert casson.delta_lambda(p, 2, 3, 9 - 2 * p) == Fraction((p - 5) * (p - 7), 6)
    assert casson.delta_lambda(p, 2, 1, 1 - 2 * p) == Fraction((p - 1) * (p - 3), 6)
    assert casson.delta_lambda(p, 2, 1, 2 * p - 1) == 0


def test_delta_lambda_domain():
    with pytest.raises(DomainError):
        casson.delta_lambda(7, 3, 2, 21)
    assert casson.delta_lambda_unscaled(7, 3, 2, 17) * 17 == casson.delta_lambda(7, 3, 2, 17)


def test_lambda_of_reversal():
    L = LensSpace(11, 3)
    assert casson.lambda_of(L.reversed()) == -casson.lambda_of(L)

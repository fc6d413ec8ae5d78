from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from lensurg.core import DomainError, continued_fraction
from lensurg.lens import (LensSpace, SpinC, conjugate, d_Lq2_closed, d_Lq2_signed, d_lens,
                          d_trace, d_uncached, self_conjugate_labels)


@st.composite
def lens(draw, pmax=400):
    p = draw(st.integers(2, pmax))
    q = draw(st.integers(1, p - 1))
    assume(gcd(p, q) == 1)
    return p, q


def test_known_values():
    F = Fraction
    assert d_lens((2, 1), 0) == F(1, 4)
    assert d_lens((2, 1), 1) == F(-1, 4)
    assert d_lens((37, 2), 34) == F(94, 37)
    assert d_lens((29, 3), 22) == F(2, 29)
    assert d_lens((29, 3), 25) == F(18, 29)
    assert d_lens((35, 3), 31) == F(15, 14)
    assert d_lens((35, 3), 34) == F(131, 70)
    assert d_lens((35, 2), 8) == F(13, 14)
    assert d_lens((35, 2), 0) == F(289, 70)
    assert d_lens(LensSpace(1, 0), 0) == 0


def test_reversal_negates():
    L = LensSpace(37, 2)
    assert d_lens(L.reversed(), 34) == -d_lens(L, 34)
    assert d_Lq2_signed(-37, 34) == Fraction(-94, 37)


def test_label_range_checked():
    with pytest.raises(DomainError):
        d_lens((5, 2), 5)
    with pytest.raises(DomainError):
        LensSpace(6, 2)
    with pytest.raises(DomainError):
        LensSpace.from_signed(0, 1)
    with pytest.raises(DomainError):
        d_Lq2_closed(8, 0)


@given(st.integers(1, 150).map(lambda x: 2 * x + 1), st.data())
def test_closed_form_matches_recursion(q, data):
    t = data.draw(st.integers(0, q - 1))
    assert d_Lq2_closed(q, t) == d_lens((q, 2), t)


@given(lens(), st.data())
def test_conjugation_invariance(pq, data):
    p, q = pq
    i = data.draw(st.integers(0, p - 1))
    j = conjugate(pq, i)
    assert conjugate(pq, j) == i
    assert d_lens(pq, j) == d_lens(pq, i)


@given(lens(), st.data())
def test_cached_equals_uncached(pq, data):
    p, q = pq
    i = data.draw(st.integers(0, p - 1))
    assert d_lens(pq, i) == d_uncached(p, q, i)


@given(lens(), st.data())
def test_recursion_depth_is_euclid_length(pq, data):
    p, q = pq
    i = data.draw(st.integers(0, p - 1))
    _, steps = d_trace(p, q, i)
    assert len(steps) == len(continued_fraction(p, q))


@given(lens(120))
def test_d_sum_and_denominators(pq):
    p, q = pq
    vals = [d_lens(pq, i) for i in range(p)]
    # 4p d is an integer
    assert all((4 * p * v).denominator == 1 for v in vals)


@given(lens(200))
def test_self_conjugate_count(pq):
    p, q = pq
    # i -> p+q-1-i has one fixed point mod odd p and 0 or 2 mod even p
    n = len(self_conjugate_labels(pq))
    assert n == (1 if p % 2 else (2 if (q - 1) % 2 == 0 else 0))


@given(lens(200))
def test_canonical_form(pq):
    p, q = pq
    L = LensSpace(p, q)
    inv = pow(q, -1, p)
    assert LensSpace(p, inv).compare(L) == 1
    assert L.reversed().compare(L) in (1, -1)
    if p > 2:
        assert L.canonical().q == min(q, inv)
        assert L.reversed().canonical().q == min(p - q, pow(p - q, -1, p))
    assert L.canonical().canonical() == L.canonical()


def test_compare_distinguishes():
    assert LensSpace(5, 1).compare(LensSpace(5, 2)) == 0
    assert LensSpace(5, 1).compare(LensSpace(5, 4)) == -1
    assert LensSpace(7, 2).compare(LensSpace(7, 4)) == 1


def test_spinc_object():
    s = SpinC(LensSpace(29, 2), 20)
    assert s.d() == Fraction(-2, 29)
    assert s.conjugate().d() == s.d()
    with pytest.raises(DomainError):
        SpinC(LensSpace(29, 2), 29)

from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, strategies as st

from lensurg.core import (DomainError, continued_fraction, egcd, fmt, gcd3, is_integer,
                          is_nonneg_integer, modinv, parse_rat, rat, sign)


def test_fmt_always_shows_denominator():
    assert fmt(3) == "3/1"
    assert fmt(Fraction(-6, 4)) == "-3/2"
    assert fmt(0) == "0/1"


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_fmt_parse_roundtrip(n, d):
    x = Fraction(n, d)
    assert parse_rat(fmt(x)) == x


def test_rat_rejects_zero_denominator():
    with pytest.raises(DomainError):
        rat(1, 0)


def test_predicates():
    assert is_nonneg_integer(Fraction(4, 2))
    assert not is_nonneg_integer(Fraction(-2))
    assert not is_integer(Fraction(1, 2))
    assert gcd3(6, -10, 14) == 2
    assert [sign(x) for x in (-3, 0, 5)] == [-1, 0, 1]


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_egcd_bezout(a, b):
    g, x, y = egcd(a, b)
    assert g == gcd(a, b)
    assert a * x + b * y == g


@given(st.integers(2, 10**6), st.integers(-10**6, 10**6))
def test_modinv(n, a):
    if gcd(a, n) != 1:
        with pytest.raises(DomainError):
            modinv(a, n)
    else:
        assert a * modinv(a, n) % n == 1


@given(st.integers(0, 10**9), st.integers(1, 10**9))
def test_continued_fraction_matches_sympy(p, q):
    assert continued_fraction(p, q) == list(sympy.continued_fraction(sympy.Rational(p, q)))

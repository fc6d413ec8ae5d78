"""Exact rationals and small number theory helpers."""
from fractions import Fraction
from math import gcd

Rational = Fraction


class DomainError(ValueError):
    pass


def rat(n, d=1):
    if d == 0:
        raise DomainError("zero denominator")
    return Fraction(int(n), int(d))


def is_nonneg_integer(x):
    x = Fraction(x)
    return x.denominator == 1 and x.numerator >= 0


def is_integer(x):
    return Fraction(x).denominator == 1


def gcd3(a, b, c):
    return gcd(gcd(abs(a), abs(b)), abs(c))


def fmt(x):
    """Serialize as 'n/d', denominator always shown."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s):
    s = str(s).strip()
    if "/" in s:
        n, d = s.split("/", 1)
        return rat(int(n), int(d))
    return rat(int(s), 1)


def sign(x):
    return (x > 0) - (x < 0)


def egcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def modinv(a, n):
    g, x, _ = egcd(a % n, n)
    if g != 1:
        raise DomainError(f"{a} not invertible mod {n}")
    return x % n


def continued_fraction(p, q):
    """Partial quotients of p/q (q > 0)."""
    out = []
    while q:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    return out

"""Dedekind sums and Casson-Walker invariants (normalized so lambda(L(a,b)) = -s(b,a)/2)."""
from math import gcd

from .core import DomainError, Fraction, sign
from .lens import LensSpace


def dedekind_sum(b, a):
    """s(b,a) straight from the sawtooth definition, O(a)."""
    if a < 1:
        raise DomainError("a must be positive")
    if gcd(a, b) != 1:
        raise DomainError(f"gcd({a},{b}) != 1")
    # ((k/a))((kb/a)) = (2k-a)(2r-a)/(4a^2) with r = kb mod a, never 0 here
    tot = 0
    for k in range(1, a):
        tot += (2 * k - a) * (2 * (k * b % a) - a)
    return Fraction(tot, 4 * a * a)


def dedekind_sum_reciprocity(b, a):
    """Same value via the reciprocity law (Euclid-length recursion)."""
    if a < 1:
        raise DomainError("a must be positive")
    if gcd(a, b) != 1:
        raise DomainError(f"gcd({a},{b}) != 1")
    total = Fraction(0)
    sg = 1
    b %= a
    while a > 1 and b > 0:
        # s(b,a) = -s(a,b) - 1/4 + (a/b + b/a + 1/(ab))/12
        total += sg * (Fraction(-1, 4) + Fraction(a * a + b * b + 1, 12 * a * b))
        a, b = b, a % b
        sg = -sg
    return total


def lambda_lens(a, b):
    if not (a > b > 0) or gcd(a, b) != 1:
        raise DomainError(f"lambda_lens needs a > b > 0 coprime, got ({a},{b})")
    return -dedekind_sum(b, a) / 2


def lambda_of(space):
    """lambda for a LensSpace value, respecting orientation."""
    if space.p == 1:
        return Fraction(0)
    return space.sign * (-dedekind_sum(space.q, space.p) / 2)


def lambda_Lq1_closed(q):
    return Fraction(-1, 12 * q) - Fraction(q, 24) + Fraction(1, 8)


def lambda_Lq2_closed(q):
    return Fraction(-5, 48 * q) - Fraction(q, 48) + Fraction(1, 8)


def lambda_Lq2_signed(q):
    if q == 0 or q % 2 == 0:
        raise DomainError("q must be odd")
    return lambda_of(LensSpace.from_signed(q, 2))


def lambda_seifert(fibers):
    """Genus-0 Seifert space over S^2 with fibers (alpha, beta), rational euler number != 0."""
    fib = [(a, b) if a > 0 else (-a, -b) for a, b in fibers]
    if any(a == 0 for a, _ in fib):
        raise DomainError("alpha = 0 fiber")
    e = sum(Fraction(b, a) for a, b in fib)
    if e == 0:
        raise DomainError("euler number 0: not a rational homology sphere")
    n = len(fib)
    ds = sum(dedekind_sum(b % a, a) for a, b in fib if a > 1)
    return ((2 - n + sum(Fraction(1, a * a) for a, _ in fib)) / (24 * e)
            + e / 24 - Fraction(sign(e), 8) - ds / 2)


def _simple_fibers(p, m, k):
    return [(k, 1), (p - k, 1), (m - k, 1)]


def lambda_seifert_pos(p, m, k):
    if not (0 < k < p and m - k > 0):
        raise DomainError("positive closed form needs 0<k<p, m>k")
    D = p * m - k * k
    if D <= 0:
        raise DomainError("positive closed form needs pm-k^2 > 0")
    return (Fraction(-k * (p - k) * (m - k), 24 * D) + Fraction(1, 4)
            - Fraction(m + p - k, 12 * D) - Fraction(p + m - k, 24))


def lambda_seifert_neg(p, m, k):
    # printed for m < 0; the algebra holds for every m <= 0 with k^2 > pm
    if not (0 < k < p and m <= 0):
        raise DomainError("negative closed form needs 0<k<p, m<=0")
    D = k * k - m * p
    if D <= 0:
        raise DomainError("zero denominator")
    return (Fraction(-k * (k - m) * (p - k), 24 * D) + Fraction(m + p - k, 12 * D)
            - Fraction(m + p - k, 24))


def lambda_M(p, m, k):
    """lambda of M(0,0;1/k,1/(p-k),1/(m-k))."""
    if m == k or p * m == k * k:
        raise DomainError("degenerate surgery")
    if m - k > 0 and p * m - k * k > 0:
        return lambda_seifert_pos(p, m, k)
    if m <= 0:
        return lambda_seifert_neg(p, m, k)
    return lambda_seifert(_simple_fibers(p, m, k))


def cw_sign_filter(p, m, k):
    """Signed q values allowed by the lambda monotonicity inequality."""
    qp = abs(p * m - k * k)
    if qp == 0:
        raise DomainError("q' = 0")
    lm = lambda_M(p, m, k)
    pos = p * m - k * k > 0
    out = set()
    for q in (qp, -qp):
        ly = lambda_Lq2_signed(q)
        if (ly >= lm) if pos else (lm >= ly):
            out.add(q)
    return frozenset(out)


def delta_lambda(p, m, k, q):
    if abs(q) != abs(p * m - k * k):
        raise DomainError("|q| must equal |pm-k^2|")
    return abs(q) * (lambda_Lq2_signed(q) - lambda_M(p, m, k))


def delta_lambda_unscaled(p, m, k, q):
    return delta_lambda(p, m, k, q) / abs(q)

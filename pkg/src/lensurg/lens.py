"""Lens spaces, Spin^c labels and correction terms."""
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .core import DomainError, Fraction, modinv

QUARTER = Fraction(1, 4)


@dataclass(frozen=True)
class LensSpace:
    """L(p,q) with 0 <= q < p; (1,0) is S^3.  sign=-1 is the reversed orientation."""
    p: int
    q: int
    sign: int = 1

    def __post_init__(self):
        if self.p < 1:
            raise DomainError(f"L({self.p},{self.q}): p must be positive")
        if self.p == 1:
            if self.q != 0:
                raise DomainError("S^3 is written L(1,0)")
        elif not (0 < self.q < self.p) or gcd(self.p, self.q) != 1:
            raise DomainError(f"L({self.p},{self.q}) needs 0<q<p, gcd 1")
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")

    @classmethod
    def from_signed(cls, a, b):
        """L(a,b) for arbitrary integers; a<0 means -L(|a|,b)."""
        if a == 0:
            raise DomainError("L(0,b) is S^2 x S^1, not a rational homology sphere")
        A = abs(a)
        return cls(A, b % A, 1 if a > 0 else -1)

    def reversed(self):
        return LensSpace(self.p, self.q, -self.sign)

    def canonical(self):
        """Orientation folded into q, then the smaller of q, q^-1 mod p."""
        p = self.p
        if p <= 2:
            return LensSpace(p, self.q)
        q = self.q if self.sign > 0 else p - self.q
        return LensSpace(p, min(q, modinv(q, p)))

    def compare(self, other):
        """+1 if orientation-preserving homeomorphic, -1 if only reversing, 0 otherwise."""
        a, b = self.canonical(), other.canonical()
        if a.p != b.p:
            return 0
        if a == b:
            return 1
        if a == b.reversed().canonical():
            return -1
        return 0

    def __str__(self):
        s = f"L({self.p},{self.q})"
        return s if self.sign > 0 else "-" + s


@dataclass(frozen=True)
class SpinC:
    space: LensSpace
    label: int

    def __post_init__(self):
        if not 0 <= self.label < self.space.p:
            raise DomainError(f"label {self.label} out of range for {self.space}")

    def d(self):
        return d_lens(self.space, self.label)

    def conjugate(self):
        return SpinC(self.space, conjugate(self.space, self.label))


def epsilon(a):
    return Fraction(0) if a % 2 else Fraction(-1, 2)


def _as_space(space):
    if isinstance(space, LensSpace):
        return space
    p, q = space
    return LensSpace(p, q % p if p > 1 else 0)


def _check_label(space, i):
    if not 0 <= i < space.p:
        raise DomainError(f"label {i} out of range for {space}")


def _step(p, q, i):
    return -QUARTER + Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q)


def d_trace(p, q, i):
    """Unrolled recursion; returns (value, [(p, q, i, term), ...])."""
    steps = []
    total = Fraction(0)
    sg = 1
    while p > 1:
        term = _step(p, q, i)
        steps.append((p, q, i, term))
        total += sg * term
        p, q, i = q, p % q, i % q
        sg = -sg
    return total, steps


def d_uncached(p, q, i):
    return d_trace(p, q, i)[0]


@lru_cache(maxsize=1 << 18)
def _d_cached(p, q, i):
    if p == 1:
        return Fraction(0)
    return _step(p, q, i) - _d_cached(q, p % q, i % q)


def d_lens(space, i):
    """Correction term d(L(p,q), i), negated for reversed orientation."""
    space = _as_space(space)
    _check_label(space, i)
    return space.sign * _d_cached(space.p, space.q, i)


@lru_cache(maxsize=1 << 16)
def d_Lq2_closed(q, t):
    if q < 3 or q % 2 == 0:
        raise DomainError(f"closed form needs odd q >= 3, got {q}")
    if not 0 <= t < q:
        raise DomainError(f"label {t} out of range for L({q},2)")
    return Fraction((2 * t - q - 1) ** 2, 8 * q) + epsilon(t)


def d_Lq2_signed(q, t):
    """d(L(q,2), t) where negative q is -L(|q|,2)."""
    v = d_Lq2_closed(abs(q), t)
    return v if q > 0 else -v


def conjugate(space, i):
    space = _as_space(space)
    _check_label(space, i)
    return (space.p + space.q - 1 - i) % space.p


def self_conjugate_labels(space):
    space = _as_space(space)
    return [i for i in range(space.p) if conjugate(space, i) == i]

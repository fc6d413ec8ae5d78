"""Seifert fibrations of surgeries on simple knots in L(p,1) and lens recognition."""
from dataclasses import dataclass

from .core import DomainError, Fraction, egcd
from .lens import LensSpace, self_conjugate_labels


@dataclass(frozen=True)
class SeifertFibration:
    fibers: tuple
    genus: int = 0

    def __post_init__(self):
        if self.genus != 0:
            raise DomainError("only genus 0 is supported")
        fib = tuple((int(a), int(b)) for a, b in self.fibers)
        if any(a == 0 for a, _ in fib):
            raise DomainError("alpha = 0 is not a Seifert fiber")
        object.__setattr__(self, "fibers", fib)

    @property
    def euler(self):
        return sum((Fraction(b, a) for a, b in self.fibers), Fraction(0))

    def __str__(self):
        parts = ", ".join(str(Fraction(b, a)) for a, b in self.fibers)
        return f"M(0,0; {parts})"


def surgery_on_simple_knot(p, k, m):
    if not 0 < k < p:
        raise DomainError(f"winding number k={k} outside (0,{p})")
    if m == k:
        raise DomainError("m = k gives the degenerate (0,1) fiber")
    return SeifertFibration(((k, 1), (p - k, 1), (m - k, 1)))


def move(f, i, j, n):
    """beta_i += n alpha_i, beta_j -= n alpha_j; euler is unchanged."""
    if i == j:
        raise DomainError("move needs two distinct fibers")
    fib = list(f.fibers)
    a, b = fib[i]
    fib[i] = (a, b + n * a)
    a, b = fib[j]
    fib[j] = (a, b - n * a)
    return SeifertFibration(tuple(fib))


def normalize(f):
    """alpha > 0, 0 <= beta < alpha on exceptional fibers; integer part kept as one (1, b) fiber."""
    whole = 0
    exc = []
    for a, b in f.fibers:
        if a < 0:
            a, b = -a, -b
        if a == 1:
            whole += b
        else:
            t, r = divmod(b, a)
            whole += t
            exc.append((a, r))
    exc.sort()
    return SeifertFibration(tuple(exc) + ((1, whole),))


def lens_parameters(f):
    """Signed (a, b) with M = L(a, b) (a<0 meaning -L(|a|,b)), or None if 3+ exceptional fibers."""
    whole = 0
    exc = []
    for a, b in f.fibers:
        if a < 0:
            a, b = -a, -b
        if a == 1:
            whole += b
        else:
            exc.append((a, b))
    if len(exc) > 2:
        return None
    exc += [(1, 0)] * (2 - len(exc))
    (a1, b1), (a2, b2) = exc
    b1 += whole * a1
    a = a1 * b2 + a2 * b1
    # b1*y - a1*x = 1
    g, y, x = egcd(b1, a1)
    x = -x
    return a, b2 * y + a2 * x


def to_lens(f, canonical=True):
    """Lens space of f, or None when three exceptional fibers remain."""
    par = lens_parameters(f)
    if par is None:
        return None
    a, b = par
    if a == 0:
        raise DomainError(f"{f} is S^2 x S^1 (degenerate)")
    L = LensSpace.from_signed(a, b)
    return L.canonical() if canonical else L


@dataclass(frozen=True)
class LensRegime:
    """M as an explicitly labelled lens space with the meridian class +-j."""
    space: LensSpace
    j: int
    t_M: int
    family: str

    @property
    def pd_labels(self):
        n = self.space.p
        return frozenset({self.j % n, (-self.j) % n})


def lens_regime(p, m, k):
    """The lens regimes where M and PD[mu] are known: m-k = +-1 or k = 1."""
    if m - k == 1:
        a, b, j, fam = p * k + p - k * k, k + 1, k, "m-k=1"
    elif m - k == -1:
        a, b, j, fam = p * k - p - k * k, k - 1, k, "m-k=-1"
    elif k == 1:
        a, b, j, fam = p * m - 1, p, p, "k=1"
    else:
        return None
    if a == 0:
        return None
    space = LensSpace.from_signed(a, b)
    fixed = self_conjugate_labels(space)
    if len(fixed) != 1:
        return None
    return LensRegime(space, j % space.p, fixed[0], fam)


def pd_mu_class(p, k, m):
    reg = lens_regime(p, m, k)
    if reg is None:
        raise DomainError(f"unknown PD[mu] for (p,m,k)=({p},{m},{k})")
    return reg.pd_labels


CONSTRUCTIONS = ((2, 1), (-2, 1), (2, 3))


def verify_constructions(p):
    """[(m, k, fibration, lens space)] for the three explicit families; (2,3) needs p > 3."""
    if p < 3 or p % 2 == 0:
        raise DomainError("p must be odd and > 1")
    out = []
    for m, k in CONSTRUCTIONS:
        if k >= p or (m, k) == (2, 3) and p <= 3:
            continue
        f = surgery_on_simple_knot(p, k, m)
        out.append((m, k, f, to_lens(f)))
    return out


def construction_target(p, m, k):
    """Signed q of the explicit construction for (m,k), or None."""
    return {(2, 1): 2 * p - 1, (-2, 1): 2 * p + 1, (2, 3): 2 * p - 9}.get((m, k))

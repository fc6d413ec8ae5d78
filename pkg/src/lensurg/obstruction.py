"""Accept or refute a candidate surgery L(p,1) -> L(q,2) with slope m*mu + lambda, winding number k."""
from dataclasses import dataclass, field
from functools import lru_cache

from . import casson, plumbing, seifert
from .core import DomainError, Fraction, fmt, gcd3, is_nonneg_integer, sign
from .lens import d_Lq2_signed, d_lens, epsilon

REFUTED = "REFUTED"
SURVIVES = "SURVIVES"
CONSTRUCTED = "CONSTRUCTED"
UNKNOWN_CASE_4 = "UNKNOWN-CASE-4"
UNDECIDED = "UNDECIDED"

# pairs that no known argument excludes or constructs
EXCEPTIONAL_PAIRS = frozenset({
    (3, -11), (3, 31), (5, 19), (5, -19), (7, -13), (7, -19), (7, 25), (7, 39), (7, -45),
    (9, -11), (9, -17), (9, -27), (9, -41), (11, -13), (11, -29), (13, -9), (13, -17),
    (13, -25), (17, -25), (15, -11), (21, -17), (23, -19), (25, -51), (31, -43),
})


def classification_cases(p, q):
    """Which of the five allowed families contain (p, q)."""
    out = []
    if q == 2 * p - 1:
        out.append(1)
    if q == 2 * p + 1:
        out.append(2)
    if q == 2 * p - 9:
        out.append(3)
    if any(abs(q) == abs(p - k * k) for k in range(1, p // 2 + 1)):
        out.append(4)
    if (p, q) in EXCEPTIONAL_PAIRS:
        out.append(5)
    return out


@dataclass(frozen=True)
class Options:
    delta_lambda: bool = True
    lspace_all_m: bool = False   # apply the L-space lemma also for m < 0
    dm_source: str = "exact"     # "exact" plumbing maximization or "closed" forms
    s_max: int = 3               # orbit length used where M is not a lens space


@dataclass(frozen=True)
class SurgeryCandidate:
    p: int
    q: int
    m: int
    k: int

    def __post_init__(self):
        p, q, m, k = self.p, self.q, self.m, self.k
        if p < 3 or p % 2 == 0:
            raise DomainError("p must be odd and > 1")
        if not 1 <= k <= p // 2:
            raise DomainError(f"k={k} outside [1, p/2]")
        if abs(q) != abs(p * m - k * k):
            raise DomainError(f"|q|={abs(q)} but |pm-k^2|={abs(p * m - k * k)}")

    @property
    def qprime(self):
        return abs(self.p * self.m - self.k * self.k)

    @property
    def framing(self):
        return sign(self.p * self.m - self.k * self.k)


@dataclass
class FilterResult:
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)


@dataclass
class Violation:
    kind: str      # integrality | corollary | step
    s: int
    other: int = -1

    def describe(self, N):
        a = fmt_n(2 * N[self.s])
        if self.kind == "integrality":
            return f"integrality: 2N{self.s}={a}"
        b = fmt_n(2 * N[self.other])
        if self.kind == "corollary":
            return f"corollary: 2N{self.s}={a} but 2N{self.other}={b}"
        return f"step: 2N{self.s}={a} 2N{self.other}={b}"


@dataclass
class Branch:
    j: int
    t_Y: list
    t_M: list
    d_M: list
    d_Y: list
    N: list
    cyclic: bool
    violations: list

    @property
    def passed(self):
        return not self.violations

    def head(self, n=4):
        return self.N[:n]

    def reason(self):
        if not self.violations:
            return f"j={self.j}"
        return f"j={self.j}; " + self.violations[0].describe(self.N)


@dataclass
class ObstructionReport:
    candidate: SurgeryCandidate
    filters: list
    branches: list
    verdict: str
    reason: str
    source: str = ""            # where d(M) came from
    closed_form_mismatch: list = field(default_factory=list)

    @property
    def first_failure(self):
        return next((f for f in self.filters if not f.passed), None)

    def to_dict(self):
        c = self.candidate
        return {
            "p": c.p, "q": c.q, "m": c.m, "k": c.k,
            "qprime": c.qprime, "framing": c.framing,
            "verdict": self.verdict, "reason": self.reason, "source": self.source,
            "filters": [{"name": f.name, "passed": f.passed, "detail": f.detail} for f in self.filters],
            "branches": [{
                "j": b.j, "passed": b.passed,
                "N": [fmt(x) for x in b.N],
                "violations": [v.describe(b.N) for v in b.violations],
            } for b in self.branches],
            "closed_form_mismatch": [[s, fmt(a), fmt(b)] for s, a, b in self.closed_form_mismatch],
        }


def fmt_n(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else fmt(x)


# filters

def homology_filter(p, m, k):
    """(qprime, passed, detail): cyclic H_1 and both orders odd."""
    qp = abs(p * m - k * k)
    if qp == 0:
        return qp, False, "pm = k^2: H_1 infinite"
    g = gcd3(p, k, m)
    if g != 1:
        return qp, False, f"gcd(p,k,m)={g}: H_1 not cyclic"
    if (m - k) % 2 == 0:
        return qp, False, "m,k same parity: |q| even"
    return qp, True, ""


def lspace_filter(p, m, k):
    if m - k > -3:
        return True
    return m == 1 or (m <= 0 and 3 * k >= p + 1)


def h_step(qprime, t_s, j, q_signed=None):
    q = qprime if q_signed is None else q_signed
    t1 = (t_s + j) % qprime
    return t1, d_Lq2_signed(q, t1) - d_Lq2_signed(q, t_s)


def formula_A(p, qprime, t0, t1, s):
    """epsilon(t1) - epsilon(t0) + (t1-t0)(t1+t0-q'-1)/(2q') - 1 + (2s+1)p/q'."""
    return (epsilon(t1) - epsilon(t0) + Fraction((t1 - t0) * (t1 + t0 - qprime - 1), 2 * qprime)
            - 1 + Fraction((2 * s + 1) * p, qprime))


def constraint_check(N, cyclic=False):
    """Violations of integrality, the N>=3 rigidity, and the step rule, in that order."""
    out = [Violation("integrality", s) for s, x in enumerate(N) if not is_nonneg_integer(x)]
    if out:
        return out
    n = len(N)
    big = next((s for s, x in enumerate(N) if x >= 3), None)
    if big is not None:
        other = next((s for s, x in enumerate(N) if x != N[big]), None)
        if other is not None:
            out.append(Violation("corollary", big, other))
    pairs = range(n) if cyclic and n > 1 else range(n - 1)
    for s in pairs:
        t = (s + 1) % n
        a, b = N[s], N[t]
        if (a >= 2 and b not in (a, a - 1)) or (b >= 2 and a not in (b, b - 1)):
            out.append(Violation("step", s, t))
    return out


# d(M) data

@dataclass(frozen=True)
class MData:
    kind: str          # lens | plumbing
    length: int        # number of s values available
    cyclic: bool
    values: tuple      # d(M, t_M + s PD)
    labels: tuple      # labels in M (lens) or s (plumbing)
    closed: tuple = ()


@lru_cache(maxsize=4096)
def m_data(p, m, k, dm_source="exact", s_max=3):
    reg = seifert.lens_regime(p, m, k)
    if reg is not None:
        n = reg.space.p
        labels = tuple((reg.t_M + s * reg.j) % n for s in range(n))
        vals = tuple(d_lens(reg.space, t) for t in labels)
        return MData("lens:" + reg.family, n, True, vals, labels)
    fr = sign(p * m - k * k)
    if plumbing.in_regime(p, m, k, fr):
        f = plumbing.intersection_form(p, m, k, fr)
        rng = range(s_max + 1)
        exact = tuple(plumbing.d_shift(f, s) for s in rng)
        closed = tuple(plumbing.d_closed_form(p, m, k, s, fr) if s <= 3 else None for s in rng)
        vals = exact if dm_source == "exact" else closed
        if any(v is None for v in vals):
            raise DomainError("closed forms stop at s = 3")
        return MData("plumbing", len(vals), False, vals, tuple(rng), closed)
    return None


def n_sequence(c, j, opts=Options(), md=None):
    md = md or m_data(c.p, c.m, c.k, opts.dm_source, opts.s_max)
    if md is None:
        raise DomainError("insufficient data: d(M) unknown in this regime")
    qp = c.qprime
    t0 = (qp + 1) // 2
    tY = [(t0 + s * j) % qp for s in range(md.length)]
    dY = [d_Lq2_signed(c.q, t) for t in tY]
    fr = c.framing
    N = [fr * (dm - dy) / 2 for dm, dy in zip(md.values, dY)]
    return Branch(j, tY, list(md.labels), list(md.values), dY, N, md.cyclic,
                  constraint_check(N, md.cyclic))


def check_candidate(p, q, m, k, opts=Options()):
    c = SurgeryCandidate(p, q, m, k)
    filters = []

    qp, ok, why = homology_filter(p, m, k)
    filters.append(FilterResult("homology", ok, why))
    if not ok:
        return ObstructionReport(c, filters, [], REFUTED, "homology: " + why)

    built = seifert.construction_target(p, m, k) == q
    if built:
        f = seifert.surgery_on_simple_knot(p, k, m)
        L = seifert.to_lens(f)
        filters.append(FilterResult("construction", True, f"{f} = {L}"))

    if m - k <= -3 and (m >= 0 or opts.lspace_all_m):
        ok = lspace_filter(p, m, k)
        filters.append(FilterResult("lspace", ok, "" if ok else "M not an L-space (m-k<=-3)"))

    lam_m = casson.lambda_M(p, m, k)
    lam_y = casson.lambda_Lq2_signed(q)
    allowed = casson.cw_sign_filter(p, m, k)
    ok = q in allowed
    filters.append(FilterResult("casson-walker", ok,
                                f"lambda(M)={fmt(lam_m)} lambda(Y)={fmt(lam_y)}",
                                {"lambda_M": lam_m, "lambda_Y": lam_y}))

    dl = casson.delta_lambda(p, m, k, q)
    ok = is_nonneg_integer(c.framing * dl)
    filters.append(FilterResult("delta-lambda", ok or not opts.delta_lambda,
                                f"|q|*dlambda={fmt(dl)}" + ("" if opts.delta_lambda else " (off)"),
                                {"delta_lambda": dl}))

    md = m_data(p, m, k, opts.dm_source, opts.s_max)
    branches = []
    mismatch = []
    source = "none"
    if md is not None:
        source = md.kind
        if md.closed:
            mismatch = [(s, a, b) for s, (a, b) in enumerate(zip(md.values, md.closed)) if a != b]
        branches = [n_sequence(c, j, opts, md) for j in range(1, qp, 2)]
        passing = [b for b in branches if b.passed]
        detail = f"{len(passing)} of {len(branches)} branches pass"
        filters.append(FilterResult("surgery-formula", bool(passing), detail))

    fail = next((f for f in filters if not f.passed), None)
    if fail is not None:
        reason = f"{fail.name}: {fail.detail}"
        if fail.name == "surgery-formula":
            reason = "surgery-formula: every branch violates; e.g. " + _witness(branches)
        verdict = REFUTED
    elif built:
        verdict, reason = CONSTRUCTED, filters[1].detail
    elif md is None:
        verdict, reason = UNDECIDED, "insufficient data: d(M) unknown"
    else:
        verdict, reason = SURVIVES, ""
    if verdict in (SURVIVES, UNDECIDED) and m == 1:
        verdict = UNKNOWN_CASE_4
        reason = reason or "|q|=|p-k^2|"
    return ObstructionReport(c, filters, branches, verdict, reason, source, mismatch)


def witness_branch(branches):
    """The refuted branch that stays integral longest (smallest j on ties)."""
    def depth(b):
        bad = [v.s for v in b.violations if v.kind == "integrality"]
        return min(bad) if bad else len(b.N) + 1
    return max(branches, key=lambda b: (depth(b), -b.j))


def _witness(branches):
    return witness_branch(branches).reason()


def candidates(p_max, q_bound, min_q=8):
    """All (p,q,m,k) with odd p <= p_max, 1 <= k <= p/2, min_q <= |q| = |pm-k^2| <= q_bound."""
    out = []
    for p in range(3, p_max + 1, 2):
        for k in range(1, p // 2 + 1):
            lo = -((q_bound - k * k) // p)
            hi = (k * k + q_bound) // p
            for m in range(lo, hi + 1):
                qp = abs(p * m - k * k)
                if m == k or not min_q <= qp <= q_bound:
                    continue
                for q in (qp, -qp):
                    out.append((p, q, m, k))
    return sorted(out)


def enumerate_reports(p_max, q_bound, opts=Options(), min_q=8, workers=1):
    cands = candidates(p_max, q_bound, min_q)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_check_tuple, cands, [opts] * len(cands), chunksize=16))
    return [check_candidate(*t, opts) for t in cands]


def _check_tuple(t, opts):
    return check_candidate(*t, opts)


def surviving_pairs(reports):
    keep = (SURVIVES, CONSTRUCTED, UNKNOWN_CASE_4, UNDECIDED)
    out = {}
    for r in reports:
        if r.verdict in keep:
            out.setdefault((r.candidate.p, r.candidate.q), []).append(r)
    return out

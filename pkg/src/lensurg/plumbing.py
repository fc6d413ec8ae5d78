"""Negative-definite star plumbings of the two surgery families and their d-invariants.

d(Y, t) = max over characteristic K in the class t of (K^T Q^-1 K + n)/4.
Writing z = Q^-1 K / 2 the class becomes a translate y + Z^n and the target is
z^T Q z + n/4, a closest-vector problem on a tree that a max-plus DP solves exactly.
"""
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import _kernels
from .core import DomainError, Fraction

POS, NEG = 1, -1


def _framing(fr):
    if fr in (1, "pos", "+", "positive"):
        return POS
    if fr in (-1, "neg", "-", "negative"):
        return NEG
    raise DomainError(f"framing must be pos or neg, got {fr!r}")


# exact integer linear algebra

def det_bareiss(A):
    M = [list(r) for r in A]
    n = len(M)
    sg, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sg = -sg
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sg * M[n - 1][n - 1] if n else 1


def inverse(A):
    n = len(A)
    M = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise DomainError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [r[n:] for r in M]


def adjugate(A):
    """Integer adjugate via fraction-free Gauss-Jordan on [A | I]."""
    n = len(A)
    M = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    prev = 1
    for k in range(n):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k]), None)
            if piv is None:
                raise DomainError("singular matrix")
            M[k], M[piv] = M[piv], M[k]
        pk = M[k][k]
        for i in range(n):
            if i != k:
                a = M[i][k]
                M[i] = [(pk * x - a * y) // prev for x, y in zip(M[i], M[k])]
        prev = pk
    # left block is now prev*I and the right block is prev*A^-1
    det = det_bareiss(A)
    sg = 1 if det == prev else -1
    return [[sg * x for x in r[n:]] for r in M]


def smith_normal_form(A):
    """(S, U, V) with U A V = diag(S), U and V unimodular, S_i | S_{i+1}, S_i >= 0."""
    A = [list(r) for r in A]
    m, n = len(A), len(A[0])
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                S = [A[i][i] for i in range(min(m, n))]
                return S, U, V
            i, j = best
            swap_rows(A, t, i)
            swap_rows(U, t, i)
            swap_cols(A, t, j)
            swap_cols(V, t, j)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                qt = A[i][t] // piv
                if qt:
                    A[i] = [a - qt * b for a, b in zip(A[i], A[t])]
                    U[i] = [a - qt * b for a, b in zip(U[i], U[t])]
                if A[i][t]:
                    clean = False
            for j in range(t + 1, n):
                qt = A[t][j] // piv
                if qt:
                    for r in A:
                        r[j] -= qt * r[t]
                    for r in V:
                        r[j] -= qt * r[t]
                if A[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return [A[i][i] for i in range(min(m, n))], U, V


@dataclass(frozen=True)
class PlumbingForm:
    Q: tuple
    p: int
    m: int
    k: int
    framing: int
    blocks: tuple  # (start, length) per chain; the hub is the last index
    det: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "det", det_bareiss(self.Q))

    @property
    def n(self):
        return len(self.Q)

    @property
    def hub(self):
        return self.n - 1

    @property
    def order(self):
        return abs(self.det)

    def array(self):
        return np.array(self.Q, dtype=np.int64)

    def characteristic_base(self):
        return [self.Q[i][i] % 2 for i in range(self.n)]

    def is_characteristic(self, K):
        return len(K) == self.n and all((K[i] - self.Q[i][i]) % 2 == 0 for i in range(self.n))


def _star(chains, hub):
    """Chains of weights, last vertex of each adjacent to the hub."""
    n = sum(len(c) for c in chains) + 1
    Q = [[0] * n for _ in range(n)]
    pos = 0
    blocks = []
    for c in chains:
        for i, wt in enumerate(c):
            Q[pos + i][pos + i] = wt
            if i + 1 < len(c):
                Q[pos + i][pos + i + 1] = Q[pos + i + 1][pos + i] = 1
        if c:
            e = pos + len(c) - 1
            Q[e][n - 1] = Q[n - 1][e] = 1
        blocks.append((pos, len(c)))
        pos += len(c)
    Q[n - 1][n - 1] = hub
    return tuple(tuple(r) for r in Q), tuple(blocks)


def in_regime(p, m, k, framing):
    fr = _framing(framing)
    if fr == POS:
        return m - k >= 3 and k >= 2 and 0 < k < p
    return k - m >= 3 and m < 0 and k >= 2 and 0 < k < p


def intersection_form(p, m, k, framing):
    fr = _framing(framing)
    if not in_regime(p, m, k, fr):
        raise DomainError(f"(p,m,k)=({p},{m},{k}) outside the {'positive' if fr > 0 else 'negative'} plumbing regime")
    if fr == POS:
        chains = [[-2] * (m - k - 1), [-2] * (p - k - 1), [-2] * (k - 1)]
        Q, blocks = _star(chains, -3)
    else:
        chains = [[-2] * (k - 1), [-2] * (p - k - 1), [m - k]]
        Q, blocks = _star(chains, -2)
    return PlumbingForm(Q, p, m, k, fr, blocks)


# Spin^c classes: Char(Q) / 2QZ^n  <->  Z^n / QZ^n via K = c0 + 2v

@dataclass(frozen=True)
class CosetData:
    S: tuple
    U: tuple
    Uinv: tuple


_coset_cache = {}


def coset_data(f):
    got = _coset_cache.get(f.Q)
    if got is None:
        S, U, _ = smith_normal_form(f.Q)
        Uinv = [[int(x) for x in r] for r in inverse(U)]
        got = CosetData(tuple(S), tuple(map(tuple, U)), tuple(map(tuple, Uinv)))
        _coset_cache[f.Q] = got
    return got


def coset_key(f, K):
    """Canonical coordinates of the class of K in Z/S_1 + ... + Z/S_n (trivial factors dropped)."""
    if not f.is_characteristic(K):
        raise DomainError("vector is not characteristic")
    cd = coset_data(f)
    c0 = f.characteristic_base()
    v = [(K[i] - c0[i]) // 2 for i in range(f.n)]
    out = []
    for row, s in zip(cd.U, cd.S):
        if s != 1:
            x = sum(a * b for a, b in zip(row, v))
            out.append(x % s if s else x)
    return tuple(out)


def _solve_y(f, K):
    """Scaled centre Y = L*Q^-1 K/2 with L = 2|det|; returns (Y, L, adj)."""
    adj = _adjugate(f)
    D = f.det
    L = 2 * abs(D)
    sg = 1 if D > 0 else -1
    Y = [sg * sum(adj[i][j] * K[j] for j in range(f.n)) for i in range(f.n)]
    return Y, L, adj


_adj_cache = {}


def _adjugate(f):
    got = _adj_cache.get(f.Q)
    if got is None:
        got = tuple(map(tuple, adjugate(f.Q)))
        _adj_cache[f.Q] = got
    return got


def _centre(Y, L):
    # representative of Y mod L in (-L/2, L/2]
    r = Y % L
    return r - L if 2 * r > L else r


def reduce_representative(f, K):
    """Same class, with z = Q^-1 K/2 moved into (-1/2, 1/2]^n."""
    Y, L, _ = _solve_y(f, K)
    Z = [_centre(y, L) for y in Y]
    # K = 2 Q z = 2 Q Z / L
    return tuple(sum(f.Q[i][j] * Z[j] for j in range(f.n)) * 2 // L for i in range(f.n))


def spin_c_cosets(f):
    """One reduced characteristic representative per class; exactly |det Q| of them."""
    cd = coset_data(f)
    c0 = f.characteristic_base()
    idx = [i for i, s in enumerate(cd.S) if s != 1]
    if any(cd.S[i] == 0 for i in idx):
        raise DomainError("form is degenerate")
    reps = []
    ranges = [range(cd.S[i]) for i in idx]

    def rec(pos, a):
        if pos == len(idx):
            vec = [0] * f.n
            for i, ai in zip(idx, a):
                vec[i] = ai
            v = [sum(cd.Uinv[r][c] * vec[c] for c in range(f.n)) for r in range(f.n)]
            reps.append(reduce_representative(f, [c0[i] + 2 * v[i] for i in range(f.n)]))
            return
        for x in ranges[pos]:
            rec(pos + 1, a + [x])

    rec(0, [])
    return reps


# exact maximization

def _qform(Q, Z):
    n = len(Z)
    return sum(Q[i][j] * Z[i] * Z[j] for i in range(n) for j in range(n) if Q[i][j])


def _descend(Q, Z, L, sweeps=4):
    """Greedy coordinate moves (each by a multiple of L) that increase Z^T Q Z."""
    n = len(Z)
    nbr = [[j for j in range(n) if j != i and Q[i][j]] for i in range(n)]
    for _ in range(sweeps):
        moved = False
        for i in range(n):
            a = -Q[i][i]
            lin = sum(Q[i][j] * Z[j] for j in nbr[i])
            # maximize -a Z_i^2 + 2 lin Z_i over Z_i in Z[i] + L*Z; peak at lin/a
            t = Fraction(lin, a)
            kx = round((t - Z[i]) / L)
            if kx:
                new = Z[i] + kx * L
                if -a * new * new + 2 * lin * new > -a * Z[i] * Z[i] + 2 * lin * Z[i]:
                    Z[i] = new
                    moved = True
        if not moved:
            break
    return Z


def _tree(f):
    n = f.n
    parent = [-1] * n
    seen = [False] * n
    root = f.hub
    seen[root] = True
    bfs = [root]
    for v in bfs:
        for u in range(n):
            if u != v and f.Q[v][u] and not seen[u]:
                seen[u] = True
                parent[u] = v
                bfs.append(u)
    if len(bfs) != n:
        raise DomainError("plumbing graph is not connected")
    edges = sum(1 for i in range(n) for j in range(i + 1, n) if f.Q[i][j])
    if edges != n - 1:
        raise DomainError("plumbing graph is not a tree")
    return bfs[::-1], parent


@dataclass(frozen=True)
class Maximum:
    value: Fraction
    K: tuple
    candidates: int


@dataclass
class DPProblem:
    L: int
    order: list
    parent: list
    arrays: tuple   # (order, parent, diag, w, cand, ncand) for the kernel
    safe: bool      # int64 arithmetic cannot overflow


def dp_problem(f, K0):
    """Candidate grid for the tree DP over the class of K0."""
    if not f.is_characteristic(K0):
        raise DomainError("representative is not characteristic")
    Y, L, adj = _solve_y(f, K0)
    n = f.n
    D = f.det
    Z = _descend(f.Q, [_centre(y, L) for y in Y], L)
    W = -_qform(f.Q, Z)  # L^2 * U, U an upper bound for -f at the optimum
    # |z_i|^2 <= U * ((-Q)^-1)_ii  ->  Z_i^2 <= W * (-adj_ii / D)
    cands = []
    for i in range(n):
        c = Fraction(-adj[i][i], D)
        zmax = isqrt(int(W * c))
        r = Y[i] % L
        lo = -zmax + ((r + zmax) % L)
        cands.append(list(range(lo, zmax + 1, L)) if lo <= zmax else [])
    if any(not c for c in cands):
        raise AssertionError("empty candidate set; bound computation is broken")
    order, parent = _tree(f)
    C = max(len(c) for c in cands)
    big = max(abs(x) for c in cands for x in c)
    weight = max(abs(f.Q[i][j]) for i in range(n) for j in range(n))
    safe = (big * big) * weight * 4 * n < (1 << 62)
    dtype = np.int64 if safe else object
    cand = np.zeros((n, C), dtype=dtype)
    ncand = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(cands):
        cand[i, :len(c)] = c
        ncand[i] = len(c)
    diag = np.array([f.Q[i][i] for i in range(n)], dtype=np.int64)
    w = np.array([f.Q[i][parent[i]] if parent[i] >= 0 else 0 for i in range(n)], dtype=np.int64)
    arrays = (np.array(order, dtype=np.int64), np.array(parent, dtype=np.int64), diag, w, cand, ncand)
    return DPProblem(L, order, parent, arrays, safe)


def maximize(f, K0, backend=None):
    """Exact max of (K^T Q^-1 K + n)/4 over the class of K0, with a maximizer."""
    prob = dp_problem(f, K0)
    n, L, order, parent = f.n, prob.L, prob.order, prob.parent
    cand, ncand = prob.arrays[4], prob.arrays[5]
    force = backend if prob.safe else "numpy"
    best, bidx, arg = _kernels.tree_dp(*prob.arrays, force=force)
    # walk back down from the root
    choice = [0] * n
    choice[order[-1]] = int(bidx)
    for v in reversed(order[:-1]):
        choice[v] = int(arg[v, choice[parent[v]]])
    Zopt = [int(cand[i, choice[i]]) for i in range(n)]
    val = int(best)
    assert val == _qform(f.Q, Zopt)
    K = tuple(sum(f.Q[i][j] * Zopt[j] for j in range(n)) * 2 // L for i in range(n))
    return Maximum(Fraction(val, L * L) + Fraction(n, 4), K, int(ncand.sum()))


def d_plumbing(f, K, backend=None):
    return maximize(f, K, backend).value


def box_problem(f, widen=0):
    """Kernel inputs for the box Q_ii - 2w <= K_i <= -Q_ii + 2w (cyclic discriminant group only)."""
    cd = coset_data(f)
    nontriv = [i for i, s in enumerate(cd.S) if s != 1]
    if len(nontriv) != 1:
        raise DomainError("box oracle needs a cyclic discriminant group")
    N = cd.S[nontriv[0]]
    kw = np.array(cd.U[nontriv[0]], dtype=np.int64) % N
    diag = [f.Q[i][i] for i in range(f.n)]
    lo = np.array([d - 2 * widen for d in diag], dtype=np.int64)
    cnt = np.array([-d + 1 + 2 * widen for d in diag], dtype=np.int64)
    c0 = np.array(f.characteristic_base(), dtype=np.int64)
    adj = np.array(_adjugate(f), dtype=np.int64)
    sg = 1 if f.det > 0 else -1
    return lo, cnt, c0, adj, kw, N, sg


def box_table(f, widen=0, backend=None):
    """Brute force over the box: best d per class key (None if unseen).  Small n only."""
    prob = box_problem(f, widen)
    N = prob[5]
    best = _kernels.box_max(*prob, force=backend)
    out = {}
    for key in range(N):
        v = int(best[key])
        out[(key,)] = None if v == _kernels.NEG else Fraction(v, 4 * abs(f.det)) + Fraction(f.n, 4)
    return out


def d_box(f, K, widen=0, backend=None):
    if not f.is_characteristic(K):
        raise DomainError("representative is not characteristic")
    return box_table(f, widen, backend)[coset_key(f, list(K))]


# the labelled classes t_M + s*PD[mu]

def _at(f, block, pos1):
    start, length = f.blocks[block]
    if not 1 <= pos1 <= length:
        raise DomainError("vector position outside its block")
    return start + pos1 - 1


def tm_vector(f):
    """Characteristic vector of the self-conjugate class t_M."""
    p, m, k = f.p, f.m, f.k
    K = [0] * f.n
    if f.framing == POS:
        K[f.hub] = -1
        if k % 2 == 0:
            K[_at(f, 2, k // 2)] = 2
        else:
            K[_at(f, 1, (p - k) // 2)] = 2
    else:
        if k % 2 == 0:
            K[_at(f, 0, k // 2)] = -2
        else:
            K[_at(f, 1, (p - k) // 2)] = -2
        K[f.blocks[2][0]] = k - m
    return tuple(K)


def pd_vector(f):
    """Image of PD[mu] (K changes by this vector per step)."""
    u = [0] * f.n
    if f.framing == POS:
        u[f.blocks[0][0]] = 2
    else:
        u[f.blocks[2][0]] = 2
    return tuple(u)


def shifted_vector(f, s):
    v0, u = tm_vector(f), pd_vector(f)
    return tuple(a + s * b for a, b in zip(v0, u))


def d_shift(f, s, backend=None):
    return d_plumbing(f, shifted_vector(f, s), backend)


def d_closed_form(p, m, k, s, framing):
    fr = _framing(framing)
    if not in_regime(p, m, k, fr):
        raise DomainError("outside plumbing regime")
    if not 0 <= s <= 3:
        raise DomainError("closed forms are only established for s = 0..3")
    tail = Fraction(s * s * p, p * m - k * k)
    if fr == POS:
        head = Fraction(m - 4 * s - 2, 4) if k % 2 else Fraction(p + m - 2 * k - 4 * s - 2, 4)
    else:
        head = Fraction(m + 4 * s, 4) if k % 2 else Fraction(p + m - 2 * k + 4 * s, 4)
    return head + tail


def g_sequence(p, m, k, s, framing):
    fr = _framing(framing)
    if not in_regime(p, m, k, fr):
        raise DomainError("outside plumbing regime")
    if not 0 <= s <= 2:
        raise DomainError("G_s is defined for s = 0..2")
    return Fraction(-fr) + Fraction((2 * s + 1) * p, p * m - k * k)

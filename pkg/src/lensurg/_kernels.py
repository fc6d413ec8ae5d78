"""Hot loops for the plumbing maximization: numba when available, numpy otherwise.

Set SURGERY_NO_NUMBA=1 to force the numpy path.
"""
import os

import numpy as np

NEG = np.iinfo(np.int64).min // 4

try:
    if os.environ.get("SURGERY_NO_NUMBA", "") not in ("", "0"):
        raise ImportError("disabled by SURGERY_NO_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend():
    return "numba" if HAVE_NUMBA else "numpy"


# tree max-plus DP
# order: vertices children-first, root last; parent[root] = -1
# w[v]: Q[v, parent[v]]; cand[v, :ncand[v]]: allowed scaled values of z_v
# returns best total and arg[v, c_parent] = best child index

def _tree_dp_numpy(order, parent, diag, w, cand, ncand):
    n = len(order)
    acc = [np.zeros(int(ncand[v]), dtype=cand.dtype) for v in range(n)]
    arg = np.zeros(cand.shape, dtype=np.int64)
    for v in order:
        zv = cand[v, :ncand[v]]
        tv = diag[v] * zv * zv + acc[v]
        par = parent[v]
        if par < 0:
            b = int(np.argmax(tv))
            return tv[b], b, arg
        zp = cand[par, :ncand[par]]
        tot = tv[None, :] + 2 * w[v] * zp[:, None] * zv[None, :]
        a = np.argmax(tot, axis=1)
        arg[v, :len(a)] = a
        acc[par] = acc[par] + tot[np.arange(len(a)), a]
    raise ValueError("order has no root")


def _tree_dp_loops(order, parent, diag, w, cand, ncand):
    n = order.shape[0]
    C = cand.shape[1]
    acc = np.zeros((n, C), dtype=np.int64)
    arg = np.zeros((n, C), dtype=np.int64)
    tv = np.zeros(C, dtype=np.int64)
    for idx in range(n):
        v = order[idx]
        nv = ncand[v]
        for c in range(nv):
            z = cand[v, c]
            tv[c] = diag[v] * z * z + acc[v, c]
        par = parent[v]
        if par < 0:
            b = 0
            for c in range(1, nv):
                if tv[c] > tv[b]:
                    b = c
            return tv[b], b, arg
        for cp in range(ncand[par]):
            zp2 = 2 * w[v] * cand[par, cp]
            best = NEG
            bi = 0
            for c in range(nv):
                val = tv[c] + zp2 * cand[v, c]
                if val > best:
                    best = val
                    bi = c
            arg[v, cp] = bi
            acc[par, cp] += best
    return NEG, 0, arg


# box brute force over characteristic vectors of a cyclic discriminant group
# lo/cnt: K_i runs over lo_i, lo_i+2, ..., lo_i+2(cnt_i-1)
# key(K) = sum(kw_i * (K_i - c0_i)/2) mod N; value = sgn * K^T adj K

def _box_numpy(lo, cnt, c0, adj, kw, N, sgn, chunk=1 << 16):
    best = np.full(N, NEG, dtype=np.int64)
    total = int(np.prod(cnt))
    radix = np.cumprod(np.concatenate(([1], cnt[:-1])))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // radix[None, :]) % cnt[None, :]
        K = lo[None, :] + 2 * digits
        key = (((K - c0[None, :]) // 2) @ kw) % N
        val = sgn * np.einsum("ij,jk,ik->i", K, adj, K)
        np.maximum.at(best, key, val)
    return best


def _box_loops(lo, cnt, c0, adj, kw, N, sgn):
    n = lo.shape[0]
    best = np.full(N, NEG, dtype=np.int64)
    K = lo.copy()
    dig = np.zeros(n, dtype=np.int64)
    while True:
        key = 0
        for i in range(n):
            key += kw[i] * ((K[i] - c0[i]) // 2)
        key %= N
        val = 0
        for i in range(n):
            s = 0
            for j in range(n):
                s += adj[i, j] * K[j]
            val += K[i] * s
        val *= sgn
        if val > best[key]:
            best[key] = val
        i = 0
        while i < n:
            dig[i] += 1
            K[i] += 2
            if dig[i] < cnt[i]:
                break
            dig[i] = 0
            K[i] = lo[i]
            i += 1
        if i == n:
            break
    return best


if HAVE_NUMBA:
    _tree_dp_jit = njit(cache=True)(_tree_dp_loops)
    _box_jit = njit(cache=True)(_box_loops)


def tree_dp(order, parent, diag, w, cand, ncand, force=None):
    use = force or backend()
    if use == "numba" and HAVE_NUMBA:
        return _tree_dp_jit(order, parent, diag, w, cand, ncand)
    return _tree_dp_numpy(order, parent, diag, w, cand, ncand)


def box_max(lo, cnt, c0, adj, kw, N, sgn, force=None):
    use = force or backend()
    if use == "numba" and HAVE_NUMBA:
        return _box_jit(lo, cnt, c0, adj, kw, N, sgn)
    return _box_numpy(lo, cnt, c0, adj, kw, N, sgn)

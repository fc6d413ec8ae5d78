"""Time the numba kernels against the numpy fallback on real plumbing inputs.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from lensurg import _kernels, plumbing as P

TREE_CASES = [(31, 40, 5, 1), (41, 52, 6, 1), (23, -2, 9, -1), (45, -3, 8, -1)]
BOX_CASES = [(7, 7, 2, 1), (9, -1, 3, -1), (11, -2, 3, -1)]


def timed(fn, repeat):
    fn()  # warm up (and compile)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_tree(repeat):
    for p, m, k, fr in TREE_CASES:
        f = P.intersection_form(p, m, k, fr)
        probs = [P.dp_problem(f, P.shifted_vector(f, s)) for s in range(4)]
        probs = [q for q in probs if q.safe]

        def run(backend):
            return [_kernels.tree_dp(*q.arrays, force=backend)[0] for q in probs]

        tn, a = timed(lambda: run("numpy"), repeat)
        tj, b = timed(lambda: run("numba"), repeat)
        assert a == b
        size = sum(int(q.arrays[5].sum()) for q in probs)
        yield "tree_dp", (p, m, k, fr), f"n={f.n} cand={size}", tn, tj


def bench_box(repeat):
    for p, m, k, fr in BOX_CASES:
        f = P.intersection_form(p, m, k, fr)
        prob = P.box_problem(f)
        tn, a = timed(lambda: _kernels.box_max(*prob, force="numpy"), repeat)
        tj, b = timed(lambda: _kernels.box_max(*prob, force="numba"), repeat)
        assert np.array_equal(a, b)
        yield "box_max", (p, m, k, fr), f"n={f.n} points={int(np.prod(prob[1]))}", tn, tj


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or SURGERY_NO_NUMBA set); both columns use numpy")
    print(f"{'kernel':8s} {'(p,m,k,framing)':18s} {'size':22s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for gen in (bench_tree(a.repeat), bench_box(a.repeat)):
        for name, case, size, tn, tj in gen:
            print(f"{name:8s} {str(case):18s} {size:22s} {tn:10.5f} {tj:10.5f} {tn / tj:8.1f}x")


if __name__ == "__main__":
    main()

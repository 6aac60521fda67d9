"""Time each kernel under the python and numba backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 2000] [--D 60] [--repeat 5]

Both backends must agree on every output; the script exits non-zero if not.
Numba compile time is excluded by a warm-up call.
"""
import argparse
import sys
import time

import numpy as np

from ndgcolor import kernels
from ndgcolor.decompose import alpha_split, round_robin_coloring
from ndgcolor.lab import gen_regular_kfree


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(g, k, av):
    ip, ix = g.indptr, g.indices
    col0 = np.asarray(round_robin_coloring(g.n, k), dtype=np.int64) - 1
    w = np.ones(ix.size, dtype=np.int64)
    target = np.ones(g.n, dtype=bool)
    seq = np.arange(g.n, dtype=np.int64)

    def descend(b):
        col = col0.copy()
        counts = kernels.color_counts(ip, ix, col, k, backend=b)
        moves = kernels.descend(ip, ix, col, av.alphas, counts, backend=b)
        return moves, col

    def counts(b):
        return kernels.color_counts(ip, ix, col0, k, backend=b)

    def peel(b):
        return kernels.peel(ip, ix, w, target, g.max_degree(), backend=b)

    def greedy(b):
        col = np.zeros(g.n, dtype=np.int64)
        return kernels.greedy(ip, ix, seq, g.max_degree() + 1, col, backend=b), col

    def distinct(b):
        return kernels.distinct_neighbor_colors(ip, ix, col0 + 1, backend=b)

    return {"descend": descend, "color_counts": counts, "peel": peel, "greedy": greedy, "distinct": distinct}


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--D", type=int, default=60)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)
    if kernels.JIT is None:
        print("numba unavailable; nothing to compare")
        return 1
    g = gen_regular_kfree(a.n, a.D, seed=a.seed)
    av = alpha_split(a.D, a.k)
    print(f"graph: n={g.n} m={g.m} D={a.D}, alphas={av.alphas}")
    print(f"{'kernel':<14}{'python (s)':>12}{'numba (s)':>12}{'speedup':>10}")
    ok = True
    for name, fn in cases(g, a.k, av).items():
        fn(kernels.JIT)  # compile
        tp, op = _time(lambda: fn(kernels.PY), a.repeat)
        tj, oj = _time(lambda: fn(kernels.JIT), a.repeat)
        agree = _same(op, oj)
        ok &= agree
        print(f"{name:<14}{tp:>12.5f}{tj:>12.5f}{tp / max(tj, 1e-9):>9.1f}x{'' if agree else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Inner loops shared by the solvers.

Every kernel works on a CSR adjacency (``indptr``, ``indices``; neighbour
lists sorted ascending) with 0-based int64 colour arrays.  Two backends
exist: ``PY`` runs the loops under CPython (vectorised with numpy where a
loop is not inherently sequential) and ``JIT`` is the same code compiled by
numba.  The module-level names dispatch to whichever backend
``_accel.NUMBA_ENABLED`` selects.
"""
from types import SimpleNamespace

import numpy as np

from . import _accel


def _descend_loop(indptr, indices, colors, alphas, counts, max_moves):
    # repeated ascending sweeps; per vertex the first strictly improving colour wins
    n = colors.shape[0]
    k = alphas.shape[0]
    moves = 0
    changed = True
    while changed:
        changed = False
        for v in range(n):
            i = colors[v]
            mi = counts[v, i]
            if mi == 0:
                continue
            for j in range(k):
                if j == i:
                    continue
                if counts[v, j] * alphas[i] < mi * alphas[j]:
                    for e in range(indptr[v], indptr[v + 1]):
                        u = indices[e]
                        counts[u, i] -= 1
                        counts[u, j] += 1
                    colors[v] = j
                    moves += 1
                    changed = True
                    break
            if max_moves >= 0 and moves >= max_moves:
                return moves
    return moves


def _counts_loop(indptr, indices, colors, k):
    n = colors.shape[0]
    out = np.zeros((n, k), dtype=np.int64)
    for v in range(n):
        for e in range(indptr[v], indptr[v + 1]):
            out[v, colors[indices[e]]] += 1
    return out


def _counts_numpy(indptr, indices, colors, k):
    n = colors.shape[0]
    out = np.zeros((n, k), dtype=np.int64)
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    np.add.at(out, (rows, colors[indices]), 1)
    return out


def _peel_loop(indptr, indices, weights, in_target, threshold):
    # FIFO deletion: initial candidates ascending, later ones in discovery order
    n = in_target.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for v in range(n):
        if in_target[v]:
            for e in range(indptr[v], indptr[v + 1]):
                if in_target[indices[e]]:
                    deg[v] += weights[e]
    alive = in_target.copy()
    queued = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    for v in range(n):
        if alive[v] and deg[v] < threshold:
            queue[tail] = v
            tail += 1
            queued[v] = True
    order = np.empty(n, dtype=np.int64)
    cnt = 0
    while head < tail:
        v = queue[head]
        head += 1
        alive[v] = False
        order[cnt] = v
        cnt += 1
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if alive[u]:
                deg[u] -= weights[e]
                if not queued[u] and deg[u] < threshold:
                    queue[tail] = u
                    tail += 1
                    queued[u] = True
    return order[:cnt], alive


def _greedy_loop(indptr, indices, seq, k, colors):
    # colors: 1-based, 0 = unassigned; pre-assigned entries are respected
    stamp = np.zeros(k + 2, dtype=np.int64)
    for t in range(seq.shape[0]):
        v = seq[t]
        for e in range(indptr[v], indptr[v + 1]):
            c = colors[indices[e]]
            if 0 < c <= k:
                stamp[c] = t + 1
        c = 1
        while c <= k and stamp[c] == t + 1:
            c += 1
        if c > k:
            return t
        colors[v] = c
    return -1


def _distinct_loop(indptr, indices, colors):
    n = colors.shape[0]
    top = 0
    for v in range(n):
        if colors[v] > top:
            top = colors[v]
    stamp = np.zeros(top + 2, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    for v in range(n):
        cnt = 0
        for e in range(indptr[v], indptr[v + 1]):
            c = colors[indices[e]]
            if stamp[c] != v + 1:
                stamp[c] = v + 1
                cnt += 1
        out[v] = cnt
    return out


def _distinct_numpy(indptr, indices, colors):
    n = colors.shape[0]
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    if rows.size == 0:
        return np.zeros(n, dtype=np.int64)
    pairs = np.unique(rows * (int(colors.max()) + 1) + colors[indices])
    return np.bincount(pairs // (int(colors.max()) + 1), minlength=n).astype(np.int64)


PY = SimpleNamespace(
    name="python",
    descend=_descend_loop,
    color_counts=_counts_numpy,
    peel=_peel_loop,
    greedy=_greedy_loop,
    distinct=_distinct_numpy,
)

if _accel.HAVE_NUMBA:
    JIT = SimpleNamespace(
        name="numba",
        descend=_accel.jit(_descend_loop),
        color_counts=_accel.jit(_counts_loop),
        peel=_accel.jit(_peel_loop),
        greedy=_accel.jit(_greedy_loop),
        distinct=_accel.jit(_distinct_loop),
    )
else:  # pragma: no cover
    JIT = None

ACTIVE = JIT if _accel.NUMBA_ENABLED else PY


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def descend(indptr, indices, colors, alphas, counts, max_moves=-1, backend=None):
    """Run improving single-vertex recolourings in place; returns the move count."""
    b = backend or ACTIVE
    return int(b.descend(indptr, indices, colors, _i64(alphas), counts, int(max_moves)))


def color_counts(indptr, indices, colors, k, backend=None):
    b = backend or ACTIVE
    return b.color_counts(indptr, indices, _i64(colors), int(k))


def peel(indptr, indices, weights, in_target, threshold, backend=None):
    b = backend or ACTIVE
    mask = np.ascontiguousarray(in_target, dtype=np.bool_)
    return b.peel(indptr, indices, _i64(weights), mask, int(threshold))


def greedy(indptr, indices, seq, k, colors, backend=None):
    b = backend or ACTIVE
    return int(b.greedy(indptr, indices, _i64(seq), int(k), colors))


def distinct_neighbor_colors(indptr, indices, colors, backend=None):
    b = backend or ACTIVE
    return b.distinct(indptr, indices, _i64(colors))

"""Greedy replay of peeling orders, constructive Brooks colouring, pivot extension."""
from __future__ import annotations

from typing import Mapping, Optional, Sequence, Union

import numpy as np

from . import kernels
from .errors import PreconditionError
from .graph import Graph, MultiGraph, bfs_order, connected_components


def greedy_color(g: Union[Graph, MultiGraph], order: Sequence[int], k: int, backend=None) -> tuple:
    """Smallest-free-colour greedy over ``order`` read back to front.

    ``order`` is a deletion order (e.g. ``DeletionCertificate.order``): the
    last deleted vertex is coloured first.  Multiplicities are ignored.
    """
    order = [int(v) for v in order]
    if sorted(order) != list(range(g.n)):
        raise PreconditionError("order must be a permutation of the vertices")
    colors = np.zeros(g.n, dtype=np.int64)
    seq = np.asarray(order[::-1], dtype=np.int64)
    bad = kernels.greedy(g.indptr, g.indices, seq, k, colors, backend=backend)
    if bad >= 0:
        raise PreconditionError(f"not k-degenerate order: no free colour for vertex {int(seq[bad])}")
    return tuple(colors.tolist())


def _articulation_point(g: Graph, comp) -> Optional[int]:
    """Smallest cut vertex of the connected vertex set ``comp`` (iterative lowpoint DFS)."""
    inside = set(comp)
    root = min(comp)
    disc = {root: 0}
    low = {root: 0}
    parent = {root: -1}
    cuts = set()
    root_children = 0
    timer = 1
    stack = [(root, iter(g.neighbors(root).tolist()))]
    while stack:
        u, it = stack[-1]
        advanced = False
        for w in it:
            if w not in inside:
                continue
            if w not in disc:
                disc[w] = low[w] = timer
                timer += 1
                parent[w] = u
                if u == root:
                    root_children += 1
                stack.append((w, iter(g.neighbors(w).tolist())))
                advanced = True
                break
            if w != parent[u]:
                low[u] = min(low[u], disc[w])
        if advanced:
            continue
        stack.pop()
        p = parent[u]
        if p >= 0:
            low[p] = min(low[p], low[u])
            if p != root and low[u] >= disc[p]:
                cuts.add(p)
    if root_children > 1:
        cuts.add(root)
    return min(cuts) if cuts else None


def _reachable_all(g: Graph, allowed: set) -> bool:
    if not allowed:
        return True
    return len(bfs_order(g, min(allowed), allowed)) == len(allowed)


def _fill(g, seq, k, colors, what):
    bad = kernels.greedy(g.indptr, g.indices, np.asarray(seq, dtype=np.int64), k, colors)
    if bad >= 0:
        raise PreconditionError(f"{what}: no free colour for vertex {seq[bad]}")


def _color_component(g: Graph, comp: tuple, delta: int, out: np.ndarray):
    if len(comp) == 1:
        if delta < 1:
            raise PreconditionError("complete graph: single vertex needs one colour")
        out[comp[0]] = 1
        return
    inside = set(comp)
    degs = {v: g.degree(v) for v in comp}
    low = [v for v in comp if degs[v] < delta]
    if low:
        order = bfs_order(g, low[0], inside)
        _fill(g, order[::-1], delta, out, "degenerate case")
        return
    if len(comp) == delta + 1:
        raise PreconditionError(f"complete graph K{delta + 1}")
    if delta == 2:
        # even cycle: colour by BFS parity
        order = bfs_order(g, comp[0], inside)
        dist = {comp[0]: 0}
        for u in order:
            for w in g.neighbors(u).tolist():
                if w not in dist:
                    dist[w] = dist[u] + 1
        if any(dist[u] % 2 == dist[w] % 2 for u in comp for w in g.neighbors(u).tolist()):
            raise PreconditionError("odd cycle needs 3 colours")
        for u in comp:
            out[u] = 1 + dist[u] % 2
        return
    cut = _articulation_point(g, comp)
    if cut is not None:
        lobes = connected_components_excluding(g, inside, cut)
        for lobe in lobes:
            local = np.zeros(g.n, dtype=np.int64)
            order = bfs_order(g, cut, set(lobe) | {cut})
            _fill(g, order[::-1], delta, local, "lobe")
            # permute the lobe's palette so the cut vertex gets colour 1
            cx = int(local[cut])
            for u in lobe:
                c = int(local[u])
                out[u] = 1 if c == cx else (cx if c == 1 else c)
        out[cut] = 1
        return
    adj = g.adjacency
    for v in comp:
        nb = sorted(adj[v])
        for a in range(len(nb)):
            for b in range(a + 1, len(nb)):
                x, y = nb[a], nb[b]
                if y in adj[x]:
                    continue
                rest = inside - {x, y}
                if not _reachable_all(g, rest):
                    continue
                out[x] = out[y] = 1
                order = bfs_order(g, v, rest)
                _fill(g, order[::-1], delta, out, "regular case")
                return
    raise PreconditionError("no Brooks pivot found (graph complete?)")


def connected_components_excluding(g: Graph, inside: set, removed: int) -> list:
    left = inside - {removed}
    comps = []
    while left:
        s = min(left)
        part = bfs_order(g, s, left)
        comps.append(sorted(part))
        left -= set(part)
    return comps


def brooks_color(g: Graph, delta: int) -> tuple:
    """Proper colouring with at most ``delta`` colours, built constructively.

    Each connected component is handled on its own.  A component that is
    ``K_{delta+1}``, or an odd cycle when ``delta == 2``, raises.
    """
    if g.max_degree() > delta:
        raise PreconditionError(f"degree exceeds delta={delta}")
    out = np.zeros(g.n, dtype=np.int64)
    for comp in connected_components(g):
        _color_component(g, comp, delta, out)
    return tuple(out.tolist())


def extend_coloring_pivot(f: Graph, s1, s2, v: int, pre_col: Union[Mapping[int, int], Sequence], k: int) -> tuple:
    """Extend a proper colouring of ``f[s1]`` to all of ``f`` with ``k`` colours.

    ``v`` is a pivot in ``s1`` adjacent to the rest of ``s1`` with fewer
    than ``k`` neighbours; ``f[s2 + v]`` must be connected.  The result
    agrees with ``pre_col`` on ``s1``.
    """
    s1, s2 = set(s1), set(s2)
    if s1 & s2 or (s1 | s2) != set(range(f.n)):
        raise PreconditionError("s1 and s2 must partition V")
    if v not in s1:
        raise PreconditionError("pivot not in s1")
    if f.degree(v) >= k:
        raise PreconditionError("pivot degree not below k")
    adj = f.adjacency
    if not (s1 - {v}) <= adj[v]:
        raise PreconditionError("pivot not adjacent to all of s1")
    for u in s2:
        if f.degree(u) > k:
            raise PreconditionError(f"s2 vertex {u} has degree above k")
    if len(bfs_order(f, v, s2 | {v})) != len(s2) + 1:
        raise PreconditionError("s2 plus pivot not connected")
    get = pre_col.get if isinstance(pre_col, Mapping) else (lambda x: pre_col[x])
    init = {}
    for u in s1:
        c = get(u)
        if c is None or not 1 <= int(c) <= k:
            raise PreconditionError(f"pre-colouring missing or out of range at {u}")
        init[u] = int(c)
    for u in s1:
        if any(w in s1 and init[w] == init[u] for w in adj[u]):
            raise PreconditionError("pre-colouring not proper on s1")

    colors = np.zeros(f.n, dtype=np.int64)
    for u in s1 - {v}:
        colors[u] = init[u]
    order = bfs_order(f, v, s2 | {v})
    _fill(f, order[:0:-1], k, colors, "extension")
    _fill(f, [v], k, colors, "pivot")
    new, old = int(colors[v]), init[v]
    if new != old:
        a, b = colors == new, colors == old
        colors[a], colors[b] = old, new
    return tuple(colors.tolist())

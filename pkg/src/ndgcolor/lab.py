"""Brute-force oracles and instance generators used by tests and the CLI."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .graph import Graph, clique_in_closed_neighborhood
from .lemma import LemmaInstance, check_preconditions


def definition_holds(n: int, edges, col, c: int, p: int) -> bool:
    """Plain re-statement of (c, p)-nondegeneracy over an edge list."""
    seen = [set() for _ in range(n)]
    deg = [0] * n
    for u, v in edges:
        if col[u] == col[v]:
            return False
        seen[u].add(col[v])
        seen[v].add(col[u])
        deg[u] += 1
        deg[v] += 1
    return all(deg[v] < p or len(seen[v]) >= c for v in range(n))


def brute_force_ndg_exists(g: Graph, D: int, c: int, p: int, budget: int = 10 ** 7) -> Optional[tuple]:
    """Exhaustive search for a proper (c, p)-nondegenerate ``D``-colouring.

    Vertex 0 is pinned to colour 1 (colour permutations preserve both
    properties).  Partial assignments with a monochromatic edge are cut, so
    only proper colourings reach the final check.  ``budget`` caps the number
    of search nodes.
    """
    n = g.n
    if n == 0:
        return ()
    if D < 1:
        return None
    edges = g.edges()
    earlier = [[u for u in g.neighbors(v).tolist() if u < v] for v in range(n)]
    col = [0] * n
    nodes = 0

    def rec(v):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"search exceeded {budget} nodes")
        if v == n:
            return definition_holds(n, edges, col, c, p)
        for x in ((1,) if v == 0 else range(1, D + 1)):
            if any(col[u] == x for u in earlier[v]):
                continue
            col[v] = x
            if rec(v + 1):
                return True
        col[v] = 0
        return False

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, n + 100))
    try:
        found = rec(0)
    finally:
        sys.setrecursionlimit(old)
    return tuple(col) if found else None


def gen_bipartite_counterexample(p: int, D: int, budget: int = 10 ** 6) -> Graph:
    """Ground set of ``(p-1)D+1`` vertices plus one vertex per ``p``-subset, joined to its members."""
    if p < 2 or D < 2:
        raise PreconditionError("need p >= 2 and D >= 2")
    m = (p - 1) * D + 1
    count = math.comb(m, p)
    if count > budget:
        raise BudgetExceeded(f"{count} subset vertices exceed budget {budget}")
    edges = []
    for idx, sub in enumerate(itertools.combinations(range(m), p)):
        edges.extend((m + idx, x) for x in sub)
    return Graph(m + count, edges)


def gen_gnp(n: int, prob: float, seed=0) -> Graph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < prob
    return Graph(n, np.stack([iu[keep], ju[keep]], axis=1))


def _pair_key(u, v):
    return (u, v) if u < v else (v, u)


def _configuration_with_switches(n, D, rng, max_switch):
    stubs = np.repeat(np.arange(n, dtype=np.int64), D)
    rng.shuffle(stubs)
    ed = stubs.reshape(-1, 2).tolist()
    mult = Counter(_pair_key(u, v) for u, v in ed)

    def bad(e):
        u, v = ed[e]
        return u == v or mult[_pair_key(u, v)] > 1

    todo = [e for e in range(len(ed)) if bad(e)]
    switches = 0
    while todo:
        e = todo.pop()
        if not bad(e):
            continue
        u, v = ed[e]
        for _ in range(64):
            switches += 1
            if switches > max_switch:
                return None
            f = int(rng.integers(len(ed)))
            if f == e:
                continue
            x, y = ed[f]
            if rng.random() < 0.5:
                x, y = y, x
            # rewire uv, xy -> ux, vy
            if u == x or v == y:
                continue
            k1, k2 = _pair_key(u, x), _pair_key(v, y)
            if k1 == k2 or mult[k1] or mult[k2]:
                continue
            for old in (_pair_key(u, v), _pair_key(*ed[f])):
                mult[old] -= 1
                if not mult[old]:
                    del mult[old]
            mult[k1] += 1
            mult[k2] += 1
            ed[e], ed[f] = [u, x], [v, y]
            break
        else:
            todo.insert(0, e)
    return ed


def gen_regular_kfree(n: int, D: int, seed=0, max_tries: int = 20) -> Graph:
    """Seeded ``D``-regular simple graph without ``K_{D+1}``.

    Configuration-model pairing; loops and parallel pairs are removed by
    random switches, and a draw is rejected if switching stalls or a
    ``K_{D+1}`` appears.
    """
    if (n * D) % 2:
        raise PreconditionError("n*D must be even")
    if n < D + 2:
        raise PreconditionError("need n >= D + 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        ed = _configuration_with_switches(n, D, rng, max_switch=200 * n * D + 1000)
        if ed is None:
            continue
        g = Graph(n, ed)
        if g.m != n * D // 2 or np.any(g.degrees() != D):
            continue
        if any(clique_in_closed_neighborhood(g, v, D + 1) is not None for v in range(n)):
            continue
        return g
    raise BudgetExceeded(f"no simple K{D + 1}-free {D}-regular graph after {max_tries} draws")


def _random_bounded_graph(bn, cap, rng):
    # Hamiltonian cycle for connectivity, then random edges under the degree cap
    perm = rng.permutation(bn)
    deg = np.zeros(bn, dtype=np.int64)
    edges = set()
    if bn >= 3 and cap >= 2:
        for i in range(bn):
            u, v = int(perm[i]), int(perm[(i + 1) % bn])
            edges.add(_pair_key(u, v))
            deg[u] += 1
            deg[v] += 1
    target = bn * cap // 2
    for _ in range(8 * target):
        if len(edges) >= target:
            break
        u, v = (int(x) for x in rng.integers(bn, size=2))
        if u == v or deg[u] >= cap or deg[v] >= cap or _pair_key(u, v) in edges:
            continue
        edges.add(_pair_key(u, v))
        deg[u] += 1
        deg[v] += 1
    return Graph(bn, sorted(edges))


def gen_lemma_instance(bn: int, q: int, d: int, seed=0, a_count: Optional[int] = None,
                       b_degree: Optional[int] = None, a_extra: Optional[int] = None,
                       max_tries: int = 50) -> LemmaInstance:
    """Random instance that passes the strict precondition check.

    ``b_degree`` caps the degree of the B-graph (default ``max(2, d // 12)``);
    each A-vertex gets between ``d`` and ``d + a_extra`` random B-neighbours.
    Cross edges at B-vertices over the degree budget are trimmed from A-vertices
    with spare degree; a draw that cannot be repaired is resampled.
    """
    if bn <= d:
        raise PreconditionError("need more B-vertices than d")
    rng = np.random.default_rng(seed)
    cap = max(2, d // 12) if b_degree is None else b_degree
    extra = max(0, d // 4) if a_extra is None else a_extra
    for _ in range(max_tries):
        na = int(rng.integers(1, 6)) if a_count is None else a_count
        b = _random_bounded_graph(bn, cap, rng)
        cross = []
        for _a in range(na):
            size = int(rng.integers(d, min(bn, d + extra) + 1))
            cross.append(set(rng.choice(bn, size=size, replace=False).tolist()))
        dg = b.degrees()
        ok = True
        for v in range(bn):
            holders = [a for a in range(na) if v in cross[a]]
            while holders and dg[v] + -(-len(holders) // q) > d:
                donor = max(holders, key=lambda a: (len(cross[a]), a))
                if len(cross[donor]) <= d:
                    ok = False
                    break
                cross[donor].discard(v)
                holders.remove(donor)
            if not ok or dg[v] + -(-len(holders) // q) > d:
                ok = False
                break
        if not ok:
            continue
        inst = LemmaInstance(b, tuple(tuple(sorted(c)) for c in cross), q, d)
        if not check_preconditions(inst, strict=True):
            return inst
    raise BudgetExceeded("could not draw a valid lemma instance")

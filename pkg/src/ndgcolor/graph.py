"""Simple graphs, multigraphs and the primitives every solver leans on."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import kernels
from .errors import PreconditionError


def _csr(n, src, dst, weights=None):
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    w = None if weights is None else np.ascontiguousarray(weights[order], dtype=np.int64)
    return indptr, np.ascontiguousarray(dst, dtype=np.int64), w


def _edge_array(n, edges):
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise PreconditionError("edges must be pairs of vertex ids")
    if arr.min() < 0 or arr.max() >= n:
        raise PreconditionError(f"edge endpoint outside 0..{n - 1}")
    if np.any(arr[:, 0] == arr[:, 1]):
        raise PreconditionError("self-loop")
    return arr


class Graph:
    """Undirected simple graph on vertices ``0..n-1`` stored as CSR.

    Duplicate edges in the input collapse.  Instances are treated as
    immutable; ``adjacency`` is a lazily built tuple of frozensets for the
    set-heavy callers (clique search, verification).
    """

    __slots__ = ("n", "indptr", "indices", "_adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise PreconditionError("negative vertex count")
        arr = _edge_array(n, edges)
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        if lo.size:
            key = np.unique(lo * max(n, 1) + hi)
            lo, hi = key // max(n, 1), key % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        self.n = int(n)
        self.indptr, self.indices, _ = _csr(self.n, src, dst)
        self._adj = None

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        edges = [(u, v) for u, nb in enumerate(adj) for v in nb if u < v]
        g = cls(len(adj), edges)
        for u, nb in enumerate(adj):
            for v in nb:
                if u not in adj[v]:
                    raise PreconditionError(f"adjacency not symmetric at {u}-{v}")
        return g

    @property
    def adjacency(self):
        if self._adj is None:
            ip, ix = self.indptr, self.indices
            self._adj = tuple(frozenset(ix[ip[v]:ip[v + 1]].tolist()) for v in range(self.n))
        return self._adj

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            for v in self.neighbors(u).tolist():
                if u < v:
                    out.append((u, v))
        return out

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class MultiGraph:
    """Undirected multigraph; ``weights[e]`` is the multiplicity of CSR slot ``e``."""

    __slots__ = ("n", "indptr", "indices", "weights")

    def __init__(self, n: int, multiplicity: dict):
        items = [((min(u, v), max(u, v)), int(w)) for (u, v), w in multiplicity.items()]
        merged: dict = {}
        for key, w in items:
            if key[0] == key[1]:
                raise PreconditionError("self-loop")
            if w <= 0:
                raise PreconditionError("multiplicity must be positive")
            if key[0] < 0 or key[1] >= n:
                raise PreconditionError("edge endpoint out of range")
            merged[key] = merged.get(key, 0) + w
        lo = np.fromiter((k[0] for k in merged), dtype=np.int64, count=len(merged))
        hi = np.fromiter((k[1] for k in merged), dtype=np.int64, count=len(merged))
        w = np.fromiter(merged.values(), dtype=np.int64, count=len(merged))
        self.n = int(n)
        self.indptr, self.indices, self.weights = _csr(
            self.n, np.concatenate([lo, hi]), np.concatenate([hi, lo]), np.concatenate([w, w]))

    @classmethod
    def from_csr(cls, n, indptr, indices, weights):
        mg = cls.__new__(cls)
        mg.n = int(n)
        mg.indptr, mg.indices, mg.weights = indptr, indices, weights
        return mg

    def multiplicity(self, u: int, v: int) -> int:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + int(np.searchsorted(self.indices[lo:hi], v))
        if pos < hi and self.indices[pos] == v:
            return int(self.weights[pos])
        return 0

    def degree(self, v: int) -> int:
        return int(self.weights[self.indptr[v]:self.indptr[v + 1]].sum())

    def degrees(self) -> np.ndarray:
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        return np.bincount(rows, weights=self.weights, minlength=self.n).astype(np.int64)

    def underlying(self) -> Graph:
        g = Graph.__new__(Graph)
        g.n, g.indptr, g.indices, g._adj = self.n, self.indptr, self.indices, None
        return g

    def __repr__(self):
        return f"MultiGraph(n={self.n}, pairs={self.indices.size // 2}, total={int(self.weights.sum()) // 2})"


@dataclass(frozen=True)
class DeletionCertificate:
    """Peeling order proving the target set reduces to nothing below ``threshold``."""
    order: tuple
    threshold: int

    def coloring_order(self):
        return tuple(reversed(self.order))


@dataclass(frozen=True)
class CoreState:
    remaining: tuple
    threshold: int
    partial_order: tuple


def _as_vertex_set(g, s) -> tuple:
    s = tuple(int(x) for x in s)
    if len(set(s)) != len(s):
        raise PreconditionError("vertex set has duplicates")
    for x in s:
        if x < 0 or x >= g.n:
            raise PreconditionError(f"invalid vertex id {x}")
    return s


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, tuple]:
    """Subgraph on ``s`` relabelled ``0..len(s)-1`` in the order given.

    Returns ``(subgraph, labels)`` where ``labels[new] == old``.
    """
    labels = _as_vertex_set(g, s)
    local = np.full(g.n, -1, dtype=np.int64)
    local[list(labels)] = np.arange(len(labels), dtype=np.int64)
    edges = []
    for new_u, u in enumerate(labels):
        nb = local[g.neighbors(u)]
        for new_v in nb[nb > new_u].tolist():
            edges.append((new_u, new_v))
    return Graph(len(labels), edges), labels


def peel(mg: Union[MultiGraph, Graph], targets: Iterable[int], threshold: int,
         backend=None) -> Union[DeletionCertificate, CoreState]:
    """Delete target vertices of current (multi)degree below ``threshold`` until stuck.

    Degrees only count multiplicities towards live target vertices.  The
    initial candidates are taken in ascending id order, later ones in the
    order they drop below the threshold.
    """
    if threshold < 1:
        raise PreconditionError("threshold must be positive")
    targets = _as_vertex_set(mg, targets)
    mask = np.zeros(mg.n, dtype=np.bool_)
    mask[list(targets)] = True
    weights = mg.weights if isinstance(mg, MultiGraph) else np.ones(mg.indices.size, dtype=np.int64)
    order, alive = kernels.peel(mg.indptr, mg.indices, weights, mask, threshold, backend=backend)
    order = tuple(order.tolist())
    if len(order) == len(targets):
        return DeletionCertificate(order, int(threshold))
    return CoreState(tuple(np.flatnonzero(alive).tolist()), int(threshold), order)


def check_certificate(mg, targets, cert: DeletionCertificate) -> bool:
    """Replay ``cert`` independently of the kernel (dict-based)."""
    targets = set(targets)
    if sorted(cert.order) != sorted(targets):
        return False
    alive = set(targets)
    multi = isinstance(mg, MultiGraph)
    for v in cert.order:
        lo, hi = mg.indptr[v], mg.indptr[v + 1]
        nbrs = mg.indices[lo:hi].tolist()
        mult = mg.weights[lo:hi].tolist() if multi else [1] * len(nbrs)
        deg = sum(w for u, w in zip(nbrs, mult) if u in alive)
        if deg >= cert.threshold:
            return False
        alive.discard(v)
    return True


def _extend_clique(adj, current, cands, need):
    if need == 0:
        return current
    # k-core style pruning: a usable candidate needs need-1 partners among the rest
    while True:
        cset = set(cands)
        kept = [u for u in cands if len(adj[u] & cset) >= need - 1]
        if len(kept) == len(cands):
            break
        cands = kept
    if len(cands) < need:
        return None
    for idx, u in enumerate(cands):
        if len(cands) - idx < need:
            break
        au = adj[u]
        rest = [w for w in cands[idx + 1:] if w in au]
        found = _extend_clique(adj, current + [u], rest, need - 1)
        if found is not None:
            return found
    return None


def clique_in_closed_neighborhood(g: Graph, v: int, k: int, within: Optional[Iterable[int]] = None,
                                  above: Optional[int] = None) -> Optional[tuple]:
    """Exact search for a ``k``-clique through ``v`` inside ``within``.

    Returns the lexicographically smallest such clique (sorted) or None.
    ``above`` restricts the other members to ids greater than it.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    adj = g.adjacency
    if within is None:
        pool = adj[v]
    else:
        within = within if isinstance(within, (set, frozenset)) else set(within)
        if v not in within:
            raise PreconditionError("v must lie in within")
        pool = adj[v] & within
    if above is not None:
        pool = {u for u in pool if u > above}
    if len(pool) < k - 1:
        return None
    found = _extend_clique(adj, [], sorted(pool), k - 1)
    if found is None:
        return None
    return tuple(sorted(found + [v]))


def connected_components(g: Graph) -> list[tuple]:
    seen = np.zeros(g.n, dtype=np.bool_)
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for w in g.neighbors(u).tolist():
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    dq.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def bfs_order(g: Graph, root: int, allowed=None) -> list[int]:
    """BFS discovery order from ``root``, optionally restricted to ``allowed``."""
    seen = {root}
    out = [root]
    dq = deque([root])
    while dq:
        u = dq.popleft()
        for w in g.neighbors(u).tolist():
            if w not in seen and (allowed is None or w in allowed):
                seen.add(w)
                out.append(w)
                dq.append(w)
    return out


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    adj = g.adjacency
    return all(vs[j] in adj[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)] if n > 2 else ([(0, 1)] if n == 2 else []))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for h in graphs:
        edges.extend((u + off, v + off) for u, v in h.edges())
        off += h.n
    return Graph(off, edges)

"""Potential descent, large-clique elimination and the degree-bounded vertex split.

Colourings are 1-based tuples ``col[v] in 1..k``.  The potential of a
colouring is ``sum_i f_i / alpha_i`` with ``f_i`` the number of edges whose
ends both carry colour ``i``; it is always handled as an exact ``Fraction``.
A *large clique* of colour ``i`` is a monochromatic clique on
``alpha_i + 1`` vertices.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels
from ._report import Violation
from .errors import InvariantBreach, PreconditionError
from .graph import Graph, clique_in_closed_neighborhood, is_clique

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlphaVector:
    alphas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(int(a) for a in self.alphas))
        if not self.alphas:
            raise PreconditionError("empty alpha vector")
        if min(self.alphas) < 2:
            raise PreconditionError("alpha below 2")

    @property
    def D(self) -> int:
        return sum(self.alphas)

    @property
    def k(self) -> int:
        return len(self.alphas)

    @property
    def lcm(self) -> int:
        return math.lcm(*self.alphas)

    def __getitem__(self, color):
        # colours are 1-based
        return self.alphas[color - 1]


def alpha_split(D: int, k: int) -> AlphaVector:
    """Near-equal split of ``D`` into ``k`` parts, larger parts first."""
    if k < 1 or D < 1:
        raise PreconditionError("D and k must be positive")
    if D < 2 * k:
        raise PreconditionError("alpha below 2")
    base, extra = divmod(D, k)
    return AlphaVector(tuple([base + 1] * extra + [base] * (k - extra)))


@dataclass(frozen=True)
class CliqueCertificate:
    vertices: tuple

    def to_list(self):
        return list(self.vertices)


@dataclass(frozen=True)
class PartCertificate:
    max_degree: int
    clique_free: bool


@dataclass(frozen=True)
class Decomposition:
    parts: tuple
    alphas: AlphaVector
    certificates: tuple

    def to_dict(self):
        return {"alphas": list(self.alphas.alphas), "parts": [list(p) for p in self.parts]}

    def coloring(self, n):
        col = [0] * n
        for i, part in enumerate(self.parts, 1):
            for v in part:
                col[v] = i
        return tuple(col)


def _zero_based(g: Graph, col: Sequence[int], k: int) -> np.ndarray:
    arr = np.asarray(col, dtype=np.int64)
    if arr.shape != (g.n,):
        raise PreconditionError(f"colouring must assign all {g.n} vertices")
    if g.n and (arr.min() < 1 or arr.max() > k):
        raise PreconditionError(f"colour outside 1..{k}")
    return np.ascontiguousarray(arr - 1)


def phi(g: Graph, col: Sequence[int], av: AlphaVector) -> Fraction:
    c0 = _zero_based(g, col, av.k)
    f = [0] * av.k
    for u, v in g.edges():
        if c0[u] == c0[v]:
            f[c0[u]] += 1
    return sum((Fraction(fi, a) for fi, a in zip(f, av.alphas)), Fraction(0))


def recolor_delta(g: Graph, col: Sequence[int], v: int, j: int, av: AlphaVector) -> Fraction:
    """Exact change of the potential when ``v`` alone is recoloured to ``j``."""
    if not 1 <= j <= av.k:
        raise PreconditionError(f"colour {j} outside 1..{av.k}")
    i = col[v]
    if i == j:
        return Fraction(0)
    mi = mj = 0
    for u in g.neighbors(v).tolist():
        if col[u] == i:
            mi += 1
        elif col[u] == j:
            mj += 1
    return Fraction(mj, av[j]) - Fraction(mi, av[i])


def local_min_violations(g: Graph, col: Sequence[int], av: AlphaVector) -> list:
    """Check the local-minimum structure properties vertex by vertex.

    ``mono degree``: at most alpha of the own colour. ``saturated counts``: at
    equality every colour ``j`` is seen exactly alpha_j times. ``missing colour``:
    a vertex with a same-colour neighbour sees every colour.
    """
    out = []
    c0 = _zero_based(g, col, av.k)
    counts = kernels.color_counts(g.indptr, g.indices, c0, av.k)
    for v in range(g.n):
        i = c0[v]
        row = counts[v]
        if row[i] > av.alphas[i]:
            out.append(Violation("mono degree", (v,), f" {row[i]} > {av.alphas[i]}"))
        if row[i] == av.alphas[i] and any(row[j] != av.alphas[j] for j in range(av.k)):
            out.append(Violation("saturated counts", (v,), f"counts {row.tolist()}"))
        if row[i] > 0 and any(row[j] == 0 for j in range(av.k)):
            out.append(Violation("missing colour", (v,), f"counts {row.tolist()}"))
    return out


def is_single_move_local_min(g: Graph, col: Sequence[int], av: AlphaVector) -> bool:
    c0 = _zero_based(g, col, av.k)
    counts = kernels.color_counts(g.indptr, g.indices, c0, av.k)
    a = np.asarray(av.alphas, dtype=np.int64)
    own = counts[np.arange(g.n), c0]
    # improving move to j exists iff counts[v, j] * a[i] < own * a[j]
    lhs = counts * a[c0][:, None]
    rhs = own[:, None] * a[None, :]
    return not bool(np.any(lhs < rhs))


def round_robin_coloring(n: int, k: int) -> tuple:
    return tuple(v % k + 1 for v in range(n))


def descend_phi(g: Graph, col: Sequence[int], av: AlphaVector, stats: Optional[dict] = None,
                backend=None) -> tuple:
    """Apply strictly improving single-vertex recolourings until none is left.

    Sweeps vertices in ascending order and takes the first improving colour
    (ascending) for each.  ``stats['moves']`` receives the move count.
    """
    c0 = _zero_based(g, col, av.k)
    counts = kernels.color_counts(g.indptr, g.indices, c0, av.k, backend=backend)
    moves = kernels.descend(g.indptr, g.indices, c0, av.alphas, counts, backend=backend)
    if stats is not None:
        stats["moves"] = stats.get("moves", 0) + moves
    return tuple((c0 + 1).tolist())


def find_large_clique(g: Graph, col: Sequence[int], av: AlphaVector) -> Optional[tuple]:
    """Lexicographically first monochromatic ``K_{alpha_i+1}`` as ``(colour, vertices)``."""
    c0 = _zero_based(g, col, av.k)
    counts = kernels.color_counts(g.indptr, g.indices, c0, av.k)
    mono = counts[np.arange(g.n), c0]
    a = np.asarray(av.alphas)
    if g.n and np.any(mono > a[c0]):
        v = int(np.flatnonzero(mono > a[c0])[0])
        raise PreconditionError(f"monochromatic degree exceeds alpha at vertex {v}")
    classes = [set(np.flatnonzero(c0 == i).tolist()) for i in range(av.k)]
    for v in range(g.n):
        i = int(c0[v])
        if mono[v] < av.alphas[i]:
            continue
        found = clique_in_closed_neighborhood(g, v, av.alphas[i] + 1, within=classes[i], above=v)
        if found is not None:
            return i + 1, found
    return None


def count_large_cliques(g: Graph, col: Sequence[int], av: AlphaVector) -> int:
    eng = _Engine(g, _zero_based(g, col, av.k), av)
    return len(eng.large_cliques())


class _Engine:
    """Mutable colouring with incrementally maintained colour counts."""

    def __init__(self, g: Graph, colors: np.ndarray, av: AlphaVector, backend=None):
        self.g = g
        self.adj = g.adjacency
        self.av = av
        self.alphas = np.asarray(av.alphas, dtype=np.int64)
        self.colors = colors
        self.backend = backend
        self.counts = kernels.color_counts(g.indptr, g.indices, colors, av.k, backend=backend)
        self.trace = deque(maxlen=400)
        self.descent_moves = 0

    # -- state ---------------------------------------------------------
    def move(self, v, j):
        i = self.colors[v]
        if i == j:
            return
        nb = self.g.neighbors(v)
        self.counts[nb, i] -= 1
        self.counts[nb, j] += 1
        self.colors[v] = j

    def descend(self):
        moves = kernels.descend(self.g.indptr, self.g.indices, self.colors, self.alphas,
                                self.counts, backend=self.backend)
        self.descent_moves += moves
        return moves

    def snapshot(self):
        return self.colors.copy(), self.counts.copy()

    def restore(self, snap):
        self.colors[:] = snap[0]
        self.counts[:] = snap[1]

    def phi(self) -> Fraction:
        own = self.counts[np.arange(self.g.n), self.colors]
        f = np.bincount(self.colors, weights=own, minlength=self.av.k).astype(np.int64) // 2
        return sum((Fraction(int(fi), int(a)) for fi, a in zip(f, self.alphas)), Fraction(0))

    def key(self):
        return self.phi(), len(self.large_cliques())

    # -- cliques -------------------------------------------------------
    def large_clique_at(self, v) -> Optional[frozenset]:
        # at a local minimum a large clique through v is exactly v plus its mono neighbours
        i = self.colors[v]
        if self.counts[v, i] != self.alphas[i]:
            return None
        members = [u for u in self.adj[v] if self.colors[u] == i]
        for x in range(len(members)):
            ax = self.adj[members[x]]
            for y in range(x + 1, len(members)):
                if members[y] not in ax:
                    return None
        return frozenset(members + [v])

    def large_cliques(self) -> list:
        seen = set()
        out = []
        a = self.alphas[self.colors]
        own = self.counts[np.arange(self.g.n), self.colors]
        for v in np.flatnonzero(own == a).tolist():
            if v in seen:
                continue
            cl = self.large_clique_at(v)
            if cl is not None:
                out.append(cl)
                seen.update(cl)
        return out

    def first_large_clique(self) -> Optional[frozenset]:
        cls = self.large_cliques()
        return min(cls, key=lambda c: sorted(c)) if cls else None

    def ij_component(self, seed_set, i, j) -> set:
        comp = set(seed_set)
        dq = deque(seed_set)
        while dq:
            u = dq.popleft()
            for w in self.adj[u]:
                if w not in comp and self.colors[w] in (i, j):
                    comp.add(w)
                    dq.append(w)
        return comp


_PROGRESS = "progress"
_STALL = "stall"


class _Eliminator:
    def __init__(self, eng: _Engine):
        self.eng = eng
        self.g = eng.g
        self.k = eng.av.k
        self.cap = max(1, self.g.n * self.k)

    def _note(self, *event):
        self.eng.trace.append(event)
        log.debug("eliminate %s", event)

    def _improved(self, before) -> bool:
        return self.eng.key() < before

    def chain(self, c1: frozenset, i: int, j: int):
        """Walk the alternating recolouring chain from ``c1`` (colour i) towards j.

        Returns ``_PROGRESS`` (state left improved), ``("complete", X)`` when
        the i/j component through ``c1`` is a complete graph on
        ``alpha_i + alpha_j + 1`` vertices, or ``("closed", cliques)``.
        """
        eng = self.eng
        base = eng.snapshot()
        seen = [c1]
        recolored = []
        cur, target, other = c1, j, i
        prev = None
        for step in range(self.cap):
            cands = sorted(cur - {prev} - set(recolored))
            if not cands:
                return ("closed", seen)
            v = cands[0]
            eng.move(v, target)
            recolored.append(v)
            self._note("chain", i + 1, j + 1, step, v, target + 1)
            if eng.descend() > 0:
                return _PROGRESS
            new = eng.large_clique_at(v)
            if new is None:
                return _PROGRESS
            rest = new - {v}
            if any(rest & s for s in seen[:-1]):
                seen.append(new)
                eng.restore(base)
                if len(recolored) == 2 and rest & c1:
                    comp = eng.ij_component(c1, i, j)
                    size = int(eng.alphas[i] + eng.alphas[j] + 1)
                    if len(comp) == size and is_clique(self.g, comp):
                        return ("complete", frozenset(comp - c1))
                return ("closed", seen)
            seen.append(new)
            prev = v
            cur = new
            target, other = other, target
        eng.restore(base)
        raise InvariantBreach("invariant breach: chain neither progresses nor closes",
                              trace=eng.trace)

    def pair_moves(self, c1: frozenset, i: int, j: int, cliques) -> bool:
        """Try ``v in c1 -> j`` followed by ``u -> i`` for nearby ``u``; keep the first improvement."""
        eng = self.eng
        base = eng.snapshot()
        before = eng.key()
        pool = set().union(*cliques)
        for v in sorted(c1):
            eng.move(v, j)
            us = {u for u in pool if eng.colors[u] == j and u != v}
            us |= {u for u in eng.adj[v] if eng.colors[u] == j}
            for u in sorted(us):
                eng.move(u, i)
                eng.descend()
                if self._improved(before):
                    self._note("pair", v, j + 1, u, i + 1)
                    return True
                eng.restore(base)
                eng.move(v, j)
            eng.restore(base)
        return False

    def broad_search(self, c1: frozenset) -> bool:
        """Last resort: any one or two recolourings around ``c1`` that lower (Phi, phi)."""
        eng = self.eng
        base = eng.snapshot()
        before = eng.key()
        for v in sorted(c1):
            for a in range(self.k):
                if a == eng.colors[v]:
                    continue
                eng.move(v, a)
                eng.descend()
                if self._improved(before):
                    self._note("broad1", v, a + 1)
                    return True
                eng.restore(base)
        for v in sorted(c1):
            for a in range(self.k):
                if a == eng.colors[v]:
                    continue
                for u in sorted(self.g.neighbors(v).tolist()):
                    for b in range(self.k):
                        eng.move(v, a)
                        if b == eng.colors[u]:
                            eng.restore(base)
                            continue
                        eng.move(u, b)
                        eng.descend()
                        if self._improved(before):
                            self._note("broad2", v, a + 1, u, b + 1)
                            return True
                        eng.restore(base)
        return False

    def attack(self, c1: frozenset):
        eng = self.eng
        i = int(eng.colors[next(iter(c1))])
        base = eng.snapshot()
        complete = {}
        closed = {}
        for j in range(self.k):
            if j == i:
                continue
            res = self.chain(c1, i, j)
            if res == _PROGRESS:
                return _PROGRESS
            eng.restore(base)
            if res[0] == "complete":
                complete[j] = res[1]
            else:
                closed[j] = res[1]
        for j, cliques in closed.items():
            if self.pair_moves(c1, i, j, cliques):
                return _PROGRESS
        if len(complete) == self.k - 1:
            cand = set(c1).union(*complete.values())
            if len(cand) == eng.av.D + 1 and is_clique(self.g, cand):
                return CliqueCertificate(tuple(sorted(cand)))
        for v in sorted(c1):
            closed_nb = set(eng.adj[v]) | {v}
            if len(closed_nb) == eng.av.D + 1 and is_clique(self.g, closed_nb):
                return CliqueCertificate(tuple(sorted(closed_nb)))
        if self.broad_search(c1):
            return _PROGRESS
        raise InvariantBreach(
            f"invariant breach: large clique {sorted(c1)} of colour {i + 1} could not be removed",
            trace=eng.trace)

    def run(self):
        eng = self.eng
        eng.descend()
        key = eng.key()
        limit = 4 * (self.g.m * eng.av.lcm + 1) * (self.g.n + 1)
        for it in range(limit):
            c1 = eng.first_large_clique()
            if c1 is None:
                return None
            self._note("outer", it, str(key[0]), key[1], tuple(sorted(c1)))
            res = self.attack(c1)
            if isinstance(res, CliqueCertificate):
                return res
            new_key = eng.key()
            if not new_key < key:
                raise InvariantBreach(
                    f"invariant breach: (Phi, phi) did not decrease ({key} -> {new_key})",
                    trace=eng.trace)
            key = new_key
        raise InvariantBreach("invariant breach: elimination iteration cap", trace=eng.trace)


def _verified_certificate(g: Graph, cert: CliqueCertificate, D: int) -> CliqueCertificate:
    if len(cert.vertices) != D + 1 or not is_clique(g, cert.vertices):
        raise InvariantBreach(f"clique certificate {cert.vertices} failed verification")
    return cert


def eliminate_large_cliques(g: Graph, col: Sequence[int], av: AlphaVector, stats: Optional[dict] = None,
                            backend=None) -> Union[tuple, CliqueCertificate]:
    """Remove every large clique while staying at a single-move local minimum.

    Returns the new colouring, or a verified ``CliqueCertificate`` when the
    graph contains ``K_{D+1}``.
    """
    eng = _Engine(g, _zero_based(g, col, av.k), av, backend=backend)
    res = _Eliminator(eng).run()
    if stats is not None:
        stats["elimination_moves"] = stats.get("elimination_moves", 0) + eng.descent_moves
    if isinstance(res, CliqueCertificate):
        return _verified_certificate(g, res, av.D)
    return tuple((eng.colors + 1).tolist())


def omega_coloring(g: Graph, av: AlphaVector, init: Optional[Sequence[int]] = None,
                   stats: Optional[dict] = None, backend=None) -> Union[tuple, CliqueCertificate]:
    """Local minimum of the potential with no large cliques, from ``init`` or round-robin."""
    if g.max_degree() > av.D:
        raise PreconditionError(f"degree exceeds D={av.D}")
    col = round_robin_coloring(g.n, av.k) if init is None else tuple(init)
    st = {} if stats is None else stats
    col = descend_phi(g, col, av, stats=st, backend=backend)
    return eliminate_large_cliques(g, col, av, stats=st, backend=backend)


def _part_certificates(g: Graph, parts, av: AlphaVector):
    certs = []
    for i, part in enumerate(parts):
        inside = set(part)
        deg = max((sum(1 for u in g.neighbors(v).tolist() if u in inside) for v in part), default=0)
        free = all(clique_in_closed_neighborhood(g, v, av.alphas[i] + 1, within=inside, above=v) is None
                   for v in part)
        certs.append(PartCertificate(deg, free))
    return tuple(certs)


def decompose_lovasz(g: Graph, av: AlphaVector, stats: Optional[dict] = None,
                     backend=None) -> Union[Decomposition, CliqueCertificate]:
    """Split V into ``k`` parts with max internal degree and clique number bounded by alpha."""
    res = omega_coloring(g, av, stats=stats, backend=backend)
    if isinstance(res, CliqueCertificate):
        return res
    parts = tuple(tuple(v for v in range(g.n) if res[v] == i) for i in range(1, av.k + 1))
    dec = Decomposition(parts, av, _part_certificates(g, parts, av))
    bad = verify_decomposition(g, dec)
    if bad:
        raise InvariantBreach(f"decomposition failed verification: {bad[:3]}")
    return dec


def verify_decomposition(g: Graph, dec: Decomposition) -> list:
    """Every violation of partition, per-part degree bound and per-part clique bound."""
    out = []
    av = dec.alphas
    if len(dec.parts) != av.k:
        out.append(Violation("shape", (), f"{len(dec.parts)} parts for {av.k} alphas"))
    seen = {}
    for i, part in enumerate(dec.parts, 1):
        for v in part:
            if not 0 <= v < g.n:
                out.append(Violation("coverage", (v,), "vertex id out of range"))
            elif v in seen:
                out.append(Violation("coverage", (v,), f"in parts {seen[v]} and {i}"))
            else:
                seen[v] = i
    for v in range(g.n):
        if v not in seen:
            out.append(Violation("coverage", (v,), "vertex missing"))
    for i, part in enumerate(dec.parts[:av.k]):
        inside = {v for v in part if 0 <= v < g.n}
        alpha = av.alphas[i]
        for v in sorted(inside):
            d = sum(1 for u in g.neighbors(v).tolist() if u in inside)
            if d > alpha:
                out.append(Violation("degree", (v,), f"part {i + 1}: degree {d} > {alpha}"))
        for v in sorted(inside):
            cl = clique_in_closed_neighborhood(g, v, alpha + 1, within=inside, above=v)
            if cl is not None:
                out.append(Violation("clique", cl, f"part {i + 1}: K{alpha + 1}"))
    return out


def decomposition_from_dict(obj: dict) -> Decomposition:
    av = AlphaVector(tuple(obj["alphas"]))
    parts = tuple(tuple(int(v) for v in p) for p in obj["parts"])
    return Decomposition(parts, av, ())

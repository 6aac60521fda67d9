"""Rainbow-neighbourhood colouring of a bipartite-attached graph.

Setting: a graph ``b_graph`` on vertex set B and an independent set A whose
vertices only attach to B (``cross[a]`` lists the B-neighbours of ``a``).
The goal is a proper ``d``-colouring of ``b_graph`` where every A-vertex sees
at least ``q`` colours.  Each A-vertex picks ``q`` of its neighbours (a
*permissible set*), those sets become cliques of an augmented multigraph,
and the multigraph is peeled with threshold ``d``.  When peeling empties
the graph the reverse order colours it greedily and every permissible set
comes out rainbow.  When it gets stuck, one permissible set trades a core
vertex for a peeled one and the loop repeats.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._report import Violation
from .brooks import brooks_color, greedy_color
from .errors import BudgetExceeded, InvariantBreach, LemmaFailure, NoNondegenerateChange, PreconditionError
from .graph import CoreState, DeletionCertificate, Graph, MultiGraph, connected_components, induced_subgraph, peel

log = logging.getLogger(__name__)


def min_d(q: int) -> int:
    """Smallest admissible palette for rainbow size ``q``: q^3 + 2q^2 - q - 8."""
    return q ** 3 + 2 * q ** 2 - q - 8


@dataclass(frozen=True)
class LemmaInstance:
    b_graph: Graph
    cross: tuple
    q: int
    d: int
    b_ids: Optional[tuple] = None
    a_ids: Optional[tuple] = None

    def __post_init__(self):
        cross = tuple(tuple(sorted(int(x) for x in c)) for c in self.cross)
        for a, c in enumerate(cross):
            if len(set(c)) != len(c):
                raise PreconditionError(f"duplicate B-neighbour for A-vertex {a}")
            if c and (c[0] < 0 or c[-1] >= self.b_graph.n):
                raise PreconditionError(f"cross set of A-vertex {a} has an invalid id")
        object.__setattr__(self, "cross", cross)

    @property
    def a_count(self) -> int:
        return len(self.cross)

    @property
    def brooks_fallback(self) -> bool:
        return not self.cross

    def a_degrees(self) -> np.ndarray:
        out = np.zeros(self.b_graph.n, dtype=np.int64)
        for c in self.cross:
            out[list(c)] += 1
        return out

    def h_graph(self) -> Graph:
        """The whole attachment graph: B as ``0..|B|-1``, A-vertex ``a`` as ``|B| + a``."""
        nb = self.b_graph.n
        edges = self.b_graph.edges()
        edges += [(nb + a, x) for a, c in enumerate(self.cross) for x in c]
        return Graph(nb + self.a_count, edges)

    def to_dict(self) -> dict:
        return {"q": self.q, "d": self.d,
                "b": {"n": self.b_graph.n, "edges": [list(e) for e in self.b_graph.edges()]},
                "cross": [list(c) for c in self.cross]}

    @classmethod
    def from_dict(cls, obj: dict) -> "LemmaInstance":
        try:
            b = Graph(int(obj["b"]["n"]), [tuple(e) for e in obj["b"]["edges"]])
            return cls(b, tuple(tuple(c) for c in obj["cross"]), int(obj["q"]), int(obj["d"]))
        except (KeyError, TypeError) as exc:
            raise PreconditionError(f"malformed lemma instance: {exc}") from exc


@dataclass(frozen=True)
class PermissibleSampling:
    sets: tuple

    def total_in(self, core: set) -> int:
        return sum(len(core.intersection(s)) for s in self.sets)


@dataclass(frozen=True)
class NdgColoring:
    coloring: tuple
    counts: tuple
    stats: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"coloring": list(self.coloring), "a_counts": list(self.counts), "stats": self.stats}


@dataclass
class Limits:
    max_swaps: Optional[int] = None
    max_restarts: int = 20


def check_preconditions(inst: LemmaInstance, strict: bool = True) -> list:
    """List every failed clause.  Heuristic mode keeps only the hard ones."""
    hard, soft = [], []
    q, d = inst.q, inst.d
    if q < 1:
        hard.append(Violation("q below 1", (q,)))
    if d < q:
        hard.append(Violation("d below q", (d, q)))
    for a, c in enumerate(inst.cross):
        if len(c) < q:
            hard.append(Violation("A-degree below q", (a,), f"{len(c)} < {q}"))
    if q < 4:
        soft.append(Violation("q below 4", (q,)))
    if d < min_d(q):
        soft.append(Violation("d below q^3+2q^2-q-8", (d,), f"need {min_d(q)}"))
    for a, c in enumerate(inst.cross):
        if len(c) < d:
            soft.append(Violation("A-degree below d", (a,), f"{len(c)} < {d}"))
    da = inst.a_degrees()
    dg = inst.b_graph.degrees()
    for v in range(inst.b_graph.n):
        lhs = int(dg[v]) + -(-int(da[v]) // q) if q > 0 else int(dg[v])
        if lhs > d:
            soft.append(Violation("degree budget exceeded", (v,), f"{int(dg[v])} + ceil({int(da[v])}/{q}) > {d}"))
    h = inst.h_graph()
    if h.n and len(connected_components(h)) > 1:
        soft.append(Violation("H disconnected", (), f"{len(connected_components(h))} components"))
    return hard + soft if strict else hard


def l_value(inst: LemmaInstance, v: int) -> Fraction:
    return Fraction(inst.b_graph.degree(v)) + Fraction(int(inst.a_degrees()[v]), inst.q + 1)


def expected_degree_bound(inst: LemmaInstance, v: int) -> Fraction:
    q = inst.q
    return Fraction(inst.b_graph.degree(v)) + Fraction(int(inst.a_degrees()[v]) * (q - 1) * q, min_d(q))


def exact_expected_degree(inst: LemmaInstance, v: int) -> Fraction:
    """Mean augmented degree of ``v`` under independent uniform q-subsets."""
    q = inst.q
    extra = sum((Fraction(q, len(c)) for c in inst.cross if v in c), Fraction(0))
    return Fraction(inst.b_graph.degree(v)) + (q - 1) * extra


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def init_sampling(inst: LemmaInstance, seed=0) -> PermissibleSampling:
    rng = _rng(seed)
    sets = []
    for a, c in enumerate(inst.cross):
        if len(c) < inst.q:
            raise PreconditionError(f"A-degree below q at A-vertex {a}")
        pick = rng.choice(len(c), size=inst.q, replace=False)
        sets.append(tuple(sorted(c[i] for i in pick)))
    return PermissibleSampling(tuple(sets))


def check_sampling(inst: LemmaInstance, smp: PermissibleSampling) -> bool:
    if len(smp.sets) != inst.a_count:
        return False
    return all(len(set(s)) == inst.q and set(s) <= set(c) for s, c in zip(smp.sets, inst.cross))


def augment(inst: LemmaInstance, smp: PermissibleSampling) -> MultiGraph:
    mult = Counter()
    for e in inst.b_graph.edges():
        mult[e] += 1
    for s in smp.sets:
        for e in itertools.combinations(s, 2):
            mult[e] += 1
    return MultiGraph(inst.b_graph.n, mult)


def core_diagnostics(inst: LemmaInstance, mg: MultiGraph, core: CoreState) -> dict:
    """Degree-sum vs L-sum comparison on a stuck core, plus its S/R split."""
    rem = set(core.remaining)
    da = inst.a_degrees()
    s_part = sorted(v for v in rem if da[v] > 0)
    r_part = sorted(v for v in rem if da[v] == 0)
    degs = []
    for v in core.remaining:
        lo, hi = mg.indptr[v], mg.indptr[v + 1]
        degs.append(int(sum(w for u, w in zip(mg.indices[lo:hi].tolist(), mg.weights[lo:hi].tolist()) if u in rem)))
    sum_l = sum((l_value(inst, v) for v in core.remaining), Fraction(0))
    return {
        "core_size": len(rem),
        "s_prime": len(s_part),
        "r_prime": len(r_part),
        "min_degree": min(degs) if degs else None,
        "degree_sum": sum(degs),
        "l_sum": str(sum_l),
        "condition_2": sum(degs) > sum_l,
    }


def refine(inst: LemmaInstance, smp: PermissibleSampling, core: CoreState,
           mg: Optional[MultiGraph] = None) -> PermissibleSampling:
    """One regular non-degenerate swap against ``core``.

    Scans A-vertices, then core members of their set, then replacement
    candidates, all ascending; the first ``x -> v`` with ``x`` in the core and
    ``v`` a neighbour outside both the set and the core is applied.
    """
    rem = set(core.remaining)
    for a, s in enumerate(smp.sets):
        inside = sorted(rem.intersection(s))
        if not inside:
            continue
        taken = set(s)
        outside = [v for v in inst.cross[a] if v not in taken and v not in rem]
        if not outside:
            continue
        x, v = inside[0], outside[0]
        new = tuple(sorted((taken - {x}) | {v}))
        sets = list(smp.sets)
        sets[a] = new
        return PermissibleSampling(tuple(sets))
    diag = core_diagnostics(inst, mg if mg is not None else augment(inst, smp), core)
    raise NoNondegenerateChange("no non-degenerate change", diagnostics=diag)


def verify_rainbow(inst: LemmaInstance, col: Sequence[int], q: Optional[int] = None) -> dict:
    q = inst.q if q is None else q
    g = inst.b_graph
    violations = []
    if len(col) != g.n:
        violations.append(Violation("coverage", (), f"{len(col)} colours for {g.n} vertices"))
        return {"proper": False, "counts": [], "violations": violations}
    for v in range(g.n):
        if not 1 <= col[v] <= inst.d:
            violations.append(Violation("palette", (v,), f"colour {col[v]} outside 1..{inst.d}"))
    proper = True
    for u, v in g.edges():
        if col[u] == col[v]:
            proper = False
            violations.append(Violation("monochromatic edge", (u, v)))
    counts = [len({col[x] for x in c}) for c in inst.cross]
    for a, cnt in enumerate(counts):
        if cnt < q:
            violations.append(Violation("too few colours", (a,), f"{cnt} < {q}"))
    return {"proper": proper, "counts": counts, "violations": violations}


def split_components(inst: LemmaInstance) -> list:
    """Connected pieces of the attachment graph as ``(sub_instance, b_labels, a_labels)``."""
    nb = inst.b_graph.n
    out = []
    for comp in connected_components(inst.h_graph()):
        b_lab = tuple(v for v in comp if v < nb)
        a_lab = tuple(v - nb for v in comp if v >= nb)
        sub, _ = induced_subgraph(inst.b_graph, b_lab)
        local = {v: i for i, v in enumerate(b_lab)}
        cross = tuple(tuple(local[x] for x in inst.cross[a]) for a in a_lab)
        out.append((LemmaInstance(sub, cross, inst.q, inst.d), b_lab, a_lab))
    return out


def _color_plain(g: Graph, d: int) -> tuple:
    res = peel(g, range(g.n), d)
    if isinstance(res, DeletionCertificate):
        return greedy_color(g, res.order, d)
    return brooks_color(g, d)


def _solve_connected(inst: LemmaInstance, rng_seed, limits: Limits, strict: bool, stats: dict) -> tuple:
    nb = inst.b_graph.n
    max_swaps = limits.max_swaps
    if max_swaps is None:
        max_swaps = max(1, inst.a_count * inst.q * nb)
    last = {}
    for attempt in range(limits.max_restarts + 1):
        rng = np.random.default_rng([*rng_seed, attempt])
        smp = init_sampling(inst, rng)
        for swap in range(max_swaps + 1):
            mg = augment(inst, smp)
            res = peel(mg, range(nb), inst.d)
            if isinstance(res, DeletionCertificate):
                stats["swaps"] = stats.get("swaps", 0) + swap
                stats["restarts"] = stats.get("restarts", 0) + attempt
                return greedy_color(mg, res.order, inst.d)
            diag = core_diagnostics(inst, mg, res)
            log.debug("attempt %d swap %d core %s", attempt, swap, diag)
            if strict and not (diag["min_degree"] >= inst.d and diag["s_prime"] > 0 and diag["condition_2"]):
                raise InvariantBreach(f"stuck core violates the degree-sum condition: {diag}")
            if swap == max_swaps:
                last = {"reason": "swap cap", "attempt": attempt, "core": list(res.remaining), **diag}
                break
            before = smp.total_in(set(res.remaining))
            try:
                smp = refine(inst, smp, res, mg)
            except NoNondegenerateChange as exc:
                last = {"reason": "no non-degenerate change", "attempt": attempt,
                        "core": list(res.remaining), **exc.diagnostics}
                break
            if smp.total_in(set(res.remaining)) != before - 1:
                raise InvariantBreach("refine did not shrink the core overlap by one")
    raise LemmaFailure("no recursive sampling found within limits", report=last)


def solve(inst: LemmaInstance, seed=0, limits: Optional[Limits] = None, strict: bool = True) -> NdgColoring:
    """Proper ``d``-colouring of B in which every A-vertex sees ``q`` colours.

    Raises ``PreconditionError`` on a failed precondition (all clauses in
    strict mode, hard ones otherwise) and ``LemmaFailure`` when the caps run
    out.  Any returned colouring has passed ``verify_rainbow``.
    """
    limits = limits or Limits()
    bad = [v for v in check_preconditions(inst, strict=strict) if v.kind != "H disconnected"]
    if bad:
        raise PreconditionError("; ".join(f"{v.kind} {v.detail}".strip() for v in bad[:5]))
    col = np.zeros(inst.b_graph.n, dtype=np.int64)
    stats = {"components": 0}
    for idx, (sub, b_lab, a_lab) in enumerate(split_components(inst)):
        stats["components"] += 1
        if not a_lab:
            try:
                part = _color_plain(sub.b_graph, inst.d)
            except PreconditionError as exc:
                raise LemmaFailure(f"component without A-vertices not colourable: {exc}",
                                   report={"component": list(b_lab)}) from exc
        else:
            part = _solve_connected(sub, (int(seed), idx), limits, strict, stats)
        col[list(b_lab)] = part
    out = tuple(col.tolist())
    rep = verify_rainbow(inst, out)
    if rep["violations"]:
        raise InvariantBreach(f"rainbow verification failed: {rep['violations'][:3]}")
    return NdgColoring(out, tuple(rep["counts"]), stats)


def exhaustive_recursive_sampling(inst: LemmaInstance, budget: int = 10 ** 6) -> Optional[PermissibleSampling]:
    """Brute-force search over all samplings for one whose augmented graph peels empty."""
    total = 1
    for c in inst.cross:
        total *= math.comb(len(c), inst.q)
    if total > budget:
        raise BudgetExceeded(f"{total} samplings exceed budget {budget}")
    for combo in itertools.product(*(itertools.combinations(c, inst.q) for c in inst.cross)):
        smp = PermissibleSampling(tuple(combo))
        if isinstance(peel(augment(inst, smp), range(inst.b_graph.n), inst.d), DeletionCertificate):
            return smp
    return None

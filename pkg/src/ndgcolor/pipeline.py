"""End-to-end (c, p)-nondegenerate D-colouring.

Outline: split D into c+1 near-equal parts, reach a potential-minimal
colouring with no large cliques, collect the high-degree vertices that see
too few colours and anchor each to a class where it has many neighbours,
recolour every class with its own fresh palette (Brooks when nothing is
anchored there, the rainbow-neighbourhood engine otherwise) and verify.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from ._report import Violation
from .brooks import brooks_color
from .decompose import (AlphaVector, CliqueCertificate, alpha_split, descend_phi, eliminate_large_cliques,
                        omega_coloring, phi)
from .errors import InvariantBreach, NdgError, PreconditionError
from .graph import Graph, induced_subgraph
from .lemma import LemmaInstance, Limits, check_preconditions, solve

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineParams:
    c: int
    p: int
    q: int
    d: int
    D: Optional[int] = None
    strict: bool = True


def params(c: int, D: Optional[int] = None) -> PipelineParams:
    if c < 2:
        raise PreconditionError("c must be at least 2")
    p = (c ** 3 + 8 * c ** 2 + 19 * c + 6) * (c + 1)
    q = c + 2
    d = q ** 3 + 2 * q ** 2 - q - 8
    assert d * (c + 1) == p
    return PipelineParams(c, p, q, d, D)


def heuristic_params(c: int, p: int, q: Optional[int] = None, D: Optional[int] = None) -> PipelineParams:
    if c < 2 or p < 1:
        raise PreconditionError("need c >= 2 and p >= 1")
    return PipelineParams(c, p, c + 2 if q is None else q, -(-p // (c + 1)), D, strict=False)


@dataclass(frozen=True)
class Amplified:
    graph: Graph
    origin: tuple
    rounds: int
    complete: bool


def amplify_min_degree(g: Graph, p: int, max_rounds: int) -> Amplified:
    """Double the graph, matching the copies of every vertex of degree below ``p``; repeat.

    Vertices ``0..g.n-1`` of the output are always the original copy.
    """
    if max_rounds < 0:
        raise PreconditionError("max_rounds must be non-negative")
    cur = g
    origin = np.arange(g.n, dtype=np.int64)
    rounds = 0
    while rounds < max_rounds and cur.n and int(cur.degrees().min()) < p:
        n = cur.n
        low = np.flatnonzero(cur.degrees() < p)
        base = np.asarray(cur.edges(), dtype=np.int64).reshape(-1, 2)
        match = np.stack([low, low + n], axis=1)
        cur = Graph(2 * n, np.concatenate([base, base + n, match]))
        origin = np.concatenate([origin, origin])
        rounds += 1
    complete = cur.n == 0 or int(cur.degrees().min()) >= p
    return Amplified(cur, tuple(origin.tolist()), rounds, complete)


@dataclass(frozen=True)
class ThetaPartition:
    upsilon: tuple
    theta: tuple
    anchor_color: dict
    anchor_count: dict


def theta_partition(g: Graph, col: Sequence[int], pp: PipelineParams, k: Optional[int] = None) -> ThetaPartition:
    """Anchor each degree->=p vertex seeing fewer than c colours to its most frequent neighbour colour."""
    k = pp.c + 1 if k is None else k
    c0 = np.asarray(col, dtype=np.int64) - 1
    counts = kernels.color_counts(g.indptr, g.indices, c0, k)
    seen = (counts > 0).sum(axis=1)
    deg = g.degrees()
    ups = np.flatnonzero((deg >= pp.p) & (seen < pp.c)).tolist()
    theta = [[] for _ in range(k)]
    anchor, anchor_n = {}, {}
    for v in ups:
        i = int(np.argmax(counts[v]))  # first maximum = smallest colour
        cnt = int(counts[v, i])
        if pp.strict and (cnt < pp.d + 1 or i == c0[v]):
            raise InvariantBreach(f"pigeonhole breach at vertex {v}: {cnt} neighbours of colour {i + 1}")
        theta[i].append(v)
        anchor[v] = i + 1
        anchor_n[v] = cnt
    return ThetaPartition(tuple(ups), tuple(tuple(t) for t in theta), anchor, anchor_n)


def class_degree_check(g: Graph, col: Sequence[int], tp: ThetaPartition, av: AlphaVector, c: int) -> list:
    """Vertices where ``ceil(d_H(v) + t(v)/(c+2)) > alpha_i``; ``t(v)`` counts anchored neighbours."""
    out = []
    theta_sets = [set(t) for t in tp.theta]
    for v in range(g.n):
        i = col[v]
        nb = g.neighbors(v).tolist()
        dh = sum(1 for u in nb if col[u] == i)
        t = sum(1 for u in nb if u in theta_sets[i - 1])
        lhs = dh + -(-t // (c + 2))
        if lhs > av[i]:
            out.append(Violation("class degree", (v,), f"colour {i}: ceil({dh} + {t}/{c + 2}) > {av[i]}"))
    return out


def build_lemma_instance(g: Graph, col: Sequence[int], i: int, tp: ThetaPartition, pp: PipelineParams,
                         av: AlphaVector) -> LemmaInstance:
    b_ids = tuple(v for v in range(g.n) if col[v] == i)
    sub, _ = induced_subgraph(g, b_ids)
    local = {v: x for x, v in enumerate(b_ids)}
    a_ids = tp.theta[i - 1]
    cross = tuple(tuple(sorted(local[u] for u in g.neighbors(a).tolist() if u in local)) for a in a_ids)
    inst = LemmaInstance(sub, cross, pp.q, av[i], b_ids=b_ids, a_ids=a_ids)
    if pp.strict:
        eq1 = [x for x in check_preconditions(inst, strict=True) if x.kind == "degree budget exceeded"]
        if eq1:
            raise PreconditionError(f"class {i}: {eq1[0].kind} at B-vertex {b_ids[eq1[0].subject[0]]}")
    return inst


@dataclass
class NdgReport:
    proper: bool
    degrees: tuple
    distinct: tuple
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"proper": self.proper, "ok": self.ok,
                "violations": [v.to_dict() for v in self.violations]}


def verify_ndg(g: Graph, col: Sequence[int], c: int, p: int, D: int) -> NdgReport:
    violations = []
    if len(col) != g.n:
        return NdgReport(False, (), (), [Violation("coverage", (), f"{len(col)} colours for {g.n} vertices")])
    arr = np.asarray(col, dtype=np.int64)
    for v in np.flatnonzero((arr < 1) | (arr > D)).tolist():
        violations.append(Violation("palette", (v,), f"colour {col[v]} outside 1..{D}"))
    proper = True
    for u, v in g.edges():
        if col[u] == col[v]:
            proper = False
            violations.append(Violation("monochromatic edge", (u, v)))
    deg = g.degrees()
    distinct = kernels.distinct_neighbor_colors(g.indptr, g.indices, np.clip(arr, 0, None)) if g.n \
        else np.zeros(0, dtype=np.int64)
    for v in np.flatnonzero((deg >= p) & (distinct < c)).tolist():
        violations.append(Violation("too few colours", (v,), f"degree {int(deg[v])}, {int(distinct[v])} colours"))
    return NdgReport(proper, tuple(deg.tolist()), tuple(np.asarray(distinct).tolist()), violations)


@dataclass
class NdgResult:
    status: str
    coloring: Optional[tuple] = None
    report: dict = field(default_factory=dict)
    certificate: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {"status": self.status,
                "coloring": list(self.coloring) if self.coloring is not None else [],
                "report": self.report,
                "certificate": list(self.certificate) if self.certificate is not None else []}


def _class_degree_repair(g: Graph, col: list, tp: ThetaPartition, av: AlphaVector, v: int) -> bool:
    """Move same-coloured anchored vertices out of the way so ``v`` gains an improving recolouring."""
    i = col[v]
    theta_i = set(tp.theta[i - 1])
    nb = g.neighbors(v).tolist()
    dh = sum(1 for u in nb if col[u] == i)
    for j in range(1, av.k + 1):
        if j == i:
            continue
        outside = sum(1 for u in nb if col[u] == j and u not in theta_i)
        if outside * av[i] < av[j] * dh:
            break
    else:
        return False
    moved = False
    for u in sorted(theta_i):
        if col[u] != j:
            continue
        used = {col[w] for w in g.neighbors(u).tolist()}
        for x in range(1, av.k + 1):
            if x not in (i, j) and x not in used:
                col[u] = x
                moved = True
                break
    return moved


def _color_class_task(task):
    kind = task["kind"]
    if kind == "brooks":
        g = Graph(task["n"], task["edges"])
        return {"ok": True, "coloring": list(brooks_color(g, task["alpha"]))}
    inst = LemmaInstance.from_dict(task["instance"])
    lim = Limits(**task["limits"])
    res = solve(inst, seed=task["seed"], limits=lim, strict=task["strict"])
    return {"ok": True, "coloring": list(res.coloring), "stats": res.stats}


def _run_class(task):
    try:
        return _color_class_task(task)
    except (NdgError, ValueError) as exc:
        return {"ok": False, "error": f"{type(exc).__name__}: {exc}",
                "report": getattr(exc, "report", {})}


def _brooks_only(g: Graph, D: int, info: dict) -> NdgResult:
    try:
        col = brooks_color(g, D)
    except PreconditionError as exc:
        if "complete graph" in str(exc):
            for v in range(g.n):
                nb = set(g.neighbors(v).tolist()) | {v}
                if len(nb) == D + 1 and all(len(nb & (set(g.neighbors(u).tolist()) | {u})) == D + 1 for u in nb):
                    info["reason"] = str(exc)
                    return NdgResult("clique", None, info, tuple(sorted(nb)))
        info["reason"] = str(exc)
        return NdgResult("failed", None, info)
    return NdgResult("colored", col, info)


def ndg_color(g: Graph, c: int, D: Optional[int] = None, seed: int = 0, heuristic_p: Optional[int] = None,
              heuristic_q: Optional[int] = None, amplify_rounds: int = 0, limits: Optional[Limits] = None,
              jobs: int = 1, max_repairs: int = 1000, init: Optional[Sequence[int]] = None) -> NdgResult:
    """Proper D-colouring where every vertex of degree >= p sees at least c colours.

    Returns an ``NdgResult`` with status ``colored`` (verified), ``clique``
    (a ``K_{D+1}`` certificate) or ``failed`` (heuristic mode or exhausted
    caps; the report says why).  ``init`` seeds the potential descent with a
    (c+1)-colouring instead of the round-robin one.
    """
    if D is None:
        D = max(g.max_degree(), 1)
    if g.max_degree() > D:
        raise PreconditionError(f"maximum degree {g.max_degree()} exceeds D={D}")
    pp = params(c, D) if heuristic_p is None and heuristic_q is None else \
        heuristic_params(c, heuristic_p if heuristic_p is not None else params(c).p, heuristic_q, D)
    limits = limits or Limits()
    info = {"run": {"seed": seed, "c": c, "p": pp.p, "q": pp.q, "D": D, "strict": pp.strict}}

    if D < pp.p:
        info["route"] = "brooks"
        res = _brooks_only(g, D, info)
        return _finish(g, res, pp, D, info, upsilon=(), old=None)

    work, n0 = g, g.n
    if amplify_rounds:
        amp = amplify_min_degree(g, pp.p, amplify_rounds)
        work = amp.graph
        info["amplify"] = {"rounds": amp.rounds, "complete": amp.complete, "n": work.n}
    info["route"] = "classes"
    try:
        av = alpha_split(D, c + 1)
    except PreconditionError as exc:
        info["reason"] = str(exc)
        return NdgResult("failed", None, info)
    info["run"]["alphas"] = list(av.alphas)
    stats = {}
    if init is not None and amplify_rounds:
        init = list(init) * (work.n // max(n0, 1))
    col = omega_coloring(work, av, init=init, stats=stats)
    if isinstance(col, CliqueCertificate):
        cert = tuple(v for v in col.vertices if v < n0) if amplify_rounds else col.vertices
        if len(cert) != D + 1:
            cert = tuple(sorted({v % n0 for v in col.vertices}))
        return NdgResult("clique", None, info, cert)
    col = list(col)
    log.debug("omega colouring: phi=%s moves=%s", phi(work, col, av), stats.get("moves"))

    for rnd in range(max_repairs):
        try:
            tp = theta_partition(work, col, pp)
        except InvariantBreach as exc:
            info["reason"] = str(exc)
            return NdgResult("failed", None, info)
        fails = class_degree_check(work, col, tp, av, c)
        if not fails:
            break
        v = fails[0].subject[0]
        before = phi(work, col, av)
        if not _class_degree_repair(work, col, tp, av, v):
            info["reason"] = f"class degree inequality fails at {v} and no repair applies"
            return NdgResult("failed", None, info)
        col = descend_phi(work, col, av, stats=stats)
        res = eliminate_large_cliques(work, col, av, stats=stats)
        if isinstance(res, CliqueCertificate):
            return NdgResult("clique", None, info, res.vertices)
        col = list(res)
        if not phi(work, col, av) < before:
            info["reason"] = f"class degree repair at {v} did not lower the potential"
            return NdgResult("failed", None, info)
        stats["repairs"] = rnd + 1
        log.debug("repair %d at %d: phi %s -> %s", rnd + 1, v, before, phi(work, col, av))
    else:
        info["reason"] = "repair cap reached"
        return NdgResult("failed", None, info)
    info["stats"] = stats
    info["upsilon"] = len(tp.upsilon)

    tasks = []
    for i in range(1, av.k + 1):
        if not tp.theta[i - 1]:
            b_ids = tuple(v for v in range(work.n) if col[v] == i)
            sub, _ = induced_subgraph(work, b_ids)
            tasks.append({"kind": "brooks", "n": sub.n, "edges": sub.edges(), "alpha": av[i], "b_ids": b_ids})
        else:
            try:
                inst = build_lemma_instance(work, col, i, tp, pp, av)
            except PreconditionError as exc:
                info["reason"] = str(exc)
                return NdgResult("failed", None, info)
            tasks.append({"kind": "lemma", "instance": inst.to_dict(), "seed": seed * 1009 + i,
                          "limits": {"max_swaps": limits.max_swaps, "max_restarts": limits.max_restarts},
                          "strict": pp.strict, "b_ids": inst.b_ids})
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_class, tasks))
    else:
        results = [_run_class(t) for t in tasks]

    final = np.zeros(work.n, dtype=np.int64)
    offset = 0
    classes = []
    for i, (task, res) in enumerate(zip(tasks, results), 1):
        if not res["ok"]:
            info["reason"] = f"class {i} ({task['kind']}): {res['error']}"
            info["class_report"] = res.get("report", {})
            return NdgResult("failed", None, info)
        final[list(task["b_ids"])] = np.asarray(res["coloring"], dtype=np.int64) + offset
        classes.append({"class": i, "route": task["kind"], "size": len(task["b_ids"]), "palette": av[i]})
        offset += av[i]
    info["classes"] = classes
    out = tuple(final[:n0].tolist())
    return _finish(g, NdgResult("colored", out, info), pp, D, info,
                   upsilon=tuple(v for v in tp.upsilon if v < n0), old=col[:n0])


def _finish(g, res: NdgResult, pp: PipelineParams, D: int, info: dict, upsilon, old) -> NdgResult:
    if res.status != "colored":
        return res
    rep = verify_ndg(g, res.coloring, pp.c, pp.p, D)
    info["verification"] = rep.to_dict()
    if old is not None:
        info["audit"] = _audit(g, res.coloring, old, set(upsilon), pp)
        if any(not a["ok"] for a in info["audit"].values()):
            rep.violations.append(Violation("audit", (), "case bound missed"))
    if not rep.ok:
        info["reason"] = "verification failed"
        return NdgResult("failed", None, info)
    return res


def _audit(g: Graph, col, old, upsilon: set, pp: PipelineParams) -> dict:
    """Per-case colour counts for degree->=p vertices, each against its own bound."""
    expect = {"theta": pp.q, "same-class neighbour": pp.c + 1, "plain": pp.c}
    out = {k: {"count": 0, "min_distinct": None, "expected": e, "ok": True} for k, e in expect.items()}
    for v in range(g.n):
        nb = g.neighbors(v).tolist()
        if len(nb) < pp.p:
            continue
        if v in upsilon:
            label = "theta"
            # the rainbow guarantee holds inside the anchor class
            seen = len({col[u] for u in nb if old[u] == _anchor_of(v, nb, old)})
        elif any(old[u] == old[v] for u in nb):
            label = "same-class neighbour"
            seen = len({col[u] for u in nb})
        else:
            label = "plain"
            seen = len({col[u] for u in nb})
        a = out[label]
        a["count"] += 1
        a["min_distinct"] = seen if a["min_distinct"] is None else min(a["min_distinct"], seen)
        if seen < a["expected"]:
            a["ok"] = False
    return out


def _anchor_of(v, nb, old):
    counts = {}
    for u in nb:
        counts[old[u]] = counts.get(old[u], 0) + 1
    return min(counts, key=lambda x: (-counts[x], x))

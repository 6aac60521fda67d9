"""``ndgcolor`` command line.

Exit codes: 0 success, 2 clique certificate, 3 solver failure or no
colouring, 4 input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .decompose import CliqueCertificate, alpha_split, AlphaVector, decompose_lovasz, verify_decomposition
from .errors import BudgetExceeded, InvariantBreach, LemmaFailure, PreconditionError
from .io import format_dimacs, format_json_graph, read_graph
from .lab import brute_force_ndg_exists, gen_bipartite_counterexample, gen_lemma_instance, gen_regular_kfree
from .lemma import LemmaInstance, Limits, solve
from .pipeline import ndg_color, params, verify_ndg

EXIT_OK, EXIT_CLIQUE, EXIT_FAIL, EXIT_INPUT = 0, 2, 3, 4


def _dump(obj, path):
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path}: invalid JSON: {exc}") from exc


def _cmd_color(a):
    g = read_graph(a.input, a.format)
    lim = Limits(max_swaps=a.max_swaps, max_restarts=a.max_restarts)
    res = ndg_color(g, a.c, D=a.D, seed=a.seed, heuristic_p=a.heuristic_p, heuristic_q=a.heuristic_q,
                    amplify_rounds=a.amplify, limits=lim, jobs=a.jobs)
    _dump(res.to_dict(), a.out)
    if res.status == "clique":
        print(f"K{len(res.certificate)} found: {res.certificate}", file=sys.stderr)
        return EXIT_CLIQUE
    if res.status == "failed":
        print(f"failed: {res.report.get('reason', 'unknown')}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_decompose(a):
    g = read_graph(a.input, a.format)
    if a.alphas:
        av = AlphaVector(tuple(int(x) for x in a.alphas.split(",")))
    else:
        av = alpha_split(a.D if a.D is not None else g.max_degree(), a.k)
    if g.max_degree() > av.D:
        raise PreconditionError(f"maximum degree {g.max_degree()} exceeds sum of alphas {av.D}")
    out = decompose_lovasz(g, av)
    if isinstance(out, CliqueCertificate):
        _dump({"status": "clique", "certificate": list(out.vertices), "alphas": list(av.alphas)}, a.out)
        return EXIT_CLIQUE
    viol = verify_decomposition(g, out)
    body = out.to_dict()
    body.update(status="decomposed" if not viol else "failed",
                max_degrees=[c.max_degree for c in out.certificates],
                violations=[v.to_dict() for v in viol])
    _dump(body, a.out)
    return EXIT_OK if not viol else EXIT_FAIL


def _cmd_verify(a):
    g = read_graph(a.input, a.format)
    obj = _load_json(a.coloring)
    col = obj["coloring"] if isinstance(obj, dict) else obj
    if not isinstance(col, list) or not all(isinstance(x, int) for x in col):
        raise PreconditionError("coloring must be a list of integers")
    p = a.p if a.p is not None else params(a.c).p
    D = a.D if a.D is not None else max(g.max_degree(), 1)
    rep = verify_ndg(g, col, a.c, p, D)
    _dump({"c": a.c, "p": p, "D": D, **rep.to_dict()}, a.out)
    for v in rep.violations[:20]:
        print(f"{v.kind} {list(v.subject)} {v.detail}".rstrip(), file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _cmd_lemma(a):
    inst = LemmaInstance.from_dict(_load_json(a.instance))
    lim = Limits(max_swaps=a.max_swaps, max_restarts=a.max_restarts)
    try:
        res = solve(inst, seed=a.seed, limits=lim, strict=not a.heuristic)
    except LemmaFailure as exc:
        _dump({"status": "failed", "seed": a.seed, "reason": str(exc), "report": exc.report}, a.out)
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _dump({"status": "colored", "seed": a.seed, **res.to_dict()}, a.out)
    return EXIT_OK


def _cmd_gen(a):
    if a.kind == "lemma":
        inst = gen_lemma_instance(a.bn, a.q, a.d, seed=a.seed, a_count=a.a_count)
        _dump(inst.to_dict(), a.out)
        return EXIT_OK
    if a.kind == "counterexample":
        g = gen_bipartite_counterexample(a.p, a.D)
    else:
        if a.n is None:
            raise PreconditionError("gen regular needs --n")
        g = gen_regular_kfree(a.n, a.D, seed=a.seed)
    text = format_json_graph(g) if a.format == "json" else format_dimacs(g)
    if a.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(a.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_oracle(a):
    g = read_graph(a.input, a.format)
    try:
        col = brute_force_ndg_exists(g, a.D, a.c, a.p, budget=a.budget)
    except BudgetExceeded as exc:
        _dump({"status": "unknown", "reason": str(exc)}, a.out)
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    if col is None:
        _dump({"status": "none", "reason": "no coloring exists", "c": a.c, "p": a.p, "D": a.D}, a.out)
        print("no coloring exists", file=sys.stderr)
        return EXIT_FAIL
    _dump({"status": "found", "coloring": list(col), "c": a.c, "p": a.p, "D": a.D}, a.out)
    return EXIT_OK


def _graph_args(sp, required=True):
    sp.add_argument("--input", required=required, help="graph file (DIMACS or JSON)")
    sp.add_argument("--format", choices=("dimacs", "json"), default=None,
                    help="graph format (default: by extension)")
    sp.add_argument("--out", default=None, help="output path (default stdout)")


def _limit_args(sp):
    sp.add_argument("--max-swaps", type=int, default=None)
    sp.add_argument("--max-restarts", type=int, default=20)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ndgcolor", description="Nondegenerate graph colouring tools.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--trace", action="store_true", help="log search progress to stderr")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("color", help="(c,p)-nondegenerate D-colouring")
    _graph_args(sp)
    sp.add_argument("--c", type=int, default=2)
    sp.add_argument("--D", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--heuristic-p", type=int, default=None)
    sp.add_argument("--heuristic-q", type=int, default=None)
    sp.add_argument("--amplify", type=int, default=0, help="max doubling rounds")
    sp.add_argument("--jobs", type=int, default=1)
    _limit_args(sp)
    sp.set_defaults(func=_cmd_color)

    sp = sub.add_parser("decompose", help="split into parts of bounded degree without large cliques")
    _graph_args(sp)
    sp.add_argument("--alphas", default=None, help="comma separated part sizes")
    sp.add_argument("--D", type=int, default=None)
    sp.add_argument("--k", type=int, default=3, help="number of parts when --alphas is absent")
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("verify", help="check a colouring")
    _graph_args(sp)
    sp.add_argument("--coloring", required=True, help="result JSON or a bare list")
    sp.add_argument("--c", type=int, default=2)
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--D", type=int, default=None)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("lemma", help="solve a rainbow-neighbourhood instance")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--heuristic", action="store_true", help="check only the hard preconditions")
    sp.add_argument("--out", default=None)
    _limit_args(sp)
    sp.set_defaults(func=_cmd_lemma)

    sp = sub.add_parser("gen", help="generate instances")
    sp.add_argument("kind", choices=("counterexample", "regular", "lemma"))
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--D", type=int, default=2)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--bn", type=int, default=150)
    sp.add_argument("--q", type=int, default=4)
    sp.add_argument("--d", type=int, default=84)
    sp.add_argument("--a-count", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("dimacs", "json"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("oracle", help="exhaustive existence check")
    _graph_args(sp)
    sp.add_argument("--c", type=int, default=2)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--D", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10 ** 7, help="search node cap")
    sp.set_defaults(func=_cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    pkg_log = logging.getLogger("ndgcolor")
    handler = None
    if a.trace:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        pkg_log.addHandler(handler)
        pkg_log.setLevel(logging.DEBUG)
    try:
        return a.func(a)
    except (PreconditionError, OSError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, InvariantBreach) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if handler is not None:
            pkg_log.removeHandler(handler)
            pkg_log.setLevel(logging.NOTSET)


if __name__ == "__main__":
    sys.exit(main())

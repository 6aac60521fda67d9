"""Graph ingestion and output: DIMACS ``.col`` (1-based) and a JSON form (0-based)."""
import json

from .errors import PreconditionError
from .graph import Graph


def parse_dimacs(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) < 4 or parts[1] not in ("edge", "col"):
                raise PreconditionError(f"line {lineno}: bad problem line {line!r}")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise PreconditionError(f"line {lineno}: edge before problem line")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if u == v:
                raise PreconditionError(f"line {lineno}: self-loop on {u + 1}")
            edges.append((u, v))
        else:
            raise PreconditionError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise PreconditionError("missing 'p edge n m' line")
    return Graph(n, edges)


def format_dimacs(g: Graph) -> str:
    edges = g.edges()
    lines = [f"p edge {g.n} {len(edges)}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def graph_from_dict(obj: dict) -> Graph:
    try:
        return Graph(int(obj["n"]), [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed graph JSON: {exc}") from exc


def parse_json_graph(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"invalid JSON: {exc}") from exc
    return graph_from_dict(obj)


def format_json_graph(g: Graph) -> str:
    return json.dumps(graph_to_dict(g), separators=(",", ":")) + "\n"


def read_graph(path, fmt=None) -> Graph:
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "dimacs"
    with open(path) as fh:
        text = fh.read()
    if fmt == "json":
        return parse_json_graph(text)
    if fmt == "dimacs":
        return parse_dimacs(text)
    raise PreconditionError(f"unknown graph format {fmt!r}")


def write_graph(g: Graph, path, fmt=None):
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "dimacs"
    text = format_json_graph(g) if fmt == "json" else format_dimacs(g)
    with open(path, "w") as fh:
        fh.write(text)

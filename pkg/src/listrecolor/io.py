"""Line-based text formats for graphs, lists, colorings and sequences.

graph     ``graph <n> <m>`` then ``e <u> <v>`` lines, optional ``rot <v>: ...``
lists     ``L <v>: <c1> <c2> ...``
coloring  ``c <v> <color>``
sequence  ``seq k=<k>`` then ``s <v> <color>``

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping

from .graph import Graph, GraphError
from .recolor import RecolorSequence, first_conflict


MAX_VERTICES = 1_000_000


class ParseError(ValueError):
    def __init__(self, line: int, message: str, source: str = ""):
        where = f"{source}:" if source else "line "
        super().__init__(f"{where}{line}: {message}")
        self.line = line
        self.message = message
        self.source = source


def _lines(text: str | bytes, source: str) -> Iterator[tuple[int, list[str]]]:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(0, f"not UTF-8 text ({exc.reason})", source) from None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line.split()


def _int(tok: str, no: int, source: str, what: str = "integer") -> int:
    if not tok.isascii() or not tok.isdigit():
        raise ParseError(no, f"expected a nonnegative {what}, got {tok!r}", source)
    return int(tok)


def _head(toks: list[str], word: str, no: int, source: str) -> list[str]:
    """Tokens after ``<word> <v>:`` with the vertex as first element."""
    if len(toks) < 2 or toks[0] != word or not toks[1].endswith(":"):
        raise ParseError(no, f"expected '{word} <v>: ...'", source)
    return [toks[1][:-1]] + toks[2:]


# ---------------------------------------------------------------------------
# graph


def parse_graph(text: str | bytes, source: str = "") -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    rot: dict[int, list[int]] = {}
    for no, toks in _lines(text, source):
        kind = toks[0]
        if n is None:
            if kind != "graph" or len(toks) != 3:
                raise ParseError(no, "expected header 'graph <n> <m>'", source)
            n, m = _int(toks[1], no, source), _int(toks[2], no, source)
            if n > MAX_VERTICES:
                raise ParseError(no, f"more than {MAX_VERTICES} vertices", source)
            continue
        if kind == "e":
            if len(toks) != 3:
                raise ParseError(no, "expected 'e <u> <v>'", source)
            u, v = _int(toks[1], no, source), _int(toks[2], no, source)
            if u >= n or v >= n:
                raise ParseError(no, f"vertex id out of range 0..{n - 1}", source)
            edges.append((u, v))
        elif kind == "rot":
            rest = _head(toks, "rot", no, source)
            v = _int(rest[0], no, source)
            if v >= n:
                raise ParseError(no, f"vertex id out of range 0..{n - 1}", source)
            if v in rot:
                raise ParseError(no, f"second rotation line for {v}", source)
            rot[v] = [_int(t, no, source) for t in rest[1:]]
        else:
            raise ParseError(no, f"unknown line type {kind!r}", source)
    if n is None:
        raise ParseError(0, "missing 'graph <n> <m>' header", source)
    if len(edges) != m:
        raise ParseError(0, f"header announces {m} edges, found {len(edges)}", source)
    try:
        probe = Graph.from_edges(range(n), edges)
        rotation = None
        if rot:
            rotation = {v: rot.get(v, []) for v in range(n)}
            missing = [v for v in range(n) if v not in rot and probe.degree(v) > 0]
            if missing:
                raise GraphError(f"rotation missing for vertices {missing[:5]}")
        return Graph.from_edges(range(n), edges, rotation)
    except GraphError as exc:
        raise ParseError(0, str(exc), source) from None


def serialize_graph(g: Graph) -> str:
    n = len(g)
    if set(g.vertices) != set(range(n)):
        raise GraphError("vertex ids must be 0..n-1 to serialize")
    out = [f"graph {n} {g.num_edges()}"]
    out += [f"e {u} {v}" for u, v in g.edges()]
    if g.rotation is not None:
        for v in range(n):
            out.append(f"rot {v}: " + " ".join(map(str, g.rotation[v])) if g.rotation[v] else f"rot {v}:")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# lists and colorings


def parse_lists(text: str | bytes, source: str = "") -> dict[int, frozenset[int]]:
    lists: dict[int, frozenset[int]] = {}
    for no, toks in _lines(text, source):
        rest = _head(toks, "L", no, source)
        v = _int(rest[0], no, source)
        colors = [_int(t, no, source, "color") for t in rest[1:]]
        if v in lists:
            raise ParseError(no, f"second list for vertex {v}", source)
        if len(set(colors)) != len(colors):
            raise ParseError(no, f"repeated color in the list of {v}", source)
        lists[v] = frozenset(colors)
    return lists


def serialize_lists(lists: Mapping[int, frozenset[int]]) -> str:
    return "".join(f"L {v}: " + " ".join(map(str, sorted(lists[v]))) + "\n" for v in sorted(lists))


def parse_coloring(text: str | bytes, source: str = "") -> dict[int, int]:
    col: dict[int, int] = {}
    for no, toks in _lines(text, source):
        if len(toks) != 3 or toks[0] != "c":
            raise ParseError(no, "expected 'c <v> <color>'", source)
        v = _int(toks[1], no, source)
        if v in col:
            raise ParseError(no, f"second color for vertex {v}", source)
        col[v] = _int(toks[2], no, source, "color")
    return col


def serialize_coloring(col: Mapping[int, int]) -> str:
    return "".join(f"c {v} {col[v]}\n" for v in sorted(col))


# ---------------------------------------------------------------------------
# sequences


def parse_sequence(text: str | bytes, source: str = "") -> tuple[int | None, list[tuple[int, int]]]:
    """Header k (``none`` allowed) and the recoloring steps in order."""
    k: int | None = None
    header = False
    steps: list[tuple[int, int]] = []
    for no, toks in _lines(text, source):
        if not header:
            if len(toks) != 2 or toks[0] != "seq" or not toks[1].startswith("k="):
                raise ParseError(no, "expected header 'seq k=<k>'", source)
            val = toks[1][2:]
            k = None if val == "none" else _int(val, no, source)
            header = True
            continue
        if len(toks) != 3 or toks[0] != "s":
            raise ParseError(no, "expected 's <v> <color>'", source)
        steps.append((_int(toks[1], no, source), _int(toks[2], no, source, "color")))
    if not header:
        raise ParseError(0, "missing 'seq k=<k>' header", source)
    return k, steps


def serialize_sequence(seq: RecolorSequence) -> str:
    k = "none" if seq.k is None else str(seq.k)
    return f"seq k={k}\n" + "".join(f"s {v} {c}\n" for v, c in seq.steps)


# ---------------------------------------------------------------------------
# bundles

BUNDLE_FILES = {"graph": "graph.txt", "lists": "lists.txt", "alpha": "alpha.txt", "beta": "beta.txt"}


@dataclass
class LoadedBundle:
    graph: Graph
    lists: dict[int, frozenset[int]]
    alpha: dict[int, int]
    beta: dict[int, int]


def cross_validate(g: Graph, lists, alpha, beta) -> list[str]:
    problems = []
    for name, part in (("lists", lists), ("alpha", alpha), ("beta", beta)):
        if set(part) != set(g.vertices):
            extra = sorted(set(part) - set(g.vertices))[:5]
            miss = sorted(set(g.vertices) - set(part))[:5]
            problems.append(f"{name} covers the wrong vertex set (missing {miss}, unknown {extra})")
    if problems:
        return problems
    for name, col in (("alpha", alpha), ("beta", beta)):
        bad = first_conflict(g, lists, col)
        if bad:
            problems.append(f"{name}: {bad}")
    return problems


def read_text(path: str | Path) -> bytes:
    return Path(path).read_bytes()


def write_bundle(directory: str | Path, g: Graph, lists, alpha, beta, meta: Mapping[str, str] | None = None) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    header = "".join(f"# {k}: {v}\n" for k, v in sorted((meta or {}).items()))
    (d / BUNDLE_FILES["graph"]).write_text(header + serialize_graph(g))
    (d / BUNDLE_FILES["lists"]).write_text(serialize_lists(lists))
    (d / BUNDLE_FILES["alpha"]).write_text(serialize_coloring(alpha))
    (d / BUNDLE_FILES["beta"]).write_text(serialize_coloring(beta))

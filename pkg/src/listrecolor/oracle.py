"""Brute-force ground truth over the recoloring graph of small instances."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from math import prod
from typing import Iterator

from .graph import Graph
from .recolor import Coloring, ListAssignment, RecolorSequence

DEFAULT_MAX_STATES = 10**7


class StateCapExceeded(RuntimeError):
    pass


class Encoder:
    """Mixed-radix integer encoding of L-colorings over a fixed vertex order."""

    def __init__(self, g: Graph, lists: ListAssignment):
        self.order = sorted(g.vertices)
        self.palettes = [sorted(lists[v]) for v in self.order]
        self.index = {v: i for i, v in enumerate(self.order)}
        self.radix = [len(p) for p in self.palettes]
        self.place = []
        acc = 1
        for r in self.radix:
            self.place.append(acc)
            acc *= r
        self.size = acc
        self.slot = [{c: j for j, c in enumerate(p)} for p in self.palettes]

    def encode(self, col: Coloring) -> int:
        return sum(self.slot[i][col[v]] * self.place[i] for i, v in enumerate(self.order))

    def digits(self, code: int) -> list[int]:
        out = []
        for r in self.radix:
            code, d = divmod(code, r)
            out.append(d)
        return out

    def decode(self, code: int) -> dict[int, int]:
        return {v: self.palettes[i][d] for i, (v, d) in enumerate(zip(self.order, self.digits(code)))}


def _check_cap(g: Graph, lists: ListAssignment, max_states: int) -> None:
    space = prod(len(lists[v]) for v in g.vertices)
    if space > max_states:
        raise StateCapExceeded(f"{space} candidate colorings exceed the cap of {max_states}")


def enumerate_colorings(g: Graph, lists: ListAssignment, max_states: int = DEFAULT_MAX_STATES) -> tuple[int, Iterator[dict[int, int]]]:
    """Count and iterate the proper L-colorings (backtracking in vertex order)."""
    _check_cap(g, lists, max_states)
    order = sorted(g.vertices)
    earlier = {v: [u for u in g.adj[v] if u < v] for v in order}

    def walk() -> Iterator[dict[int, int]]:
        col: dict[int, int] = {}

        def rec(i: int):
            if i == len(order):
                yield dict(col)
                return
            v = order[i]
            for c in sorted(lists[v]):
                if all(col[u] != c for u in earlier[v]):
                    col[v] = c
                    yield from rec(i + 1)
            col.pop(v, None)

        yield from rec(0)

    count = sum(1 for _ in walk())
    return count, walk()


def _moves(g: Graph, enc: Encoder, code: int) -> Iterator[tuple[int, int, int]]:
    """(vertex index, new digit, new code) for each single-vertex recoloring."""
    digs = enc.digits(code)
    for i, v in enumerate(enc.order):
        blocked = {enc.palettes[enc.index[u]][digs[enc.index[u]]] for u in g.adj[v]}
        for j, c in enumerate(enc.palettes[i]):
            if j != digs[i] and c not in blocked:
                yield i, j, code + (j - digs[i]) * enc.place[i]


def bfs_distance(
    g: Graph,
    lists: ListAssignment,
    alpha: Coloring,
    beta: Coloring,
    max_states: int = DEFAULT_MAX_STATES,
) -> int | None:
    """Exact distance in the recoloring graph, or None when unreachable."""
    _check_cap(g, lists, max_states)
    enc = Encoder(g, lists)
    src, dst = enc.encode(alpha), enc.encode(beta)
    if src == dst:
        return 0
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        for _, _, y in _moves(g, enc, x):
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == dst:
                    return dist[y]
                q.append(y)
    return None


@dataclass
class KGoodAnswer:
    answer: str  # "yes", "no" or "unknown"
    witness: RecolorSequence | None = None
    states: int = 0


def kgood_reachable(
    g: Graph,
    lists: ListAssignment,
    alpha: Coloring,
    beta: Coloring,
    k: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> KGoodAnswer:
    """Decide whether alpha reaches beta recoloring each vertex at most k times.

    States are (coloring, count vector); a state is dropped when another
    state with the same coloring and pointwise smaller counts was seen.
    """
    enc = Encoder(g, lists)
    start = (enc.encode(alpha), (0,) * len(enc.order))
    dst = enc.encode(beta)
    if start[0] == dst:
        return KGoodAnswer("yes", RecolorSequence(dict(alpha), [], k), 1)
    seen: dict[int, list[tuple[int, ...]]] = {start[0]: [start[1]]}
    parent: dict[tuple[int, tuple[int, ...]], tuple] = {start: None}
    q = deque([start])
    states = 1
    while q:
        code, cnt = q.popleft()
        for i, _, y in _moves(g, enc, code):
            if cnt[i] >= k:
                continue
            ncnt = cnt[:i] + (cnt[i] + 1,) + cnt[i + 1:]
            front = seen.setdefault(y, [])
            if any(all(a <= b for a, b in zip(c, ncnt)) for c in front):
                continue
            front[:] = [c for c in front if not all(a <= b for a, b in zip(ncnt, c))]
            front.append(ncnt)
            parent[(y, ncnt)] = (code, cnt, i)
            states += 1
            if y == dst:
                return KGoodAnswer("yes", _rebuild(enc, alpha, parent, (y, ncnt), k), states)
            if states > max_states:
                return KGoodAnswer("unknown", None, states)
            q.append((y, ncnt))
    return KGoodAnswer("no", None, states)


def _rebuild(enc: Encoder, alpha: Coloring, parent: dict, node: tuple, k: int) -> RecolorSequence:
    steps = []
    while parent[node] is not None:
        code, cnt, i = parent[node]
        col = enc.decode(node[0])
        v = enc.order[i]
        steps.append((v, col[v]))
        node = (code, cnt)
    steps.reverse()
    return RecolorSequence(dict(alpha), steps, k)


# ---------------------------------------------------------------------------
# independent references used by the tests


def mad_bruteforce(g: Graph):
    """Maximum of 2|E(H)|/|V(H)| over all nonempty vertex subsets."""
    from fractions import Fraction

    verts = sorted(g.vertices)
    best = Fraction(0)
    for r in range(1, len(verts) + 1):
        for sub in itertools.combinations(verts, r):
            s = set(sub)
            e = sum(1 for u in sub for w in g.adj[u] if w in s) // 2
            best = max(best, Fraction(2 * e, r))
    return best


def chromatic_polynomial(g: Graph, k: int) -> int:
    """P(G, k) by deletion-contraction on an edge list."""
    edges = frozenset(frozenset(e) for e in g.edges())
    return _dc(len(g.vertices), edges, k)


def _dc(n: int, edges: frozenset, k: int) -> int:
    if not edges:
        return k**n
    e = next(iter(sorted(edges, key=sorted)))
    u, v = sorted(e)
    deleted = edges - {e}
    contracted = set()
    for f in deleted:
        a, b = tuple(f)
        a = u if a == v else a
        b = u if b == v else b
        if a != b:
            contracted.add(frozenset((a, b)))
    return _dc(n, deleted, k) - _dc(n - 1, frozenset(contracted), k)

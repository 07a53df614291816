"""Seeded instance families for both graph classes."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .graph import Graph
from .structure import class_check_planar6, girth, mad_below

FAMILIES = ("grid5", "vertexdisjoint4cycles", "girth10subdiv", "sparsetree2threads", "cycle")
PLANAR_FAMILIES = ("grid5", "vertexdisjoint4cycles", "cycle")
SPARSE_FAMILIES = ("girth10subdiv", "sparsetree2threads", "cycle")
MAX_ATTEMPTS = 50


class GenerationError(RuntimeError):
    pass


@dataclass
class InstanceBundle:
    graph: Graph
    lists: dict[int, frozenset[int]]
    alpha: dict[int, int]
    beta: dict[int, int]
    family: str = ""
    seed: int | None = None
    meta: dict[str, str] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers


def _rotation_from_coords(adj: dict[int, set[int]], pos: dict[int, tuple[float, float]]) -> dict[int, tuple[int, ...]]:
    rot = {}
    for v, nb in adj.items():
        x, y = pos[v]
        rot[v] = tuple(sorted(nb, key=lambda u: math.atan2(pos[u][1] - y, pos[u][0] - x)))
    return rot


def _relabel(adj: dict, rot: dict | None, keep: list) -> Graph:
    """Graph on 0..n-1 induced by ``keep`` (in the given order)."""
    ids = {v: i for i, v in enumerate(keep)}
    edges = [(ids[u], ids[w]) for u in keep for w in adj[u] if w in ids and ids[u] < ids[w]]
    rotation = None
    if rot is not None:
        rotation = {ids[v]: [ids[u] for u in rot[v] if u in ids] for v in keep}
    return Graph.from_edges(range(len(keep)), edges, rotation)


def _largest_component(adj: dict) -> list:
    g = nx.Graph()
    g.add_nodes_from(adj)
    g.add_edges_from((u, w) for u in adj for w in adj[u])
    comp = max(nx.connected_components(g), key=lambda c: (len(c), sorted(map(repr, c))))
    return sorted(comp, key=repr)


def degeneracy_order(g: Graph) -> list[int]:
    """Vertices in smallest-last removal order."""
    deg = {v: g.degree(v) for v in g.vertices}
    alive = set(g.vertices)
    order = []
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        order.append(v)
        alive.remove(v)
        for u in g.adj[v]:
            if u in alive:
                deg[u] -= 1
    return order


def greedy_list_coloring(g: Graph, lists, rng: random.Random) -> dict[int, int]:
    """Colour in reverse degeneracy order, picking uniformly among free colours."""
    for _ in range(MAX_ATTEMPTS):
        col: dict[int, int] = {}
        for v in reversed(degeneracy_order(g)):
            free = sorted(c for c in lists[v] if all(col.get(u) != c for u in g.adj[v]))
            if not free:
                break
            col[v] = rng.choice(free)
        else:
            return col
    raise GenerationError("greedy list coloring kept failing")


def random_lists(g: Graph, size: int, rng: random.Random, spread: int = 3) -> dict[int, frozenset[int]]:
    palette = list(range(size + rng.randint(0, spread)))
    return {v: frozenset(rng.sample(palette, size)) for v in sorted(g.vertices)}


# ---------------------------------------------------------------------------
# planar families


def _grid_dims(n: int, rng: random.Random) -> tuple[int, int]:
    # a subdivided r x c grid has about 1.5 r c vertices before deletions
    cells = max(4, int(n / 1.4))
    r = max(2, int(math.sqrt(cells)) + rng.randint(-1, 1))
    c = max(2, cells // r)
    return r, c


def _grid5_drawing(n: int, rng: random.Random, p_delete: float):
    r, c = _grid_dims(n, rng)
    pos: dict = {}
    adj: dict = {}

    def add(v, xy):
        pos[v] = xy
        adj.setdefault(v, set())

    def link(a, b):
        adj[a].add(b)
        adj[b].add(a)

    for i in range(r):
        for j in range(c):
            add((i, j), (float(j), float(i)))
    for i in range(r):
        for j in range(c - 1):
            link((i, j), (i, j + 1))
    for i in range(r - 1):
        for j in range(c):
            if (i + j) % 2:
                m = ("m", i, j)
                add(m, (float(j), i + 0.5))
                link((i, j), m)
                link(m, (i + 1, j))
            else:
                link((i, j), (i + 1, j))
    for u, w in sorted({tuple(sorted((u, w), key=repr)) for u in adj for w in adj[u]}, key=repr):
        if rng.random() < p_delete:
            adj[u].discard(w)
            adj[w].discard(u)
    return adj, pos


def _finish_embedded(adj, pos, max_n: int | None = None) -> Graph:
    keep = _largest_component(adj)
    if max_n is not None and len(keep) > max_n:
        # trim by breadth-first order from a corner to stay within size
        start = min(keep, key=lambda v: (pos[v], repr(v)))
        order = list(nx.bfs_tree(nx.Graph([(u, w) for u in adj for w in adj[u]]), start))
        sub = set(order[:max_n])
        adj = {v: adj[v] & sub for v in sub}
        keep = _largest_component(adj)
    rot = _rotation_from_coords({v: adj[v] for v in keep}, pos)
    return _relabel(adj, rot, keep)


def grid5(n: int, rng: random.Random) -> Graph:
    """Grid whose inner faces are all 5-faces, with random edge deletions."""
    adj, pos = _grid5_drawing(n, rng, rng.choice([0.0, 0.05, 0.1, 0.2]))
    return _finish_embedded(adj, pos, max_n=n)


def _glue_4cycles(g: Graph, rng: random.Random, budget: int) -> Graph:
    """Glue paths a x y b onto distinct edges ab, inside one face at ab."""
    rot = {v: list(g.rotation[v]) for v in g.vertices}
    edges = list(g.edges())
    rng.shuffle(edges)
    used: set[int] = set()
    nxt = max(g.vertices) + 1
    new_edges = list(edges)
    for a, b in edges:
        if budget <= 0:
            break
        if a in used or b in used:
            continue
        x, y = nxt, nxt + 1
        nxt += 2
        # x follows b around a, and y precedes a around b: both sit in the face
        # traced by the dart (b, a)
        rot[a].insert(rot[a].index(b) + 1, x)
        rot[b].insert(rot[b].index(a), y)
        rot[x], rot[y] = [y, a], [b, x]
        new_edges += [(a, x), (x, y), (y, b)]
        used.update((a, b))
        budget -= 1
    return Graph.from_edges(rot, new_edges, rot)


def _dodecahedron() -> Graph:
    d = nx.dodecahedral_graph()
    ok, pe = nx.check_planarity(d)
    assert ok
    return Graph.from_edges(d.nodes(), d.edges(), {v: list(pe.neighbors_cw_order(v)) for v in d})


def vertexdisjoint4cycles(n: int, rng: random.Random) -> Graph:
    """grid5 (or a dodecahedron) plus pairwise vertex-disjoint 4-cycles glued along edges."""
    if n >= 20 and rng.random() < 0.3:
        return _glue_4cycles(_dodecahedron(), rng, min((n - 20) // 2, rng.randint(0, 5)))
    adj, pos = _grid5_drawing(max(4, int(n * 0.75)), rng, rng.choice([0.0, 0.05, 0.1]))
    keep = set(_largest_component(adj))
    adj = {v: adj[v] & keep for v in keep}
    used: set = set()
    edges = sorted({tuple(sorted((u, w), key=repr)) for u in adj for w in adj[u]}, key=repr)
    rng.shuffle(edges)
    budget = max(1, n // 8)
    made = 0
    for a, b in edges:
        if made >= budget or len(adj) + 2 > n:
            break
        if a in used or b in used:
            continue
        (ax, ay), (bx, by) = pos[a], pos[b]
        dx, dy = bx - ax, by - ay
        side = rng.choice([1, -1])
        nx_, ny_ = -dy * side, dx * side
        norm = math.hypot(nx_, ny_)
        nx_, ny_ = 0.2 * nx_ / norm, 0.2 * ny_ / norm
        x, y = ("x", a, b), ("y", a, b)
        pos[x] = (ax + 0.25 * dx + nx_, ay + 0.25 * dy + ny_)
        pos[y] = (ax + 0.75 * dx + nx_, ay + 0.75 * dy + ny_)
        adj[x] = {a, y}
        adj[y] = {x, b}
        adj[a].add(x)
        adj[b].add(y)
        used.update((a, b))
        made += 1
    rot = _rotation_from_coords(adj, pos)
    order = sorted(adj, key=repr)
    return _relabel(adj, rot, order)


def cycle_graph(n: int, rng: random.Random | None = None) -> Graph:
    n = max(3, n)
    rot = {i: ((i - 1) % n, (i + 1) % n) for i in range(n)}
    return Graph.from_edges(range(n), [(i, (i + 1) % n) for i in range(n)], rot)


# ---------------------------------------------------------------------------
# sparse families

_CUBIC_BASES = {
    "theta": None,
    "k4": nx.complete_graph(4),
    "prism": nx.circular_ladder_graph(3),
    "cube": nx.hypercube_graph(3),
    "dodecahedron": nx.dodecahedral_graph(),
}


def _theta() -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_edges_from([(0, 1), (0, 1), (0, 1)])
    return g


def _subdivide_embedded(base, counts: dict, emb) -> Graph:
    """Subdivide edge i of ``base`` counts[i] times, keeping the embedding."""
    nodes = {v: i for i, v in enumerate(sorted(base.nodes(), key=repr))}
    nxt = len(nodes)
    adj: dict[int, list[int]] = {i: [] for i in nodes.values()}
    # dart (u, key-side) -> first vertex on that dart
    first: dict = {}
    for e, cnt in counts.items():
        u, w = e[0], e[1]
        chain = [nodes[u]] + list(range(nxt, nxt + cnt)) + [nodes[w]]
        nxt += cnt
        for c in chain[1:-1]:
            adj[c] = []
        for a, b in zip(chain, chain[1:]):
            adj[a].append(b)
            adj[b].append(a)
        first[(u, e)] = chain[1]
        first[(w, e)] = chain[-2]
    rot = {}
    for v, i in nodes.items():
        rot[i] = [first[(v, e)] for e in emb[v]]
    for c in adj:
        if c not in rot:
            rot[c] = list(adj[c])
    edges = [(a, b) for a in adj for b in adj[a] if a < b]
    return Graph.from_edges(range(nxt), edges, rot)


def _short_base_edges(base, ekeys, counts: dict, limit: int = 10) -> list:
    """Base edges lying on a cycle shorter than ``limit`` after subdivision."""
    out = []
    for e in ekeys:
        u, w = e[0], e[1]
        rest = nx.Graph()
        rest.add_nodes_from(base.nodes())
        for f in ekeys:
            if f == e:
                continue
            a, b = f[0], f[1]
            wt = counts[f] + 1
            if not rest.has_edge(a, b) or rest[a][b]["weight"] > wt:
                rest.add_edge(a, b, weight=wt)
        try:
            d = nx.dijkstra_path_length(rest, u, w)
        except nx.NetworkXNoPath:
            continue
        if d + counts[e] + 1 < limit:
            out.append(e)
    return out


def _random_tree(n: int, rng: random.Random) -> Graph:
    edges = [(v, rng.randrange(v)) for v in range(1, n)]
    adj = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return Graph.from_edges(range(n), edges, {v: sorted(adj[v]) for v in range(n)})


def girth10subdiv(n: int, rng: random.Random) -> Graph:
    """A cubic planar base with each edge subdivided, repaired to girth >= 10.

    Below 14 vertices no such graph has a cycle, so a random tree is used.
    """
    if n < 14:
        return _random_tree(max(n, 1), rng)
    sizes = {"theta": 14, "k4": 19, "prism": 6 + 9 * 2, "cube": 8 + 12 * 2, "dodecahedron": 50}
    fits = [b for b, s in sizes.items() if s <= n]
    name = rng.choice(fits)
    if name == "theta":
        base = _theta()
        ekeys = [(0, 1, i) for i in range(3)]
        emb = {0: ekeys, 1: list(reversed(ekeys))}
    else:
        base = nx.Graph(_CUBIC_BASES[name])
        ok, pe = nx.check_planarity(base)
        assert ok
        ekeys = [(u, w, 0) for u, w in base.edges()]
        canon = {frozenset((u, w)): (u, w, 0) for u, w, _ in ekeys}
        emb = {v: [canon[frozenset((v, u))] for u in pe.neighbors_cw_order(v)] for v in base.nodes()}
    best = None
    for _ in range(20):
        counts = {e: rng.randint(1, 3) for e in ekeys}
        if name == "dodecahedron":
            counts = {e: 1 for e in ekeys}
        while True:
            short = _short_base_edges(base, ekeys, counts)
            if not short:
                break
            counts[rng.choice(short)] += 1
        size = base.number_of_nodes() + sum(counts.values())
        if best is None or size < best[0]:
            best = (size, counts)
        if size <= n:
            break
    g = _subdivide_embedded(base, best[1], emb)
    gi = girth(g)
    if gi is not None and gi < 10:
        raise GenerationError("girth repair did not converge")
    if len(g) > n:
        # balanced theta: three 5-edge threads, 14 vertices
        base = _theta()
        ekeys = [(0, 1, i) for i in range(3)]
        g = _subdivide_embedded(base, {e: 4 for e in ekeys}, {0: ekeys, 1: list(reversed(ekeys))})
    return g


def sparsetree2threads(n: int, rng: random.Random) -> Graph:
    """Random tree with subdivided edges, then extra 2-threads while mad < 5/2."""
    n = max(5, n)
    core = max(2, n // 3)
    g = nx.Graph()
    g.add_node(0)
    for v in range(1, core):
        g.add_edge(v, rng.randrange(v))
    nxt = core
    for u, w in list(g.edges()):
        if rng.random() < 0.5 and nxt < n:
            g.remove_edge(u, w)
            g.add_edges_from([(u, nxt), (nxt, w)])
            nxt += 1
    misses = 0
    while nxt + 2 <= n and misses < 8:
        u, w = rng.sample(range(core), 2)
        g.add_edges_from([(u, nxt), (nxt, nxt + 1), (nxt + 1, w)])
        cand = Graph.from_edges(g.nodes(), g.edges())
        if mad_below(cand, Fraction(5, 2)):
            nxt += 2
            misses = 0
        else:
            g.remove_nodes_from([nxt, nxt + 1])
            misses += 1
    while nxt < n:
        g.add_edge(nxt, rng.randrange(nxt))
        nxt += 1
    return Graph.from_edges(g.nodes(), g.edges())


BUILDERS = {
    "grid5": grid5,
    "vertexdisjoint4cycles": vertexdisjoint4cycles,
    "girth10subdiv": girth10subdiv,
    "sparsetree2threads": sparsetree2threads,
    "cycle": cycle_graph,
}


def in_class(g: Graph, theorem: str) -> bool:
    if theorem == "planar6":
        return class_check_planar6(g).in_class
    return mad_below(g, Fraction(5, 2))


def default_theorem(family: str) -> str:
    return "planar6" if family in ("grid5", "vertexdisjoint4cycles") else "mad4"


def generate(family: str, n: int, seed: int, theorem: str | None = None) -> InstanceBundle:
    """Deterministic instance for (family, n, seed), class-checked before return."""
    if family not in BUILDERS:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    theorem = theorem or default_theorem(family)
    size = 6 if theorem == "planar6" else 4
    rng = random.Random(f"{family}:{n}:{seed}")
    for _ in range(MAX_ATTEMPTS):
        g = BUILDERS[family](n, rng)
        if not in_class(g, theorem):
            continue
        lists = random_lists(g, size, rng)
        alpha = greedy_list_coloring(g, lists, rng)
        beta = greedy_list_coloring(g, lists, rng)
        meta = {"family": family, "n": str(n), "seed": str(seed), "theorem": theorem}
        return InstanceBundle(g, lists, alpha, beta, family, seed, meta)
    raise GenerationError(f"{family}(n={n}, seed={seed}) produced no in-class instance")

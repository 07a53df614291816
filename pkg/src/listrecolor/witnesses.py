"""Small hand-built graphs containing one reducible configuration each.

Every vertex outside the configuration is a pendant "anchor", so a
sequence on the rest of the graph can recolor anchors freely up to k
times; that is the worst case the declared caps are computed against.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph
from .recolor import RecolorSequence


@dataclass
class Witness:
    pattern: str
    graph: Graph
    roles: dict[str, int]


class _Builder:
    def __init__(self):
        self.names: dict[str, int] = {}
        self.edges: list[tuple[int, int]] = []
        self.pos: dict[int, tuple[float, float]] = {}

    def v(self, name: str, xy: tuple[float, float] | None = None) -> int:
        if name not in self.names:
            self.names[name] = len(self.names)
        if xy is not None:
            self.pos[self.names[name]] = xy
        return self.names[name]

    def e(self, a: str, b: str) -> None:
        self.edges.append((self.v(a), self.v(b)))

    def path(self, *names: str) -> None:
        for a, b in zip(names, names[1:]):
            self.e(a, b)

    def anchor(self, name: str, label: str) -> None:
        """A pendant outside vertex hung from ``name``."""
        self.e(name, label)

    def graph(self, embedded: bool = False) -> Graph:
        n = len(self.names)
        rot = None
        if embedded:
            adj: dict[int, set[int]] = {i: set() for i in range(n)}
            for a, b in self.edges:
                adj[a].add(b)
                adj[b].add(a)
            rot = {
                v: sorted(adj[v], key=lambda u: math.atan2(self.pos[u][1] - self.pos[v][1], self.pos[u][0] - self.pos[v][0]))
                for v in range(n)
            }
        return Graph.from_edges(range(n), self.edges, rot)


def _polar(r: float, k: int, of: int, offset: float = 0.0) -> tuple[float, float]:
    ang = 2 * math.pi * k / of + offset
    return (r * math.cos(ang), r * math.sin(ang))


def _pendants(b: _Builder, name: str, count: int) -> None:
    """Hang ``count`` anchors off ``name``, pointing away from the origin."""
    x, y = b.pos[b.names[name]]
    base = math.atan2(y, x)
    for i in range(count):
        ang = base + (i - (count - 1) / 2) * 0.5
        b.v(f"o_{name}{i}", (x + 0.6 * math.cos(ang), y + 0.6 * math.sin(ang)))
        b.e(name, f"o_{name}{i}")


def _face5(b: _Builder) -> None:
    for i in range(5):
        b.v(f"v{i + 1}", _polar(1.0, i, 5, math.pi / 2))
    b.path("v1", "v2", "v3", "v4", "v5", "v1")


def planar_l34() -> Witness:
    b = _Builder()
    _face5(b)
    x2, y2 = b.pos[b.names["v2"]]
    b.v("x", (x2 * 1.8, y2 * 1.8))
    b.v("y", (x2 * 2.6, y2 * 2.6 + 0.4))
    b.path("v2", "x", "y")
    _pendants(b, "v1", 1)
    ang = math.atan2(y2, x2) + 0.8
    b.v("o_v2", (x2 + 0.6 * math.cos(ang), y2 + 0.6 * math.sin(ang)))
    b.e("v2", "o_v2")
    _pendants(b, "v3", 1)
    _pendants(b, "v4", 1)
    _pendants(b, "v5", 2)
    b.v("o_x", (x2 * 1.8 - 0.5, y2 * 1.8 - 0.5))
    b.e("x", "o_x")
    _pendants(b, "y", 2)
    g = b.graph(embedded=True)
    return Witness("L3.4", g, {k: b.names[k] for k in ("v1", "v2", "v3", "v4", "v5", "x", "y")})


def planar_l35() -> Witness:
    b = _Builder()
    _face5(b)
    (x1, y1), (x2, y2) = b.pos[b.names["v1"]], b.pos[b.names["v2"]]
    # square on v1 v2, outside the pentagon
    dx, dy = x2 - x1, y2 - y1
    nx_, ny_ = -dy, dx
    if nx_ * (x1 + x2) + ny_ * (y1 + y2) < 0:
        nx_, ny_ = -nx_, -ny_
    b.v("w", (x1 + nx_, y1 + ny_))
    b.v("u", (x2 + nx_, y2 + ny_))
    b.path("v1", "w", "u", "v2")
    _pendants(b, "v2", 1)
    _pendants(b, "v3", 1)
    _pendants(b, "v4", 1)
    _pendants(b, "v5", 2)
    _pendants(b, "u", 1)
    _pendants(b, "w", 2)
    g = b.graph(embedded=True)
    return Witness("L3.5", g, {k: b.names[k] for k in ("v1", "v2", "v3", "v4", "v5", "u", "w")})


# ---------------------------------------------------------------------------
# sparse configurations; anchors named o* are the outside vertices


def _hub(b: _Builder, name: str) -> None:
    """Give an outside thread end degree 3 so it ends the thread."""
    b.anchor(name, name + "_l1")
    b.anchor(name, name + "_l2")


def _v210(b: _Builder, c: str, tag: str) -> None:
    """3_{2,1,0} vertex ``c``: a 2-thread and a 1-thread to fresh hubs."""
    b.path(c, f"a{tag}", f"b{tag}", f"oA{tag}")
    b.path(c, f"m{tag}", f"oM{tag}")
    _hub(b, f"oA{tag}")
    _hub(b, f"oM{tag}")


def _v111(b: _Builder, c: str, tag: str) -> None:
    """Complete ``c``, which already has one 1-thread, to a 3_{1,1,1} vertex."""
    b.path(c, f"p{tag}", f"oP{tag}")
    b.path(c, f"q{tag}", f"oQ{tag}")
    _hub(b, f"oP{tag}")
    _hub(b, f"oQ{tag}")


def sparse_l3000() -> Witness:
    b = _Builder()
    b.e("v", "v1")
    b.e("v", "v2")
    b.e("v", "o0")
    _hub(b, "o0")
    _v210(b, "v1", "1")
    _v210(b, "v2", "2")
    return Witness("L3000", b.graph(), {k: b.names[k] for k in ("v", "v1", "v2")})


def sparse_l3100() -> Witness:
    b = _Builder()
    b.path("v", "v1", "u1")
    _v111(b, "u1", "u")
    b.e("v", "v2")
    _v210(b, "v2", "")
    b.e("v", "v3")
    _hub(b, "v3")
    return Witness("L3100", b.graph(), {k: b.names[k] for k in ("v", "v1", "v2", "u1")})


def sparse_l3100b() -> Witness:
    b = _Builder()
    b.path("v", "v1", "u1")
    _hub(b, "u1")
    b.e("v", "v2")
    _v210(b, "v2", "")
    b.e("v", "v3")
    b.path("v3", "w", "v3'")
    b.path("v3", "u", "oU")
    _hub(b, "oU")
    _v111(b, "v3'", "3")
    return Witness("L3100b", b.graph(), {k: b.names[k] for k in ("v", "v2", "v3", "v3'", "w")})


def _bad110(b: _Builder) -> None:
    """v = bad 3_{1,1,0}: 1-thread to a 3_{1,1,1} vertex v1', 1-thread to a hub."""
    b.path("v", "v1", "v1'")
    _v111(b, "v1'", "1")
    b.path("v", "v2", "oE2")
    _hub(b, "oE2")


def sparse_l3200() -> Witness:
    b = _Builder()
    _bad110(b)
    b.e("v", "v3")
    b.path("v3", "v3'", "x", "oX")
    _hub(b, "oX")
    b.e("v3", "oY")
    _hub(b, "oY")
    return Witness("L3200", b.graph(), {k: b.names[k] for k in ("v", "v1", "v3", "v1'", "v3'")})


def sparse_l3200b() -> Witness:
    b = _Builder()
    _bad110(b)
    b.e("v", "v3")
    b.path("v3", "r1", "oR1")
    b.path("v3", "r2", "oR2")
    _hub(b, "oR1")
    _hub(b, "oR2")
    return Witness("L3200b", b.graph(), {k: b.names[k] for k in ("v", "v1", "v3", "v1'")})


def sparse_l3110() -> Witness:
    b = _Builder()
    b.path("v", "v1", "v1'")
    b.path("v", "v2", "v2'")
    _v111(b, "v1'", "1")
    _v111(b, "v2'", "2")
    b.e("v", "oZ")
    _hub(b, "oZ")
    return Witness("L3110", b.graph(), {k: b.names[k] for k in ("v", "v1", "v2", "v1'", "v2'")})


def sparse_l42210() -> Witness:
    b = _Builder()
    b.path("v", "v1", "u1", "oE1")
    b.path("v", "v2", "u2", "oE2")
    b.path("v", "v3", "oE3")
    for h in ("oE1", "oE2", "oE3"):
        _hub(b, h)
    b.e("v", "v4")
    _v210(b, "v4", "")
    return Witness("L42210", b.graph(), {k: b.names[k] for k in ("v", "v3", "v4")})


WITNESSES = {
    "L3.4": planar_l34,
    "L3.5": planar_l35,
    "L3000": sparse_l3000,
    "L3100": sparse_l3100,
    "L3100b": sparse_l3100b,
    "L3200": sparse_l3200,
    "L3200b": sparse_l3200b,
    "L3110": sparse_l3110,
    "L42210": sparse_l42210,
}


# ---------------------------------------------------------------------------
# adversarial sequences on the rest of the graph


def stress_sequence(
    g: Graph,
    lists,
    start: dict[int, int],
    k: int,
    rng: random.Random,
    budget: int | None = None,
) -> RecolorSequence:
    """Random proper recoloring steps, favouring the least-recolored vertices.

    Each vertex moves at most ``k`` times; the walk stops when nothing can
    move or ``budget`` steps are reached.
    """
    col = dict(start)
    counts = {v: 0 for v in g.vertices}
    steps: list[tuple[int, int]] = []
    budget = k * len(g) if budget is None else budget
    verts = sorted(g.vertices)
    while len(steps) < budget:
        movable = []
        for v in verts:
            if counts[v] >= k:
                continue
            free = [c for c in sorted(lists[v]) if c != col[v] and all(col[u] != c for u in g.adj[v])]
            if free:
                movable.append((counts[v], v, free))
        if not movable:
            break
        low = min(m[0] for m in movable)
        _, v, free = rng.choice([m for m in movable if m[0] == low])
        c = rng.choice(free)
        col[v] = c
        counts[v] += 1
        steps.append((v, c))
    return RecolorSequence(dict(start), steps, k)


def extend_coloring(g: Graph, lists, partial: dict[int, int], rng: random.Random) -> dict[int, int]:
    """Greedily color the vertices missing from ``partial`` (random choices)."""
    col = dict(partial)
    for v in sorted(set(g.vertices) - set(col)):
        free = sorted(c for c in lists[v] if all(col.get(u) != c for u in g.adj[v]))
        if not free:
            raise ValueError(f"cannot extend coloring to {v}")
        col[v] = rng.choice(free)
    return col


# ---------------------------------------------------------------------------
# cap check: declared caps against the reference arithmetic, realized against declared


@dataclass
class WitnessCheck:
    pattern: str
    declared: dict[str, int]
    reference: dict[str, int]
    worst: dict[str, int]
    runs: int

    @property
    def cap_mismatches(self) -> dict[str, tuple[int | None, int]]:
        """Roles whose declared cap exceeds (or lacks) the reference value."""
        return {r: (self.declared.get(r), p) for r, p in self.reference.items() if self.declared.get(r) is None or self.declared[r] > p}

    @property
    def strict(self) -> dict[str, tuple[int, int]]:
        """Roles where the structure gives a tighter cap than the reference."""
        return {r: (self.declared[r], p) for r, p in self.reference.items() if r in self.declared and self.declared[r] < p}

    @property
    def overruns(self) -> dict[str, tuple[int, int]]:
        return {r: (w, self.declared[r]) for r, w in self.worst.items() if w > self.declared[r]}


def check_witness(pattern: str, seeds: Iterable[int] = range(10)) -> WitnessCheck:
    """Match the witness, compare caps, and replay recipes under stress sequences."""
    from .catalog import CATALOGS, REFERENCE_CAPS, ConfigMatch, Context, declared_caps
    from .pipeline import THEOREMS, apply_recipe
    from .recolor import verify

    w = WITNESSES[pattern]()
    g = w.graph
    theorem = "planar6" if pattern.startswith("L3.") else "mad4"
    size, k = THEOREMS[theorem]
    pat = next(p for p in CATALOGS[theorem] if p.id == pattern)
    full = {v: frozenset(range(size)) for v in g.vertices}
    found = None
    for roles, steps in pat.detect(Context(g, full, k)):
        caps = declared_caps(g, full, steps, k)
        if caps is not None:
            found = ConfigMatch(pattern, roles, steps, caps)
            break
    if found is None:
        raise ValueError(f"witness for {pattern} does not match its pattern")
    reference = {r: v for r, (_, v) in REFERENCE_CAPS[pattern].items()}
    worst: dict[str, int] = {}
    runs = 0
    for seed in seeds:
        rng = random.Random(f"{pattern}:{seed}")
        lists = {v: frozenset(rng.sample(range(size + 2), size)) for v in g.vertices}
        rest = g.delete(found.deleted)
        a = extend_coloring(rest, lists, {}, rng)
        base = stress_sequence(rest, lists, a, k, rng)
        alpha = extend_coloring(g, lists, a, rng)
        beta = extend_coloring(g, lists, base.end(), rng)
        seq = apply_recipe(g, lists, found, base, alpha, beta, k)
        rep = verify(g, lists, seq, beta, k)
        if not rep.ok:
            raise AssertionError(f"{pattern} seed {seed}: {rep.violation}")
        for role, v in found.roles.items():
            if v in found.caps:
                worst[role] = max(worst.get(role, 0), rep.counts[v])
        runs += 1
    return WitnessCheck(pattern, found.role_caps(), reference, worst, runs)

"""Reducible configurations: detectors and ordered re-insertion recipes.

Each detector yields candidate matches as ``(roles, steps)``.  A step
re-inserts some deleted vertices into the sequence built for the smaller
graph:

* ``key``    Key Lemma insertion of one vertex;
* ``t2``     2-thread extension over path (v1, v2, v3, v4), inserting v2, v3;
* ``t3``     3-thread extension over path (v1, .., v5), inserting v2, v3, v4;
* ``block``  joint insertion of a few vertices with cap k each.

Caps are evaluated on the concrete match by :func:`declared_caps`, which
also checks that every step sees the structure it needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from math import ceil
from typing import Callable, Iterator, Mapping

from .graph import Graph
from .structure import (
    FaceStructure,
    VertexTag,
    faces,
    match_face_pattern,
    tag_vertices,
)


@dataclass(frozen=True)
class Step:
    kind: str
    path: tuple[int, ...]

    @property
    def inserts(self) -> tuple[int, ...]:
        if self.kind == "key":
            return self.path
        if self.kind == "block":
            return self.path
        return self.path[1:-1]


def key(v: int) -> Step:
    return Step("key", (v,))


def t2(*path: int) -> Step:
    return Step("t2", tuple(path))


def t3(*path: int) -> Step:
    return Step("t3", tuple(path))


def block(*vs: int) -> Step:
    return Step("block", tuple(vs))


@dataclass
class ConfigMatch:
    pattern: str
    roles: dict[str, int]
    steps: list[Step]
    caps: dict[int, int] = field(default_factory=dict)

    @property
    def deleted(self) -> frozenset[int]:
        return frozenset(v for s in self.steps for v in s.inserts)

    def role_caps(self) -> dict[str, int]:
        return {r: self.caps[v] for r, v in self.roles.items() if v in self.caps}


class Context:
    """Lazily computed structure of the graph being reduced."""

    def __init__(self, g: Graph, lists: Mapping[int, frozenset[int]], k: int):
        self.g = g
        self.lists = lists
        self.k = k
        self._tags: dict[int, VertexTag] | None = None
        self._faces: FaceStructure | None = None

    @property
    def tags(self) -> dict[int, VertexTag]:
        if self._tags is None:
            self._tags = tag_vertices(self.g)
        return self._tags

    @property
    def faces(self) -> FaceStructure:
        if self._faces is None:
            self._faces = faces(self.g)
        return self._faces

    def kind(self, v: int) -> tuple[int, ...] | None:
        t = self.tags.get(v)
        return t.profile.counts if t else None

    def threads(self, v: int, length: int) -> list:
        return [t for t in self.tags[v].profile.threads if t.length == length]


def declared_caps(g: Graph, lists: Mapping[int, frozenset[int]], steps: list[Step], k: int) -> dict[int, int] | None:
    """Per-vertex caps implied by the recipe, or None if a step does not apply.

    Vertices outside the deleted set count as recolored k times.
    """
    deleted = [v for s in steps for v in s.inserts]
    if len(set(deleted)) != len(deleted) or not deleted:
        return None
    present = set(g.vertices) - set(deleted)
    caps: dict[int, int] = {}

    def cap_of(u: int) -> int:
        return caps.get(u, k)

    for s in steps:
        if s.kind == "key":
            (v,) = s.path
            nb = [u for u in g.adj[v] if u in present]
            slack = len(lists[v]) - len(nb) - 1
            if slack <= 0:
                return None
            caps[v] = ceil(sum(cap_of(u) for u in nb) / slack) + 1
        elif s.kind in ("t2", "t3"):
            path = s.path
            if any(u not in present for u in (path[0], path[-1])):
                return None
            inner = set(path[1:-1])
            after = present | inner
            for a, b in zip(path, path[1:]):
                if not g.has_edge(a, b):
                    return None
            for x in inner:
                if sum(1 for u in g.adj[x] if u in after) != 2:
                    return None
            if s.kind == "t2":
                sv4 = cap_of(path[3])
                if sv4 > k - 3:
                    return None
                caps[path[1]] = k
                caps[path[2]] = sv4 + 3
            else:
                caps[path[1]] = k
                caps[path[2]] = 4
                caps[path[3]] = k
        elif s.kind == "block":
            for v in s.path:
                caps[v] = k
        else:
            raise ValueError(f"unknown step kind {s.kind}")
        present.update(s.inserts)
    if any(c > k for c in caps.values()):
        return None
    return caps


# ---------------------------------------------------------------------------
# planar, 6-lists

Detector = Callable[[Context], Iterator[tuple[dict[str, int], list[Step]]]]


def _planar_2minus(ctx: Context):
    g = ctx.g
    for v in sorted(g.vertices):
        if g.degree(v) <= 2:
            yield {"v": v}, [key(v)]


def _planar_3_two3(ctx: Context):
    g = ctx.g
    for v in sorted(g.vertices):
        if g.degree(v) != 3:
            continue
        threes = sorted(u for u in g.adj[v] if g.degree(u) == 3)
        if len(threes) >= 2:
            u, w = threes[:2]
            yield {"v": v, "u": u, "w": w}, [key(v), block(u), block(w)]


def _planar_4_four3(ctx: Context):
    g = ctx.g
    for v in sorted(g.vertices):
        if g.degree(v) == 4 and all(g.degree(u) == 3 for u in g.adj[v]):
            us = sorted(g.adj[v])
            roles = {"v": v, **{f"u{i + 1}": u for i, u in enumerate(us)}}
            yield roles, [key(v)] + [block(u) for u in us]


def _special_pattern_faces(ctx: Context):
    fs = ctx.faces
    for fid, walk in enumerate(fs.faces):
        if len(walk) != 5:
            continue
        for lab in sorted(match_face_pattern(ctx.g, walk, (3, 4, 3, 3, 4))):
            yield fid, lab


def _planar_l34(ctx: Context):
    g = ctx.g
    for fid, (v1, v2, v3, v4, v5) in _special_pattern_faces(ctx):
        face = {v1, v2, v3, v4, v5}
        for x in sorted(g.adj[v2]):
            if x in face or g.degree(x) != 3:
                continue
            for y in sorted(g.adj[x]):
                if y in face or y == v2 or g.degree(y) != 3:
                    continue
                roles = {"v1": v1, "v2": v2, "v3": v3, "v4": v4, "v5": v5, "x": x, "y": y}
                steps = [key(v2), key(v5), key(y), key(v1), key(x), key(v4), key(v3)]
                yield roles, steps


def _planar_l35(ctx: Context):
    g, fs = ctx.g, ctx.faces
    for fid, (v1, v2, v3, v4, v5) in _special_pattern_faces(ctx):
        for a in (v1, v3):
            other = fs.across(fid, a, v2)
            walk = fs.faces[other]
            if other == fid or len(walk) != 4 or len(set(walk)) != 4:
                continue
            i = walk.index(v2)
            j = walk.index(a)
            # orient the 4-face as [a, v2, u, w]
            step = 1 if walk[(j + 1) % 4] == v2 else -1
            u = walk[(i + step) % 4]
            w = walk[(i + 2 * step) % 4]
            if {u, w} & {v1, v2, v3, v4, v5}:
                continue
            if [g.degree(z) for z in (a, v2, u, w)] != [3, 4, 3, 4]:
                continue
            roles = {"v1": v1, "v2": v2, "v3": v3, "v4": v4, "v5": v5, "u": u, "w": w}
            steps = [key(v2), key(v5), key(w), key(u), key(v1), key(v4), key(v3)]
            yield roles, steps


# ---------------------------------------------------------------------------
# sparse, 4-lists


def _short_cycle(ctx: Context):
    g = ctx.g
    for comp in g.components():
        if 3 <= len(comp) <= 4 and all(g.degree(v) == 2 for v in comp):
            yield {f"c{i}": v for i, v in enumerate(comp)}, [block(*comp)]


def _delta2(ctx: Context):
    g = ctx.g
    for v in sorted(g.vertices):
        if g.degree(v) <= 1:
            yield {"v": v}, [key(v)]


def _three_thread(ctx: Context):
    g = ctx.g
    for v3 in sorted(g.vertices):
        if g.degree(v3) != 2:
            continue
        v2, v4 = sorted(g.adj[v3])
        if g.degree(v2) != 2 or g.degree(v4) != 2:
            continue
        (v1,) = g.adj[v2] - {v3}
        (v5,) = g.adj[v4] - {v3}
        # v1 == v5 is allowed: the thread closes a 4-cycle through a 3+-vertex
        if len({v2, v3, v4}) != 3 or {v1, v5} & {v2, v3, v4}:
            continue
        yield {"v1": v1, "v2": v2, "v3": v3, "v4": v4, "v5": v5}, [t3(v1, v2, v3, v4, v5)]


def _distinct(threads: list) -> list:
    """Drop the second copy of a closed thread (it is seen from both sides)."""
    out, seen = [], set()
    for t in threads:
        key_ = frozenset(t.interior)
        if key_ not in seen:
            seen.add(key_)
            out.append(t)
    return out


def _thread_steps(v: int, twos: list) -> list[Step]:
    """Re-insert the interiors of 2-threads at v, nearest vertex anchored at v."""
    return [t2(t.end, t.interior[1], t.interior[0], v) for t in twos]


def _nearby2(ctx: Context):
    g = ctx.g
    for v in sorted(ctx.tags):
        d = g.degree(v)
        n2 = ctx.tags[v].profile.n2
        if not ((d == 3 and n2 >= 4) or (d == 4 and n2 >= 6)):
            continue
        ones, twos = ctx.threads(v, 1), _distinct(ctx.threads(v, 2))
        zeros = ctx.threads(v, 0)
        roles = {"v": v}
        for i, t in enumerate(ones):
            roles[f"m{i + 1}"] = t.interior[0]
        for i, t in enumerate(twos):
            roles[f"a{i + 1}"], roles[f"b{i + 1}"] = t.interior
        if len(ones) == 2 and not zeros:
            p, q = ones
            steps = [t3(p.end, p.interior[0], v, q.interior[0], q.end)]
        else:
            steps = [key(t.interior[0]) for t in ones] + [key(v)]
        yield roles, steps + _thread_steps(v, twos)


def _parts_210(ctx: Context, v: int):
    two = ctx.threads(v, 2)[0]
    one = ctx.threads(v, 1)[0]
    zero = ctx.threads(v, 0)[0]
    return two, one, zero


def _l3210(ctx: Context):
    g = ctx.g
    for v in sorted(ctx.tags):
        if ctx.kind(v) != (2, 1, 0):
            continue
        two, one, zero = _parts_210(ctx, v)
        u = zero.end
        a, b = two.interior
        (m,) = one.interior
        ku = ctx.kind(u)
        base = {"v": v, "a": a, "b": b, "m": m, "u": u}
        if ku == (1, 1, 0):
            r1, r2 = ctx.threads(u, 1)
            steps = [
                t3(r1.end, r1.interior[0], u, r2.interior[0], r2.end),
                t2(one.end, m, v, u),
                t2(two.end, b, a, v),
            ]
            yield {**base, "r1": r1.interior[0], "r2": r2.interior[0]}, steps
        elif ku == (2, 0, 0):
            (ut,) = ctx.threads(u, 2)
            r, s = ut.interior
            steps = [key(u), t2(one.end, m, v, u), t2(two.end, b, a, v), t2(ut.end, s, r, u)]
            yield {**base, "r": r, "s": s}, steps
        elif ku == (2, 1, 0):
            ut, uo, _ = _parts_210(ctx, u)
            r, s = ut.interior
            (p,) = uo.interior
            if {r, s} == {a, b}:
                # v and u share their 2-thread
                if p == m:
                    steps = [key(u), key(v), key(m), t2(v, a, b, u)]
                else:
                    steps = [key(m), key(p), key(v), key(u), t2(u, b, a, v)]
                yield {**base, "p": p}, steps
                continue
            steps = [
                key(m),
                key(v),
                t2(uo.end, p, u, v),
                t2(two.end, b, a, v),
                t2(ut.end, s, r, u),
            ]
            yield {**base, "r": r, "s": s, "p": p}, steps


def _l3111(ctx: Context):
    for v in sorted(ctx.tags):
        if ctx.kind(v) != (1, 1, 1):
            continue
        ones = ctx.threads(v, 1)
        for th in ones:
            u = th.end
            ku = ctx.kind(u)
            if ku not in ((1, 1, 1), (2, 1, 0)) or u == v:
                continue
            (x,) = th.interior
            y1, y2 = [t for t in ones if t is not th]
            vsteps = t3(y1.end, y1.interior[0], v, y2.interior[0], y2.end)
            roles = {"v": v, "u": u, "x": x, "y1": y1.interior[0], "y2": y2.interior[0]}
            if ku == (1, 1, 1):
                p1, p2 = [t for t in ctx.threads(u, 1) if x not in t.interior]
                mine = {y1.interior[0], y2.interior[0]}
                theirs = {p1.interior[0], p2.interior[0]}
                if mine & theirs:
                    # u and v share more than one 1-thread
                    shared = sorted(({x} | mine) & ({x} | theirs))
                    outer = sorted((mine | theirs) - set(shared))
                    steps = [key(w) for w in outer] + [key(v), key(u)] + [key(w) for w in shared]
                    yield {**roles, "p1": p1.interior[0], "p2": p2.interior[0]}, steps
                    continue
                steps = [vsteps, t3(p1.end, p1.interior[0], u, p2.interior[0], p2.end), key(x)]
                yield {**roles, "p1": p1.interior[0], "p2": p2.interior[0]}, steps
            else:
                (ut,) = ctx.threads(u, 2)
                a, b = ut.interior
                steps = [vsteps, key(u), key(x), t2(ut.end, b, a, u)]
                yield {**roles, "a": a, "b": b}, steps


def _l3000(ctx: Context):
    g = ctx.g
    for v in sorted(g.vertices):
        if g.degree(v) != 3:
            continue
        hits = sorted(u for u in g.adj[v] if ctx.kind(u) == (2, 1, 0) and _parts_210(ctx, u)[2].end == v)
        if len(hits) < 2:
            continue
        v1, v2 = hits[:2]
        roles = {"v": v, "v1": v1, "v2": v2}
        steps = [key(v)]
        tails = []
        for i, vi in enumerate((v1, v2), 1):
            two, one, _ = _parts_210(ctx, vi)
            (m,) = one.interior
            a, b = two.interior
            roles.update({f"m{i}": m, f"a{i}": a, f"b{i}": b})
            steps.append(t2(one.end, m, vi, v))
            tails.append(t2(two.end, b, a, vi))
        yield roles, steps + tails


def _l3100(ctx: Context, case: str = "a"):
    g = ctx.g
    for v in sorted(ctx.tags):
        if ctx.kind(v) != (1, 0, 0):
            continue
        (th1,) = ctx.threads(v, 1)
        (v1,) = th1.interior
        u1 = th1.end
        zeros = [t.end for t in ctx.threads(v, 0)]
        for v2 in zeros:
            if ctx.kind(v2) != (2, 1, 0) or _parts_210(ctx, v2)[2].end != v:
                continue
            (v3,) = [z for z in zeros if z != v2]
            two, one, _ = _parts_210(ctx, v2)
            a, b = two.interior
            (m,) = one.interior
            base = {"v": v, "v1": v1, "u1": u1, "v2": v2, "v3": v3, "a": a, "b": b, "m": m}
            if case == "a" and ctx.kind(u1) == (1, 1, 1):
                p, q = [t for t in ctx.threads(u1, 1) if v1 not in t.interior]
                steps = [
                    t3(p.end, p.interior[0], u1, q.interior[0], q.end),
                    key(v),
                    key(v1),
                    t2(one.end, m, v2, v),
                    t2(two.end, b, a, v2),
                ]
                yield {**base, "p": p.interior[0], "q": q.interior[0]}, steps
            tag3 = ctx.tags.get(v3)
            if case == "b" and tag3 is not None and ctx.kind(v3) == (1, 1, 0) and tag3.bad:
                for wt in ctx.threads(v3, 1):
                    v3p = wt.end
                    if ctx.kind(v3p) != (1, 1, 1):
                        continue
                    (w,) = wt.interior
                    (ut,) = [t for t in ctx.threads(v3, 1) if t is not wt]
                    (u,) = ut.interior
                    p, q = [t for t in ctx.threads(v3p, 1) if w not in t.interior]
                    steps = [
                        key(b),
                        t3(one.end, m, v2, a, b),
                        t3(p.end, p.interior[0], v3p, q.interior[0], q.end),
                        t2(u1, v1, v, v2),
                        t2(ut.end, u, v3, v),
                        key(w),
                    ]
                    roles = {**base, "w": w, "u": u, "v3'": v3p, "p": p.interior[0], "q": q.interior[0]}
                    yield roles, steps


def _l3200(ctx: Context, case: str = "a"):
    for v in sorted(ctx.tags):
        tag = ctx.tags[v]
        if ctx.kind(v) != (1, 1, 0) or not tag.bad:
            continue
        ones = ctx.threads(v, 1)
        (zero,) = ctx.threads(v, 0)
        v3 = zero.end
        k3 = ctx.kind(v3)
        for th1 in ones:
            v1p = th1.end
            if ctx.kind(v1p) != (1, 1, 1):
                continue
            (v1,) = th1.interior
            (th2,) = [t for t in ones if t is not th1]
            (v2,) = th2.interior
            uu, ww = [t for t in ctx.threads(v1p, 1) if v1 not in t.interior]
            (u,) = uu.interior
            (w,) = ww.interior
            base = {"v": v, "v1": v1, "v2": v2, "v3": v3, "v1'": v1p, "u": u, "w": w}
            t3_v1p = t3(uu.end, u, v1p, w, ww.end)
            if case == "a" and k3 == (2, 0, 0):
                (tt,) = ctx.threads(v3, 2)
                v3p, x = tt.interior
                steps = [
                    t3_v1p,
                    key(v3),
                    t2(th2.end, v2, v, v3),
                    t2(tt.end, x, v3p, v3),
                    key(v1),
                ]
                yield {**base, "v3'": v3p, "x": x}, steps
            elif case == "b" and k3 == (1, 1, 0) and ctx.threads(v3, 0)[0].end == v:
                r1, r2 = ctx.threads(v3, 1)
                steps = [
                    t3(r1.end, r1.interior[0], v3, r2.interior[0], r2.end),
                    t3_v1p,
                    t2(th2.end, v2, v, v3),
                    key(v1),
                ]
                yield {**base, "r1": r1.interior[0], "r2": r2.interior[0]}, steps


def _l3110(ctx: Context):
    for v in sorted(ctx.tags):
        if ctx.kind(v) != (1, 1, 0):
            continue
        ones = ctx.threads(v, 1)
        if not all(ctx.kind(t.end) == (1, 1, 1) for t in ones):
            continue
        roles = {"v": v}
        mids, tails = [], []
        for i, th in enumerate(ones, 1):
            (vi,) = th.interior
            vp = th.end
            p, q = [t for t in ctx.threads(vp, 1) if vi not in t.interior]
            roles.update({f"v{i}": vi, f"v{i}'": vp})
            mids.append(t3(p.end, p.interior[0], vp, q.interior[0], q.end))
            tails.append(key(vi))
        yield roles, [key(v)] + mids + tails


def _l42210(ctx: Context):
    for v in sorted(ctx.tags):
        if ctx.kind(v) != (2, 2, 1, 0):
            continue
        twos = ctx.threads(v, 2)
        (one,) = ctx.threads(v, 1)
        (zero,) = ctx.threads(v, 0)
        v4 = zero.end
        if ctx.kind(v4) != (2, 1, 0) or _parts_210(ctx, v4)[2].end != v:
            continue
        (v3,) = one.interior
        t4, o4, _ = _parts_210(ctx, v4)
        a, b = t4.interior
        (m,) = o4.interior
        roles = {"v": v, "v3": v3, "v4": v4, "a": a, "b": b, "m": m}
        for i, t in enumerate(twos, 1):
            roles[f"v{i}"], roles[f"u{i}"] = t.interior
        steps = [key(b), t3(o4.end, m, v4, a, b), t2(one.end, v3, v, v4)] + _thread_steps(v, twos)
        yield roles, steps


@dataclass(frozen=True)
class Pattern:
    id: str
    detect: Detector
    summary: str


CAT_P = [
    Pattern("L3.1", _planar_2minus, "2^- -vertex"),
    Pattern("L3.2", _planar_3_two3, "3-vertex adjacent to two 3-vertices"),
    Pattern("L3.3", _planar_4_four3, "4-vertex adjacent to four 3-vertices"),
    Pattern("L3.4", _planar_l34, "4-vertex of a (3,4,3,3,4)-face adjacent to a 3-vertex with a 3-neighbour off the face"),
    Pattern("L3.5", _planar_l35, "(3,4,3,3,4)-face adjacent to a (3,4,3,4)-face"),
]

CAT_S = [
    Pattern("cycle", _short_cycle, "2-regular component of length 3 or 4"),
    Pattern("delta2", _delta2, "1^- -vertex"),
    Pattern("3-thread", _three_thread, "3-thread"),
    Pattern("nearby2", _nearby2, "3-vertex with 4+ or 4-vertex with 6+ nearby 2-vertices"),
    Pattern("L3210", _l3210, "3_{2,1,0} adjacent to 3_{1,1,0}, 3_{2,0,0} or 3_{2,1,0}"),
    Pattern("L3111", _l3111, "3_{1,1,1} weak adjacent to 3_{2,1,0} or 3_{1,1,1}"),
    Pattern("L3000", _l3000, "3-vertex adjacent to two 3_{2,1,0}"),
    Pattern("L3100", partial(_l3100, case="a"), "3_{1,0,0} with a 3_{2,1,0} neighbour, weak adjacent to 3_{1,1,1}"),
    Pattern("L3100b", partial(_l3100, case="b"), "3_{1,0,0} with a 3_{2,1,0} neighbour, adjacent to a bad 3_{1,1,0}"),
    Pattern("L3200", partial(_l3200, case="a"), "bad 3_{1,1,0} adjacent to 3_{2,0,0}"),
    Pattern("L3200b", partial(_l3200, case="b"), "bad 3_{1,1,0} adjacent to 3_{1,1,0}"),
    Pattern("L3110", _l3110, "3_{1,1,0} weak adjacent to two 3_{1,1,1}"),
    Pattern("L42210", _l42210, "4_{2,2,1,0} adjacent to 3_{2,1,0}"),
]

CATALOGS = {"planar6": CAT_P, "mad4": CAT_S}

# reference cap arithmetic per role: role -> (expression, value)
REFERENCE_CAPS: dict[str, dict[str, tuple[str, int]]] = {
    "L3.4": {
        "v2": ("ceil(48/4)+1", 13),
        "v5": ("ceil(2*48/3)+1", 33),
        "y": ("ceil(2*48/3)+1", 33),
        "v1": ("ceil((33+48+13)/2)+1", 48),
        "x": ("ceil((33+48+13)/2)+1", 48),
        "v4": ("ceil((33+48)/3)+1", 28),
        "v3": ("ceil((28+48+13)/2)+1", 46),
    },
    "L3.5": {
        "v2": ("ceil(48/4)+1", 13),
        "v5": ("ceil(2*48/3)+1", 33),
        "w": ("ceil(2*48/3)+1", 33),
        "u": ("ceil((13+48+33)/2)+1", 48),
        "v1": ("ceil((13+48+33)/2)+1", 48),
        "v4": ("ceil((33+48)/3)+1", 28),
        "v3": ("ceil((28+13+48)/2)+1", 46),
    },
    "L3000": {"v": ("ceil(18/2)+1", 10), "v1": ("10+3", 13), "v2": ("10+3", 13)},
    "L3100": {"v": ("ceil(18/2)+1", 10), "v1": ("ceil((10+4)/(4-2-1))+1", 15), "v2": ("10+3", 13)},
    "L3100b": {"v2": ("4", 4), "v3'": ("4", 4), "v": ("4+3", 7), "v3": ("7+3", 10), "w": ("ceil((10+4)/(4-2-1))+1", 15)},
    "L3200": {"v1'": ("4", 4), "v3": ("18/2+1", 10), "v": ("10+3", 13), "v3'": ("10+3", 13), "v1": ("ceil((13+4)/(4-2-1))+1", 18)},
    "L3200b": {"v3": ("4", 4), "v1'": ("4", 4), "v": ("4+3", 7), "v1": ("ceil((7+4)/(4-2-1))+1", 12)},
    "L3110": {"v": ("18/2+1", 10), "v1'": ("4", 4), "v2'": ("4", 4), "v1": ("ceil((10+4)/(4-2-1))+1", 15), "v2": ("ceil((10+4)/(4-2-1))+1", 15)},
    "L42210": {"v4": ("4", 4), "v": ("4+3", 7)},
}


def eval_cap(expr: str) -> int:
    value = eval(expr, {"__builtins__": {}}, {"ceil": ceil})
    return int(value)

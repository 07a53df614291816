"""Structural vocabulary: faces, face patterns, short cycles, mad, threads, tags."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import networkx as nx

from .graph import Graph, GraphError

# ---------------------------------------------------------------------------
# faces


@dataclass
class FaceStructure:
    faces: list[tuple[int, ...]]
    dart_face: dict[tuple[int, int], int]
    incidence: dict[int, list[int]]

    def degree(self, f: int) -> int:
        return len(self.faces[f])

    def face_of_dart(self, u: int, v: int) -> int:
        return self.dart_face[(u, v)]

    def across(self, f: int, u: int, v: int) -> int:
        """Face on the other side of edge uv, seen from face ``f``."""
        a, b = self.dart_face[(u, v)], self.dart_face[(v, u)]
        return b if a == f else a


def faces(g: Graph) -> FaceStructure:
    """Trace the faces of an embedded graph from its rotation system."""
    if g.rotation is None:
        raise GraphError("graph has no rotation system")
    rot = g.rotation
    pos = {v: {u: i for i, u in enumerate(rot[v])} for v in g.vertices}
    dart_face: dict[tuple[int, int], int] = {}
    walks: list[tuple[int, ...]] = []
    for u in sorted(g.vertices):
        for v in rot[u]:
            if (u, v) in dart_face:
                continue
            fid = len(walks)
            walk = []
            a, b = u, v
            while (a, b) not in dart_face:
                dart_face[(a, b)] = fid
                walk.append(a)
                order = rot[b]
                c = order[(pos[b][a] + 1) % len(order)]
                a, b = b, c
            walks.append(tuple(walk))
    for v in sorted(g.vertices):
        if not g.adj[v]:
            walks.append((v,))
    incidence: dict[int, list[int]] = {v: [] for v in g.vertices}
    for fid, walk in enumerate(walks):
        if len(walk) == 1 and not g.adj[walk[0]]:
            continue
        for v in walk:
            incidence[v].append(fid)
    return FaceStructure(walks, dart_face, incidence)


def euler_defects(g: Graph) -> list[tuple[int, int]]:
    """Components whose rotation system is not a sphere embedding, as (root, V-E+F)."""
    fs = faces(g)
    bad = []
    comp_of = {}
    comps = g.components()
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    nfaces = [0] * len(comps)
    for walk in fs.faces:
        nfaces[comp_of[walk[0]]] += 1
    for i, comp in enumerate(comps):
        e = sum(len(g.adj[v]) for v in comp) // 2
        chi = len(comp) - e + nfaces[i]
        if chi != 2:
            bad.append((comp[0], chi))
    return bad


# ---------------------------------------------------------------------------
# patterns: entries are ints (exact degree) or strings like "5+" / "3-"


def _deg_ok(d: int, want: int | str) -> bool:
    if isinstance(want, int):
        return d == want
    if want.endswith("+"):
        return d >= int(want[:-1])
    if want.endswith("-"):
        return d <= int(want[:-1])
    return d == int(want)


def labelings(walk: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All rotations and reflections of a cyclic walk."""
    k = len(walk)
    for seq in (tuple(walk), tuple(reversed(walk))):
        for i in range(k):
            yield seq[i:] + seq[:i]


def match_face_pattern(g: Graph, walk: Sequence[int], pattern: Sequence[int | str]) -> list[tuple[int, ...]]:
    """Labelings of ``walk`` whose vertex degrees fit ``pattern`` position by position."""
    if len(walk) != len(pattern) or len(set(walk)) != len(walk):
        return []
    out = []
    for lab in labelings(walk):
        if all(_deg_ok(g.degree(v), p) for v, p in zip(lab, pattern)):
            if lab not in out:
                out.append(lab)
    return out


def face_pattern(g: Graph, walk: Sequence[int]) -> tuple[int, ...]:
    """Canonical incident-degree tuple, minimal over rotations and reflections."""
    return min(tuple(g.degree(v) for v in lab) for lab in labelings(walk))


# ---------------------------------------------------------------------------
# short cycles


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for a in sorted(g.vertices):
        for b in sorted(g.adj[a]):
            if b <= a:
                continue
            for c in sorted(g.adj[a] & g.adj[b]):
                if c > b:
                    out.append((a, b, c))
    return out


def four_cycles(g: Graph) -> list[tuple[int, int, int, int]]:
    """Each 4-cycle once, as (a, b, d, c) with a minimal and b < c."""
    out = []
    for a in sorted(g.vertices):
        nb = sorted(w for w in g.adj[a] if w > a)
        for i, b in enumerate(nb):
            for c in nb[i + 1:]:
                for d in sorted(g.adj[b] & g.adj[c]):
                    if d > a:
                        out.append((a, b, d, c))
    return out


def girth(g: Graph) -> int | None:
    best = None
    for s in g.vertices:
        dist = {s: 0}
        parent = {s: None}
        q = deque([s])
        while q:
            x = q.popleft()
            if best is not None and 2 * dist[x] + 1 >= best:
                break
            for y in g.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    q.append(y)
                elif parent[x] != y:
                    length = dist[x] + dist[y] + 1
                    if best is None or length < best:
                        best = length
    return best


@dataclass
class ClassReport:
    triangles: list[tuple[int, int, int]] = field(default_factory=list)
    intersecting_four_cycles: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    embedding_errors: list[str] = field(default_factory=list)

    @property
    def in_class(self) -> bool:
        return not (self.triangles or self.intersecting_four_cycles or self.embedding_errors)

    def lines(self) -> list[str]:
        out = []
        for t in self.triangles:
            out.append("3-cycle " + " ".join(map(str, t)))
        for c1, c2 in self.intersecting_four_cycles:
            out.append("intersecting 4-cycles " + " ".join(map(str, c1)) + " | " + " ".join(map(str, c2)))
        out.extend(self.embedding_errors)
        return out


def class_check_planar6(g: Graph) -> ClassReport:
    """No 3-cycles, no two 4-cycles sharing a vertex, sphere embedding when a rotation is given."""
    rep = ClassReport()
    rep.triangles = triangles(g)
    cyc = four_cycles(g)
    for i in range(len(cyc)):
        for j in range(i + 1, len(cyc)):
            if set(cyc[i]) & set(cyc[j]):
                rep.intersecting_four_cycles.append((cyc[i], cyc[j]))
    if g.rotation is None:
        rep.embedding_errors.append("missing rotation system")
    else:
        for root, chi in euler_defects(g):
            rep.embedding_errors.append(f"component of {root} has V-E+F={chi}, not a planar embedding")
    return rep


# ---------------------------------------------------------------------------
# maximum average degree


def _denser_than(g: Graph, lam: Fraction) -> set[int] | None:
    """A vertex set H with 2|E(H)|/|V(H)| > lam, or None."""
    p, q = lam.numerator, lam.denominator
    edges = g.edges()
    net = nx.DiGraph()
    for i, (u, v) in enumerate(edges):
        net.add_edge("s", ("e", i), capacity=2 * q)
        net.add_edge(("e", i), ("v", u))
        net.add_edge(("e", i), ("v", v))
    for v in g.vertices:
        net.add_edge(("v", v), "t", capacity=p)
    if not edges:
        return None
    cut, (side, _) = nx.minimum_cut(net, "s", "t")
    if 2 * q * len(edges) - cut > 0:
        return {x[1] for x in side if isinstance(x, tuple) and x[0] == "v"}
    return None


def mad_with_witness(g: Graph) -> tuple[Fraction, frozenset[int]]:
    """Exact maximum average degree and a vertex set attaining it."""
    n = len(g)
    if n == 0:
        raise GraphError("mad of the empty graph is undefined")
    m = g.num_edges()
    if m == 0:
        return Fraction(0), frozenset([min(g.vertices)])
    cands = sorted({Fraction(2 * e, k) for k in range(1, n + 1) for e in range(0, min(m, k * (k - 1) // 2) + 1)})
    lo, hi = 0, len(cands) - 1  # cands[hi] is never exceeded
    witness = None
    while lo < hi:
        mid = (lo + hi) // 2
        h = _denser_than(g, cands[mid])
        if h is None:
            hi = mid
        else:
            lo = mid + 1
            witness = h
    value = cands[lo]
    if witness is None:
        witness = set(g.vertices)
    sub = g.induced(witness)
    # the strict-density witness found at the last success already has density >= value
    assert Fraction(2 * sub.num_edges(), len(sub)) == value
    return value, frozenset(witness)


def mad(g: Graph) -> Fraction:
    return mad_with_witness(g)[0]


def mad_below(g: Graph, bound: Fraction) -> bool:
    """Decide mad(g) < bound with a single cut.

    Subgraph densities are 2e/k with k <= n, so a density below p/q is at
    most p/q - 1/(qn); testing strict excess over p/q - 1/(2qn) is exact.
    """
    if not g.vertices:
        return True
    bound = Fraction(bound)
    return _denser_than(g, bound - Fraction(1, 2 * bound.denominator * len(g))) is None


# ---------------------------------------------------------------------------
# threads


@dataclass(frozen=True)
class Thread:
    start: int
    interior: tuple[int, ...]
    end: int

    @property
    def length(self) -> int:
        return len(self.interior)


def walk_thread(g: Graph, v: int, u: int) -> Thread:
    """Maximal thread leaving ``v`` through neighbour ``u``."""
    interior = []
    prev, cur = v, u
    while cur != v and g.degree(cur) == 2:
        interior.append(cur)
        a, b = tuple(g.adj[cur])
        prev, cur = cur, (b if a == prev else a)
    return Thread(v, tuple(interior), cur)


@dataclass
class ThreadProfile:
    vertex: int
    threads: list[Thread]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(sorted((t.length for t in self.threads), reverse=True))

    @property
    def n2(self) -> int:
        return sum(t.length for t in self.threads)

    @property
    def kind(self) -> str:
        return f"{len(self.threads)}_{{{','.join(map(str, self.counts))}}}"


def thread_profile(g: Graph, v: int) -> ThreadProfile:
    if g.degree(v) < 3:
        raise GraphError(f"thread profile needs a 3+-vertex, {v} has degree {g.degree(v)}")
    return ThreadProfile(v, [walk_thread(g, v, u) for u in sorted(g.adj[v])])


def has_kind(g: Graph, v: int, counts: tuple[int, ...]) -> bool:
    return g.degree(v) == len(counts) and thread_profile(g, v).counts == counts


@dataclass
class VertexTag:
    vertex: int
    profile: ThreadProfile
    weak_neighbors: list[int]
    nearby: list[int]
    bad: bool = False
    rich_in: list[int] = field(default_factory=list)
    poor_in: list[int] = field(default_factory=list)


def tag_vertices(g: Graph) -> dict[int, VertexTag]:
    tags = {}
    for v in sorted(g.vertices):
        if g.degree(v) < 3:
            continue
        prof = thread_profile(g, v)
        weak = [t.end for t in prof.threads if t.length == 1 and t.end != v and g.degree(t.end) >= 3]
        nearby = [x for t in prof.threads for x in t.interior]
        tags[v] = VertexTag(v, prof, weak, nearby)
    for v, tag in tags.items():
        if tag.profile.counts == (1, 1, 0):
            tag.bad = any(tags[u].profile.counts == (1, 1, 1) for u in tag.weak_neighbors if u in tags)
    return tags


# ---------------------------------------------------------------------------
# special 5-faces

SPECIAL_FACE = (3, 4, 3, 3, 4)
SPECIAL_PARTNER = (3, 4, 4, 3)


@dataclass(frozen=True)
class SpecialFace:
    face: int
    labeling: tuple[int, ...]
    partner: int

    @property
    def poor(self) -> int:
        return self.labeling[1]

    @property
    def rich(self) -> int:
        return self.labeling[4]


def special_faces(fs: FaceStructure, g: Graph, partner: tuple[int, ...] = SPECIAL_PARTNER) -> list[SpecialFace]:
    """(3,4,3,3,4)-faces whose v1v2 edge lies on a face of pattern ``partner``.

    The partner face must contain v1 and v2 in degree positions consistent
    with the partner pattern.
    """
    out = []
    for fid, walk in enumerate(fs.faces):
        if len(walk) != 5:
            continue
        for lab in match_face_pattern(g, walk, SPECIAL_FACE):
            v1, v2 = lab[0], lab[1]
            other = fs.across(fid, v1, v2)
            owalk = fs.faces[other]
            if other == fid or len(owalk) != 4:
                continue
            if match_face_pattern(g, owalk, partner):
                out.append(SpecialFace(fid, lab, other))
                break
    return out

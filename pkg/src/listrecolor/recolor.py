"""Recoloring sequences: verification, the Key Lemma extension, thread extensions."""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from math import ceil
from typing import Iterable, Mapping, Sequence

from .graph import Graph

ListAssignment = Mapping[int, frozenset[int]]
Coloring = Mapping[int, int]


class ExtensionError(ValueError):
    """An extension could not be built within the requested caps."""


@dataclass
class RecolorSequence:
    start: dict[int, int]
    steps: list[tuple[int, int]] = field(default_factory=list)
    k: int | None = None

    def end(self) -> dict[int, int]:
        col = dict(self.start)
        for v, c in self.steps:
            col[v] = c
        return col

    def counts(self) -> Counter:
        return Counter(v for v, _ in self.steps)

    def count(self, v: int) -> int:
        return sum(1 for w, _ in self.steps if w == v)

    def restrict(self, keep: Iterable[int]) -> "RecolorSequence":
        keep = set(keep)
        return RecolorSequence(
            {v: c for v, c in self.start.items() if v in keep},
            [(v, c) for v, c in self.steps if v in keep],
            self.k,
        )

    def __len__(self) -> int:
        return len(self.steps)


def is_proper(g: Graph, lists: ListAssignment, col: Coloring) -> bool:
    return first_conflict(g, lists, col) is None


def first_conflict(g: Graph, lists: ListAssignment, col: Coloring) -> str | None:
    for v in sorted(g.vertices):
        if v not in col:
            return f"vertex {v} is uncolored"
        if col[v] not in lists[v]:
            return f"vertex {v} has off-list color {col[v]}"
    for u, v in g.edges():
        if col[u] == col[v]:
            return f"edge {u}-{v} is monochromatic"
    return None


@dataclass
class VerifyReport:
    ok: bool
    counts: dict[int, int]
    violation: tuple[int, str] | None
    end: dict[int, int]

    @property
    def max_count(self) -> int:
        return max(self.counts.values(), default=0)


def verify(
    g: Graph,
    lists: ListAssignment,
    seq: RecolorSequence,
    target: Coloring | None = None,
    k: int | None = None,
) -> VerifyReport:
    """Replay ``seq`` and report the first violation (step numbers are 1-based)."""
    counts = {v: 0 for v in g.vertices}
    col = dict(seq.start)
    problem = first_conflict(g, lists, col)
    extra = set(col) - g.vertices
    if problem is None and extra:
        problem = f"start colors unknown vertices {sorted(extra)}"
    if problem is not None:
        return VerifyReport(False, counts, (0, "start: " + problem), col)
    for i, (v, c) in enumerate(seq.steps, 1):
        if v not in g.vertices:
            return VerifyReport(False, counts, (i, f"unknown vertex {v}"), col)
        if c == col[v]:
            return VerifyReport(False, counts, (i, f"vertex {v} already has color {c}"), col)
        if c not in lists[v]:
            return VerifyReport(False, counts, (i, f"color {c} not in list of {v}"), col)
        for u in g.adj[v]:
            if col[u] == c:
                return VerifyReport(False, counts, (i, f"edge {v}-{u} monochromatic"), col)
        col[v] = c
        counts[v] += 1
        if k is not None and counts[v] > k:
            return VerifyReport(False, counts, (i, f"vertex {v} recolored more than {k} times"), col)
    if target is not None:
        for v in sorted(g.vertices):
            if col[v] != target[v]:
                return VerifyReport(False, counts, (len(seq.steps) + 1, f"end color of {v} is {col[v]}, target {target[v]}"), col)
    return VerifyReport(True, counts, None, col)


# ---------------------------------------------------------------------------
# Key Lemma


def key_lemma_cap(t: int, list_size: int, deg: int) -> int:
    slack = list_size - deg - 1
    if slack <= 0:
        raise ValueError(f"no slack: |L(v)|={list_size}, d(v)={deg}")
    return ceil(t / slack) + 1


def key_lemma_extend(
    g: Graph,
    lists: ListAssignment,
    v: int,
    seq: RecolorSequence,
    alpha_v: int,
    beta_v: int,
) -> RecolorSequence:
    """Insert ``v`` into a sequence for g - v, moving v only when forced.

    At a forced move v takes the free color whose next adoption by a
    neighbour lies furthest ahead (ties: beta_v, then the smallest id), so
    v moves at most ceil(t / (|L(v)| - d(v) - 1)) + 1 times.
    """
    nbrs = g.neighbors(v)
    key_lemma_cap(0, len(lists[v]), len(nbrs))
    if alpha_v not in lists[v] or beta_v not in lists[v]:
        raise ValueError(f"endpoint colors of {v} must come from its list")
    start_nb = Counter(seq.start[u] for u in nbrs)
    end_nb = Counter(c for u, c in seq.end().items() if u in nbrs)
    if start_nb[alpha_v] or end_nb[beta_v]:
        raise ValueError(f"extended endpoints are improper at {v}")

    adoptions: dict[int, list[int]] = {}
    for i, (w, c) in enumerate(seq.steps):
        if w in nbrs:
            adoptions.setdefault(c, []).append(i)
    on_nbrs = Counter(start_nb)
    nb_col = {u: seq.start[u] for u in nbrs}
    cur = alpha_v
    out: list[tuple[int, int]] = []
    never = len(seq.steps) + 1
    for i, (w, c) in enumerate(seq.steps):
        if w in nbrs:
            if c == cur:
                best = None
                for y in sorted(lists[v]):
                    if y == cur or on_nbrs[y]:
                        continue
                    pos = adoptions.get(y, [])
                    j = bisect_right(pos, i)
                    nxt = pos[j] if j < len(pos) else never
                    rank = (nxt, y == beta_v, -y)
                    if best is None or rank > best[0]:
                        best = (rank, y)
                cur = best[1]
                out.append((v, cur))
            on_nbrs[nb_col[w]] -= 1
            on_nbrs[c] += 1
            nb_col[w] = c
        out.append((w, c))
    if cur != beta_v:
        out.append((v, beta_v))
    start = dict(seq.start)
    start[v] = alpha_v
    return RecolorSequence(start, out, seq.k)


# ---------------------------------------------------------------------------
# simultaneous insertion of a small block


def _pareto_insert(front: list, counts: tuple[int, ...], node: int, limit: int) -> bool:
    for c, _ in front:
        if all(a <= b for a, b in zip(c, counts)):
            return False
    front[:] = [(c, n) for c, n in front if not all(a <= b for a, b in zip(counts, c))]
    front.append((counts, node))
    if len(front) > limit:
        front.sort(key=lambda cn: (sum(cn[0]), cn[0]))
        del front[limit:]
        return any(n == node for _, n in front)
    return True


def extend_block(
    g: Graph,
    lists: ListAssignment,
    block: Sequence[int],
    seq: RecolorSequence,
    alpha: Coloring,
    beta: Coloring,
    caps: Mapping[int, int],
    phase_depth: int = 2,
    front_limit: int = 24,
) -> RecolorSequence:
    """Insert the vertices of ``block`` together, within per-vertex caps.

    Dynamic programme over the phases between consecutive recolorings of
    the block's outside neighbours; each phase allows up to
    ``phase_depth`` block moves, the last one enough to reach ``beta``.
    Count vectors are kept as Pareto fronts per block coloring.
    """
    block = list(block)
    idx = {x: i for i, x in enumerate(block)}
    n = len(block)
    inner = [[idx[u] for u in g.neighbors(x) if u in idx] for x in block]
    outer = [[u for u in g.neighbors(x) if u not in idx] for x in block]
    boundary = {u for out in outer for u in out}
    palette = [sorted(lists[x]) for x in block]
    cap = tuple(caps[x] for x in block)
    cur = {u: seq.start[u] for u in boundary}

    start = tuple(alpha[x] for x in block)
    goal = tuple(beta[x] for x in block)
    nodes: list[tuple[int, int, int, int]] = [(-1, -1, -1, -1)]  # parent, block index, color, phase
    states: dict[tuple[int, ...], list] = {start: [((0,) * n, 0)]}

    def closure(phase: int, depth: int) -> None:
        frontier = [(col, cnt, node) for col, fr in states.items() for cnt, node in fr]
        for _ in range(depth):
            nxt = []
            for col, cnt, node in frontier:
                for i in range(n):
                    if cnt[i] >= cap[i]:
                        continue
                    taken = {cur[u] for u in outer[i]}
                    taken.update(col[j] for j in inner[i])
                    for y in palette[i]:
                        if y == col[i] or y in taken:
                            continue
                        ncol = col[:i] + (y,) + col[i + 1:]
                        ncnt = cnt[:i] + (cnt[i] + 1,) + cnt[i + 1:]
                        nodes.append((node, i, y, phase))
                        nid = len(nodes) - 1
                        if _pareto_insert(states.setdefault(ncol, []), ncnt, nid, front_limit):
                            nxt.append((ncol, ncnt, nid))
            frontier = nxt
            if not frontier:
                break

    events = [i for i, (w, _) in enumerate(seq.steps) if w in boundary]
    for phase, i in enumerate(events):
        closure(phase, phase_depth)
        w, c = seq.steps[i]
        hit = [j for j in range(n) if w in outer[j]]
        for col in list(states):
            if any(col[j] == c for j in hit):
                del states[col]
        if not states:
            raise ExtensionError(f"block {block} cannot absorb step {i} ({w} -> {c}) within caps {cap}")
        cur[w] = c
    final_phase = len(events)
    closure(final_phase, 2 * n + 2)
    if goal not in states:
        raise ExtensionError(f"block {block} cannot reach its target coloring within caps {cap}")
    best_cnt, best_node = min(states[goal], key=lambda cn: (sum(cn[0]), cn[0]))

    moves_by_phase: dict[int, list[tuple[int, int]]] = {}
    node = best_node
    while node > 0:
        parent, i, y, phase = nodes[node]
        moves_by_phase.setdefault(phase, []).append((block[i], y))
        node = parent
    for mv in moves_by_phase.values():
        mv.reverse()

    out: list[tuple[int, int]] = []
    ev = {i: p for p, i in enumerate(events)}
    for i, step in enumerate(seq.steps):
        if i in ev:
            out.extend(moves_by_phase.get(ev[i], ()))
        out.append(step)
    out.extend(moves_by_phase.get(final_phase, ()))
    new_start = dict(seq.start)
    new_start.update(zip(block, start))
    return RecolorSequence(new_start, out, seq.k)


# ---------------------------------------------------------------------------
# thread extensions


def _check_thread(h: Graph, path: Sequence[int]) -> None:
    for a, b in zip(path, path[1:]):
        if not h.has_edge(a, b):
            raise ExtensionError(f"{a}-{b} is not an edge, thread {tuple(path)} not present")
    for x in path[1:-1]:
        if h.degree(x) != 2:
            raise ExtensionError(f"interior vertex {x} of thread {tuple(path)} has degree {h.degree(x)}")


def extend_2thread(
    h: Graph,
    lists: ListAssignment,
    thread: Sequence[int],
    seq: RecolorSequence,
    alpha: Coloring,
    beta: Coloring,
    k: int,
    s: int | None = None,
) -> RecolorSequence:
    """Extend over the interior v2, v3 of a 2-thread v1 v2 v3 v4.

    v3 is recolored at most s + 3 times, where s counts the moves of v4.
    """
    v1, v2, v3, v4 = thread
    _check_thread(h, thread)
    if s is None:
        s = seq.count(v4)
    if s > k - 3:
        raise ValueError(f"2-thread extension needs s <= k - 3, got s={s}, k={k}")
    return extend_block(h, lists, [v2, v3], seq, alpha, beta, {v2: k, v3: s + 3})


def extend_3thread(
    h: Graph,
    lists: ListAssignment,
    thread: Sequence[int],
    seq: RecolorSequence,
    alpha: Coloring,
    beta: Coloring,
    k: int,
) -> RecolorSequence:
    """Extend over the interior v2, v3, v4 of a 3-thread; v3 moves at most 4 times."""
    v1, v2, v3, v4, v5 = thread
    _check_thread(h, thread)
    return extend_block(h, lists, [v2, v3, v4], seq, alpha, beta, {v2: k, v3: 4, v4: k})

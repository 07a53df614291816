"""Immutable simple graphs with an optional rotation system."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping


class GraphError(ValueError):
    pass


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on integer vertex ids.

    ``rotation`` maps each vertex to the cyclic order of its neighbours
    when the graph carries a combinatorial embedding.  Deleting vertices
    never renumbers the survivors.
    """

    vertices: frozenset[int]
    adj: Mapping[int, frozenset[int]]
    rotation: Mapping[int, tuple[int, ...]] | None = field(default=None, compare=False)

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int]],
        rotation: Mapping[int, Iterable[int]] | None = None,
    ) -> "Graph":
        verts = frozenset(vertices)
        nbrs: dict[int, set[int]] = {v: set() for v in verts}
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if u not in nbrs or v not in nbrs:
                raise GraphError(f"edge ({u}, {v}) uses an unknown vertex")
            if v in nbrs[u]:
                raise GraphError(f"parallel edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        rot = None
        if rotation is not None:
            rot = {}
            for v in verts:
                order = tuple(rotation.get(v, ()))
                if len(order) != len(nbrs[v]) or set(order) != nbrs[v]:
                    raise GraphError(f"rotation at {v} must list each neighbour exactly once")
                rot[v] = order
        return cls(verts, {v: frozenset(s) for v, s in nbrs.items()}, rot)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self.adj[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def edges(self) -> list[tuple[int, int]]:
        return sorted({_edge(u, v) for u in self.vertices for v in self.adj[u]})

    def num_edges(self) -> int:
        return sum(len(s) for s in self.adj.values()) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.adj and v in self.adj[u]

    @property
    def embedded(self) -> bool:
        return self.rotation is not None

    def delete(self, removed: Iterable[int]) -> "Graph":
        """Induced subgraph on the vertices outside ``removed``."""
        gone = frozenset(removed)
        unknown = gone - self.vertices
        if unknown:
            raise GraphError(f"unknown vertices {sorted(unknown)}")
        if not gone:
            return self
        keep = self.vertices - gone
        adj = {v: self.adj[v] - gone for v in keep}
        rot = None
        if self.rotation is not None:
            rot = {v: tuple(u for u in self.rotation[v] if u not in gone) for v in keep}
        return Graph(keep, adj, rot)

    def induced(self, keep: Iterable[int]) -> "Graph":
        return self.delete(self.vertices - frozenset(keep))

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in sorted(self.vertices):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            i = 0
            while i < len(comp):
                for w in self.adj[comp[i]]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                i += 1
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def same_as(self, other: "Graph") -> bool:
        """Labelled equality including the rotation system."""
        return self == other and self.rotation == other.rotation


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def delete(g: Graph, s: Iterable[int]) -> Graph:
    return g.delete(s)

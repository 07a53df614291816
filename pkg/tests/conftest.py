import random

import networkx as nx
import pytest

from listrecolor.graph import Graph


def cycle(n: int, embedded: bool = True) -> Graph:
    rot = {i: ((i - 1) % n, (i + 1) % n) for i in range(n)} if embedded else None
    return Graph.from_edges(range(n), [(i, (i + 1) % n) for i in range(n)], rot)


def from_nx(h: nx.Graph, embedded: bool = True) -> Graph:
    rot = None
    if embedded:
        ok, emb = nx.check_planarity(h)
        assert ok
        rot = {v: list(emb.neighbors_cw_order(v)) for v in h}
    return Graph.from_edges(h.nodes(), h.edges(), rot)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(range(n), edges)


@pytest.fixture
def c5():
    return cycle(5)


@pytest.fixture
def dodecahedron():
    return from_nx(nx.dodecahedral_graph())

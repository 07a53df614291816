import random

import pytest

from conftest import cycle
from listrecolor.catalog import CAT_S
from listrecolor.generators import generate
from listrecolor.graph import Graph
from listrecolor.pipeline import (
    ClassViolation,
    NoConfigurationFound,
    find_configuration,
    reconfigure,
    reconfigure_mad4,
    reduce_and_extend,
)
from listrecolor.recolor import verify
from listrecolor.witnesses import extend_coloring


@pytest.mark.parametrize(
    "family, theorem, n, seed",
    [
        ("girth10subdiv", "mad4", 30, 1),
        ("sparsetree2threads", "mad4", 40, 2),
        ("cycle", "mad4", 11, 0),
        ("grid5", "planar6", 40, 3),
        ("vertexdisjoint4cycles", "planar6", 40, 4),
        ("cycle", "planar6", 8, 5),
    ],
)
def test_reconfigure_verifies(family, theorem, n, seed):
    inst = generate(family, n, seed, theorem)
    seq, trace = reconfigure(theorem, inst.graph, inst.lists, inst.alpha, inst.beta)
    k = 48 if theorem == "planar6" else 18
    rep = verify(inst.graph, inst.lists, seq, inst.beta, k)
    assert rep.ok, rep.violation
    assert seq.start == inst.alpha
    assert sum(trace.pattern_counts().values()) == len(trace.matches)
    deleted = [v for m in trace.matches for v in m.deleted]
    assert sorted(deleted) == sorted(inst.graph.vertices)


def test_reconfigure_is_deterministic():
    inst = generate("girth10subdiv", 40, 9)
    a = reconfigure_mad4(inst.graph, inst.lists, inst.alpha, inst.beta)
    b = reconfigure_mad4(inst.graph, inst.lists, inst.alpha, inst.beta)
    assert a.steps == b.steps


def test_class_violations():
    k4 = Graph.from_edges(range(4), [(u, v) for u in range(4) for v in range(u + 1, 4)])
    lists = {v: frozenset(range(4)) for v in range(4)}
    col = {v: v for v in range(4)}
    with pytest.raises(ClassViolation, match="mad"):
        reconfigure("mad4", k4, lists, col, col)
    tri = cycle(3)
    lists6 = {v: frozenset(range(6)) for v in tri.vertices}
    with pytest.raises(ClassViolation):
        reconfigure("planar6", tri, lists6, {0: 0, 1: 1, 2: 2}, {0: 0, 1: 1, 2: 2})


def test_short_lists_and_bad_endpoints_rejected():
    g = cycle(7)
    short = {v: frozenset(range(3)) for v in g.vertices}
    col = {v: v % 2 for v in g.vertices}
    col[6] = 2
    with pytest.raises(ClassViolation, match="list"):
        reconfigure("mad4", g, short, col, col)
    lists = {v: frozenset(range(4)) for v in g.vertices}
    bad = dict(col)
    bad[1] = bad[0]
    with pytest.raises(ClassViolation, match="alpha"):
        reconfigure("mad4", g, lists, bad, col)


def test_empty_catalog_reports_remainder():
    g = cycle(5)
    lists = {v: frozenset(range(4)) for v in g.vertices}
    col = {0: 0, 1: 1, 2: 0, 3: 1, 4: 2}
    with pytest.raises(NoConfigurationFound) as info:
        reduce_and_extend(g, lists, col, col, 18, [], "mad4")
    assert info.value.graph.same_as(g)
    assert info.value.audit is not None


def test_find_configuration_on_pendant():
    g = Graph.from_edges(range(3), [(0, 1), (1, 2)])
    lists = {v: frozenset(range(4)) for v in g.vertices}
    m = find_configuration(g, lists, CAT_S, 18)
    assert m.pattern == "delta2"
    assert all(c <= 18 for c in m.caps.values())


def test_random_lists_many_seeds():
    for seed in range(8):
        inst = generate("sparsetree2threads", 25, seed)
        seq, _ = reconfigure("mad4", inst.graph, inst.lists, inst.alpha, inst.beta)
        assert verify(inst.graph, inst.lists, seq, inst.beta, 18).ok


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 1), (0, 4), (1, 4), (2, 3), (2, 4), (3, 4)],  # bowtie
        [(0, 1), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4)],  # theta with paths of length 1, 2, 3
        [(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (3, 5), (4, 5)],  # two triangles joined by an edge
        [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],  # K_{2,3}
    ],
)
def test_degenerate_small_sparse_graphs(edges):
    g = Graph.from_edges(range(max(max(e) for e in edges) + 1), edges)
    lists = {v: frozenset(range(4)) for v in g.vertices}
    rng = random.Random(len(edges))
    alpha = extend_coloring(g, lists, {}, rng)
    beta = extend_coloring(g, lists, {}, rng)
    seq, _ = reconfigure("mad4", g, lists, alpha, beta)
    assert verify(g, lists, seq, beta, 18).ok

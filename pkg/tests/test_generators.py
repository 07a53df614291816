import random

import pytest

from listrecolor.generators import (
    FAMILIES,
    GenerationError,
    cycle_graph,
    degeneracy_order,
    generate,
    greedy_list_coloring,
    in_class,
    random_lists,
)
from listrecolor.recolor import first_conflict
from listrecolor.structure import euler_defects, girth


@pytest.mark.parametrize("family", FAMILIES)
def test_deterministic(family):
    a = generate(family, 30, 11)
    b = generate(family, 30, 11)
    assert a.graph.same_as(b.graph)
    assert a.graph.rotation == b.graph.rotation
    assert (a.lists, a.alpha, a.beta) == (b.lists, b.alpha, b.beta)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("n", [8, 25, 60])
def test_in_class_and_sized(family, n):
    for seed in range(3):
        inst = generate(family, n, seed)
        theorem = inst.meta["theorem"]
        assert in_class(inst.graph, theorem)
        assert 1 <= len(inst.graph) <= n
        assert inst.graph.is_connected()
        size = 6 if theorem == "planar6" else 4
        assert all(len(inst.lists[v]) == size for v in inst.graph.vertices)
        assert first_conflict(inst.graph, inst.lists, inst.alpha) is None
        assert first_conflict(inst.graph, inst.lists, inst.beta) is None
        if theorem == "planar6":
            assert euler_defects(inst.graph) == []


def test_girth10_family():
    for seed in range(5):
        g = generate("girth10subdiv", 40, seed).graph
        assert girth(g) is None or girth(g) >= 10


def test_cycle_family():
    g = cycle_graph(12)
    assert len(g) == 12 and all(g.degree(v) == 2 for v in g.vertices)
    assert generate("cycle", 12, 0, "planar6").meta["theorem"] == "planar6"


def test_unknown_family():
    with pytest.raises(ValueError):
        generate("hypercube", 10, 0)


def test_generation_error_is_exported():
    assert issubclass(GenerationError, Exception)


def test_list_coloring_helpers():
    g = generate("sparsetree2threads", 30, 4).graph
    order = degeneracy_order(g)
    assert sorted(order) == sorted(g.vertices)
    rng = random.Random(0)
    lists = random_lists(g, 4, rng)
    col = greedy_list_coloring(g, lists, rng)
    assert first_conflict(g, lists, col) is None

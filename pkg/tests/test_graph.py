import pytest

from listrecolor.graph import Graph, GraphError, degree, delete


def test_from_edges_builds_symmetric_adjacency():
    g = Graph.from_edges(range(4), [(0, 1), (1, 2), (2, 3)])
    assert g.neighbors(1) == {0, 2}
    assert g.num_edges() == 3
    assert g.edges() == [(0, 1), (1, 2), (2, 3)]
    assert degree(g, 0) == 1


@pytest.mark.parametrize(
    "edges, msg",
    [([(0, 0)], "loop"), ([(0, 1), (1, 0)], "parallel"), ([(0, 9)], "unknown")],
)
def test_rejects_bad_edges(edges, msg):
    with pytest.raises(GraphError, match=msg):
        Graph.from_edges(range(3), edges)


def test_rotation_must_match_neighbourhood():
    with pytest.raises(GraphError):
        Graph.from_edges(range(3), [(0, 1), (1, 2)], {0: [1], 1: [0], 2: [1]})


def test_delete_keeps_ids_and_restricts_rotation(c5):
    h = delete(c5, [2])
    assert h.vertices == {0, 1, 3, 4}
    assert h.rotation[1] == (0,)
    assert h.rotation[3] == (4,)
    assert c5.degree(2) == 2  # original untouched


def test_delete_unknown_vertex_raises(c5):
    with pytest.raises(GraphError):
        c5.delete([7])


def test_induced_and_components():
    g = Graph.from_edges(range(6), [(0, 1), (1, 2), (3, 4)])
    assert g.components() == [[0, 1, 2], [3, 4], [5]]
    assert not g.is_connected()
    assert g.induced([0, 1]).edges() == [(0, 1)]


def test_same_as_compares_rotation(c5):
    flipped = Graph.from_edges(range(5), c5.edges(), {v: tuple(reversed(c5.rotation[v])) for v in range(5)})
    assert flipped == c5
    assert not flipped.same_as(c5)
    assert c5.same_as(c5.delete([]))

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gedgen.graph import (
    EditInput,
    GraphFormatError,
    LabeledGraph,
    PaddedGraph,
    StructureError,
    edge_symmetric_difference,
    graph_from_json,
    graph_to_json,
    pad,
    random_graph,
    strip,
)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    m = draw(st.integers(1, 4))
    labels = draw(st.lists(st.integers(1, m), min_size=n, max_size=n))
    pairs = [(i, k) for i in range(1, n + 1) for k in range(i + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return LabeledGraph.from_edges(labels, edges, m)


@given(graphs(), st.integers(0, 4))
def test_pad_strip_roundtrip(g, extra):
    B = 8 * max(g.m, g.n + extra) + 1
    pg = pad(g, extra, B)
    assert pg.size == g.n + extra
    assert strip(pg, g.m) == g


@given(graphs())
def test_json_roundtrip(g):
    assert graph_from_json(graph_to_json(g)) == g


def test_json_errors():
    with pytest.raises(GraphFormatError):
        graph_from_json("{")
    with pytest.raises(GraphFormatError):
        graph_from_json('{"n": 2, "m": 1, "labels": [1, 1], "edges": [[2, 1]]}')
    with pytest.raises(GraphFormatError):
        graph_from_json('{"n": 2, "m": 1, "labels": [1, 3], "edges": []}')


def test_pad_rejects_small_sentinel(example_graph):
    with pytest.raises(ValueError):
        pad(example_graph, 2, 7)


def test_strip_detects_inconsistent_slot(example_graph):
    pg = pad(example_graph, 1, 40)
    V = np.array(pg.V)
    V[5, 0] = V[0, 5] = 1  # edge into an empty slot
    with pytest.raises(StructureError):
        strip(PaddedGraph(pg.U, V, 1, 40), 5)


def test_random_graph_is_seeded():
    g = random_graph(12, 20, 3, seed=4)
    assert g.edge_count == 20 and g.n == 12
    assert g == random_graph(12, 20, 3, seed=4)
    with pytest.raises(ValueError):
        random_graph(3, 4, 1, 0)


def test_edge_symmetric_difference(example_graph):
    h = LabeledGraph.from_edges(example_graph.labels, [(1, 2), (3, 4)], 5)
    assert edge_symmetric_difference(example_graph, h) == 6


def test_edit_input_length():
    assert EditInput("GE", [0] * 14).d == 2
    with pytest.raises(ValueError):
        EditInput("gi", [1, 2])

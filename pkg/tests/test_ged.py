import itertools

import networkx as nx
import numpy as np
import pytest

from gedgen.ged import (
    GedSizeError,
    apply_edit_path,
    certify_within,
    exact_ged,
    identity_cost,
    validate_edit_path,
)
from gedgen.graph import LabeledGraph

from conftest import random_labeled


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from((i, {"label": lab}) for i, lab in enumerate(g.labels))
    h.add_edges_from((u - 1, v - 1) for u, v in g.edges())
    return h


def _nx_ged(g, h):
    return nx.graph_edit_distance(_nx(g), _nx(h), node_match=lambda a, b: a["label"] == b["label"])


def test_matches_networkx_on_random_pairs():
    rng = np.random.default_rng(11)
    for _ in range(60):
        g = random_labeled(rng, int(rng.integers(0, 5)), 2)
        h = random_labeled(rng, int(rng.integers(0, 5)), 2)
        cert = exact_ged(g, h)
        assert cert.distance == _nx_ged(g, h)


def test_witness_replays_to_target():
    rng = np.random.default_rng(3)
    for _ in range(40):
        g = random_labeled(rng, int(rng.integers(1, 6)), 3)
        h = random_labeled(rng, int(rng.integers(1, 6)), 3)
        cert = exact_ged(g, h)
        assert len(cert.witness) == cert.distance
        out = apply_edit_path(cert.witness, g)
        assert exact_ged(out, h).distance == 0


def test_bounded_search_reports_excess(example_graph):
    empty = LabeledGraph((), np.zeros((0, 0)), 5)
    cert = exact_ged(example_graph, empty, max_cost=3)
    assert cert.exceeded and cert.lower_bound == 4
    assert not certify_within(example_graph, empty, 3).within
    assert exact_ged(example_graph, empty).distance == 11


def test_edit_path_validity(example_graph):
    assert not validate_edit_path([("del_vertex", 2)], example_graph)  # still has edges
    assert not validate_edit_path([("ins_edge", 1, 9)], example_graph)
    assert validate_edit_path([("del_edge", 2, 3), ("del_vertex", 3)], example_graph)


def test_identity_certificate(example_graph):
    h = LabeledGraph.from_edges((1,) + example_graph.labels[1:], [(1, 2)], 5)
    cert = certify_within(example_graph, h, 6, "edge_only")
    assert cert.upper_bound == identity_cost(example_graph, h) == 6 and cert.within


def test_size_guard():
    big = LabeledGraph.from_edges([1] * 8, [], 1)
    with pytest.raises(GedSizeError):
        exact_ged(big, big)


def test_symmetry_and_identity_on_small_graphs():
    labels = [1, 2]
    graphs = [
        LabeledGraph.from_edges(lab, es, 2)
        for n in range(3)
        for lab in itertools.product(labels, repeat=n)
        for es in ([[]] if n < 2 else [[], [(1, 2)]])
    ]
    for g, h in itertools.product(graphs, repeat=2):
        assert exact_ged(g, h).distance == exact_ged(h, g).distance
        # on at most two vertices, isomorphism means equal label multisets and edge counts
        same = g.n == h.n and sorted(g.labels) == sorted(h.labels) and g.edge_count == h.edge_count
        assert (exact_ged(g, h).distance == 0) == same

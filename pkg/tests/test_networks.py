import itertools
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gedgen.ged import exact_ged
from gedgen.graph import EditInput, LabeledGraph
from gedgen.networks import (
    FAMILIES,
    GenerationMismatch,
    NetworkConfig,
    build,
    edge_only_ge,
    generate,
    generate_batch,
    network_rows,
    reference_rows,
)
from gedgen.networks.generate import decode_output
from gedgen.relu import ContractViolation
from gedgen.sampler import SamplerConfig, ge_class_axes, sample, sample_array

from conftest import random_labeled
from isomorphism import all_graphs, canonical


def _fine(n, m, d):
    """Config whose GE grid reaches every conversion class, including the last index."""
    base = NetworkConfig.for_graph(n, m, d)
    return NetworkConfig(n, m, d, base.B, base.C, 2 * base.grid)


@pytest.mark.parametrize("family", FAMILIES)
def test_network_matches_reference_on_random_inputs(family):
    rng = np.random.default_rng(5)
    for trial in range(12):
        n, m, d = int(rng.integers(2, 8)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        g = random_labeled(rng, n, m)
        cfg = NetworkConfig.for_graph(n, m, d)
        X = sample_array(SamplerConfig.for_network(family, cfg, trial), 40)
        assert np.array_equal(network_rows(g, family, X, cfg), reference_rows(g, family, X, cfg))


@pytest.mark.parametrize("family", FAMILIES)
def test_depth_does_not_depend_on_size(family):
    depths = {build(family, NetworkConfig.for_graph(n, 3, d)).depth for n in (2, 6, 11) for d in (1, 2, 4)}
    assert len(depths) == 1


@pytest.mark.parametrize("family", ["gs", "gd", "gi"])
def test_exhaustive_small_inputs_stay_within_d(family):
    g = LabeledGraph.from_edges([1, 2, 2], [(1, 2), (2, 3)], 2)
    for d in (1, 2):
        cfg = NetworkConfig.for_graph(3, 2, d)
        X = np.array(list(itertools.product(*(range(lo, hi + 1) for lo, hi in SamplerConfig.for_network(family, cfg).ranges()))))
        for row in np.unique(network_rows(g, family, X, cfg), axis=0):
            h = decode_output(g, family, cfg, row)
            assert exact_ged(g, h, max_cost=d).within, (family, d, h)


def test_ge_reaches_every_graph_within_one_edit():
    g = LabeledGraph.from_edges([1, 2, 1], [(1, 2)], 2)
    cfg = _fine(3, 2, 1)
    axes = ge_class_axes(SamplerConfig.for_network("ge", cfg))
    X = np.array([[int(v * cfg.grid) for v in row] for row in itertools.product(*axes)])
    got = {canonical(decode_output(g, "ge", cfg, r)) for r in np.unique(network_rows(g, "ge", X, cfg), axis=0)}
    want = {
        canonical(h)
        for k in (2, 3, 4)
        for h in all_graphs(k, 2)
        if exact_ged(g, h, max_cost=1).within
    }
    assert got == want


def test_both_mode_and_contract(example_graph):
    cfg = NetworkConfig.for_graph(5, 5, 1)
    out = generate(example_graph, EditInput("gd", (3, 3)), cfg, mode="both")
    assert out.n == 5  # vertex 3 is not isolated, deletion is nullified
    with pytest.raises(ContractViolation):
        generate(example_graph, EditInput("gd", (6, 3)), cfg)
    with pytest.raises(ContractViolation):
        generate(example_graph, EditInput("gd", (1, 2, 3, 4)), cfg)
    with pytest.raises(ValueError):
        generate(example_graph, EditInput("gs", (1, 1)), NetworkConfig.for_graph(4, 5, 1))
    assert generate_batch(example_graph, [], cfg) == []


@given(st.integers(0, 2**31))
def test_edge_only_keeps_vertices_and_labels(seed):
    rng = np.random.default_rng(seed)
    g = random_labeled(rng, 6, 1, 0.5)
    cfg = NetworkConfig.for_graph(6, 1, 3)
    x = sample(SamplerConfig.for_network("ge", cfg, seed), 1)[0]
    h = edge_only_ge(g, x, cfg)
    assert h.n == g.n and h.labels == g.labels
    assert int(np.triu(g.adjacency != h.adjacency, 1).sum()) <= 3


def test_mismatch_is_reported(monkeypatch, example_graph):
    gen = sys.modules["gedgen.networks.generate"]
    cfg = NetworkConfig.for_graph(5, 5, 1)
    monkeypatch.setattr(gen, "_run_reference", lambda *a: [0] * 5)
    with pytest.raises(GenerationMismatch):
        generate(example_graph, EditInput("gs", (1, 2)), cfg, mode="both")

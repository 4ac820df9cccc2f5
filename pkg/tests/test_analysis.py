import logging

import networkx as nx
import numpy as np
import pytest

from core.errors import ParameterRangeError
from core.model import validate_scheme
from simulation.analysis import (
    UnionFind,
    event_thresholds,
    graph_stats,
    prefix_union_profile,
    union_key_count,
)
from simulation.sampler import SampledGraph, SeedSpec, build_graph


logger = logging.getLogger(__name__)


def _graph(rings, edges, classes=None, P=10) -> SampledGraph:
    n = len(rings)
    return SampledGraph(
        n=n,
        P=P,
        r=1 if classes is None else max(classes),
        classes=np.array(classes or [1] * n),
        rings=tuple(np.array(ring) for ring in rings),
        edges=np.array(edges, dtype=np.int64).reshape(-1, 2),
    )


def test_union_find_merges() -> None:
    components = UnionFind(5)
    assert components.union(0, 1)
    assert components.union(3, 4)
    assert not components.union(1, 0)
    assert components.num_components == 3
    assert components.find(0) == components.find(1)
    assert sorted(components.component_sizes()) == [1, 2, 2]


def test_graph_stats_complete_graph() -> None:
    edges = [(x, y) for x in range(5) for y in range(x + 1, 5)]
    stats = graph_stats(_graph([[0]] * 5, edges))
    assert stats.isolated_total == 0
    assert stats.connected
    assert stats.component_count == 1
    assert stats.largest_component == 5


def test_graph_stats_edgeless_graph() -> None:
    stats = graph_stats(_graph([[0], [1], [2], [3]], []))
    assert stats.isolated_total == 4
    assert stats.component_count == 4
    assert not stats.connected


def test_graph_stats_single_node_is_connected() -> None:
    stats = graph_stats(_graph([[0]], []))
    assert stats.connected
    assert stats.isolated_total == 1


def test_graph_stats_counts_isolated_by_class() -> None:
    graph = _graph([[0], [1], [0], [5]], [(0, 2)], classes=[1, 2, 1, 2])
    stats = graph_stats(graph)
    assert stats.isolated_by_class == (0, 2)


def test_graph_stats_agree_with_networkx() -> None:
    theta = validate_scheme(2, [0.5, 0.5], [2, 4], 150)
    for trial in range(50):
        n = 20 + 2 * trial
        graph = build_graph(n, theta, SeedSpec(master_seed=5, trial_index=trial))
        reference = nx.Graph()
        reference.add_nodes_from(range(n))
        reference.add_edges_from(graph.edges.tolist())

        stats = graph_stats(graph)
        assert stats.connected == nx.is_connected(reference)
        assert stats.component_count == nx.number_connected_components(reference)
        assert stats.largest_component == max(len(c) for c in nx.connected_components(reference))
        assert stats.isolated_total == nx.number_of_isolates(reference)
        if stats.connected:
            assert stats.isolated_total == 0


def test_union_key_count() -> None:
    graph = _graph([[0, 1], [1, 2], [2, 3]], [(0, 1), (1, 2)], P=5)
    assert union_key_count(graph, [0, 1, 2]) == 4
    assert union_key_count(graph, [1]) == 2
    assert union_key_count(_graph([[0, 1], [5, 6]], []), [0, 1]) == 4


def test_union_key_count_rejects_bad_subsets() -> None:
    graph = _graph([[0, 1], [1, 2]], [(0, 1)])
    with pytest.raises(ParameterRangeError):
        union_key_count(graph, [])
    with pytest.raises(ParameterRangeError):
        union_key_count(graph, [2])


def test_event_thresholds_arithmetic() -> None:
    thresholds = event_thresholds(100, 10, 1000, 0.25, 0.25)
    assert thresholds.L_n == 50
    assert thresholds.threshold(1) == 2
    assert thresholds.threshold(4) == 10
    assert thresholds.threshold(50) == 125
    assert thresholds.threshold(51) == 250
    assert len(thresholds.X) == 100


def test_event_thresholds_pool_branch() -> None:
    thresholds = event_thresholds(100, 10, 300, 0.25, 0.25)
    assert thresholds.L_n == 30
    assert thresholds.threshold(31) == 75


def test_event_thresholds_reject_out_of_range() -> None:
    with pytest.raises(ParameterRangeError):
        event_thresholds(10, 2, 50, 0.5, 0.25)
    with pytest.raises(ParameterRangeError):
        event_thresholds(10, 2, 50, 0.25, 0.0)


def test_prefix_union_profile() -> None:
    theta = validate_scheme(1, [1.0], [10], 1000)
    graph = build_graph(40, theta, SeedSpec(master_seed=3, trial_index=0))
    thresholds = event_thresholds(40, 10, 1000, 0.25, 0.25)
    profile = prefix_union_profile(graph, 32, thresholds)
    unions = [record.union_size for record in profile]
    logger.info("Prefix unions: %s", unions)
    assert unions[0] == 10
    assert all(b >= a for a, b in zip(unions, unions[1:]))
    assert all(10 <= u <= min(1000, 10 * (ell + 1)) for ell, u in enumerate(unions))
    assert not profile[0].violated


def test_prefix_union_profile_rejects_bad_cap() -> None:
    graph = _graph([[0], [1]], [])
    thresholds = event_thresholds(2, 1, 10, 0.25, 0.25)
    with pytest.raises(ParameterRangeError):
        prefix_union_profile(graph, 3, thresholds)

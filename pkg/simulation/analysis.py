import logging
import math
from typing import List, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.errors import ParameterRangeError
from simulation.sampler import SampledGraph


logger = logging.getLogger(__name__)

DEFAULT_PREFIX_CAP = 32


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, size: int) -> None:
        self.parents = list(range(size))
        self.sizes = [1] * size
        self.num_components = size

    def find(self, element: int) -> int:
        parents = self.parents
        while parents[element] != element:
            parents[element] = parents[parents[element]]
            element = parents[element]
        return element

    def union(self, a: int, b: int) -> bool:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return False
        if self.sizes[root_a] < self.sizes[root_b]:
            root_a, root_b = root_b, root_a
        self.parents[root_b] = root_a
        self.sizes[root_a] += self.sizes[root_b]
        self.num_components -= 1
        return True

    def component_sizes(self) -> List[int]:
        return [self.sizes[x] for x in range(len(self.parents)) if self.parents[x] == x]


class GraphStats(BaseModel):
    """
    Structural observables of one sampled graph.

    `isolated_by_class[0]` counts isolated class-1 nodes. A single-node graph
    is connected by convention.
    """

    model_config = ConfigDict(frozen=True)

    isolated_total: int
    isolated_by_class: Tuple[int, ...]
    connected: bool
    component_count: int
    largest_component: int


class EventThresholds(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta: float
    gamma: float
    L_n: int
    X: Tuple[int, ...]

    def threshold(self, ell: int) -> int:
        return self.X[ell - 1]


class PrefixUnionRecord(BaseModel):
    ell: int
    union_size: int
    threshold: int
    violated: bool


def graph_stats(graph: SampledGraph) -> GraphStats:
    degrees = graph.degrees()
    isolated = degrees == 0
    by_class = np.bincount(graph.classes[isolated], minlength=graph.r + 1)[1:]

    components = UnionFind(graph.n)
    for x, y in graph.edges.tolist():
        components.union(x, y)
    sizes = components.component_sizes()

    return GraphStats(
        isolated_total=int(isolated.sum()),
        isolated_by_class=tuple(int(v) for v in by_class),
        connected=components.num_components == 1,
        component_count=components.num_components,
        largest_component=max(sizes),
    )


def union_key_count(graph: SampledGraph, subset: Sequence[int]) -> int:
    """Number of distinct keys held jointly by the nodes in `subset`."""
    if len(subset) == 0:
        raise ParameterRangeError("node subset must be nonempty")
    if any(not 0 <= x < graph.n for x in subset):
        logger.error("Node subset %s has ids outside 0..%s", subset, graph.n - 1)
        raise ParameterRangeError(f"node ids must lie in 0..{graph.n - 1}")
    return int(np.unique(np.concatenate([graph.rings[x] for x in subset])).size)


def event_thresholds(n: int, K1: int, P: int, beta: float, gamma: float) -> EventThresholds:
    """
    Key-coverage thresholds X_ell for ell = 1..n.

    X_ell = floor(beta ell K1) up to the breakpoint L_n = min(floor(P / K1),
    floor(n / 2)), and floor(gamma P) beyond it.
    """
    if not (0.0 < beta < 0.5 and 0.0 < gamma < 0.5):
        logger.error("Thresholds beta=%s, gamma=%s outside (0, 1/2)", beta, gamma)
        raise ParameterRangeError(f"beta and gamma must lie in (0, 1/2); got {beta}, {gamma}")
    L_n = min(P // K1, n // 2)
    tail = math.floor(gamma * P)
    X = tuple(
        math.floor(beta * ell * K1) if ell <= L_n else tail for ell in range(1, n + 1)
    )
    return EventThresholds(beta=beta, gamma=gamma, L_n=L_n, X=X)


def prefix_union_profile(
    graph: SampledGraph, max_ell: int, thresholds: EventThresholds
) -> List[PrefixUnionRecord]:
    """U_ell over the first ell nodes, flagged when it does not exceed X_ell."""
    if not 1 <= max_ell <= graph.n:
        raise ParameterRangeError(f"max_ell must lie in 1..{graph.n}, got {max_ell}")
    held: Set[int] = set()
    records: List[PrefixUnionRecord] = []
    for ell in range(1, max_ell + 1):
        held.update(graph.rings[ell - 1].tolist())
        threshold = thresholds.threshold(ell)
        records.append(
            PrefixUnionRecord(
                ell=ell,
                union_size=len(held),
                threshold=threshold,
                violated=len(held) <= threshold,
            )
        )
    return records


__all__ = [
    "DEFAULT_PREFIX_CAP",
    "UnionFind",
    "GraphStats",
    "EventThresholds",
    "PrefixUnionRecord",
    "graph_stats",
    "union_key_count",
    "event_thresholds",
    "prefix_union_profile",
]

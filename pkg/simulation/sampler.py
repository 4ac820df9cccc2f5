"""
Deterministic sampling of inhomogeneous random key graphs.

Random streams are Philox4x64-10 (`numpy.random.Philox`), a counter-based
generator. A trial's 128-bit key comes from
`SeedSequence([master_seed, trial_index])`; each purpose inside the trial owns
a disjoint counter block:

- class labels: counter [0, 0, 0, 0]
- ring of node x: counter [0, x, 1, 0]
- node capture: counter [0, 0, 2, 0]

A graph therefore depends only on (master_seed, trial_index, n, theta), not on
how trials or nodes are scheduled.
"""

import io
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Sequence, Set, TextIO, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import ParameterRangeError, SchemeValidationError
from core.model import ClassMix, SchemeParams


logger = logging.getLogger(__name__)

CLASS_STREAM = 0
RING_STREAM = 1
CAPTURE_STREAM = 2

DUMP_EDGE_SENTINEL = "edges"
SCAN_BLOCK_ROWS = 1024


class SeedSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(ge=0, lt=2**64)
    trial_index: int = Field(ge=0)


@dataclass(frozen=True)
class SampledGraph:
    """
    One realized network.

    `classes[x]` is the 1-based class of node x, `rings[x]` its sorted key ids,
    and `edges` an (m, 2) array of pairs x < y in lexicographic order.
    """

    n: int
    P: int
    r: int
    classes: np.ndarray
    rings: Tuple[np.ndarray, ...]
    edges: np.ndarray

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def edge_set(self) -> Set[Tuple[int, int]]:
        return {(int(x), int(y)) for x, y in self.edges}


def trial_key(seed: SeedSpec) -> np.ndarray:
    sequence = np.random.SeedSequence([seed.master_seed, seed.trial_index])
    return sequence.generate_state(2, dtype=np.uint64)


def stream(key: np.ndarray, purpose: int, index: int = 0) -> np.random.Generator:
    counter = np.array([0, index, purpose, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def sample_subset(k: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """
    Uniform k-subset of range(m), sorted, via Floyd's algorithm.

    Expected O(k) time and memory regardless of m.
    """
    if not 0 <= k <= m:
        raise ParameterRangeError(f"subset size {k} outside 0..{m}")
    if k == 0:
        return np.empty(0, dtype=np.int64)
    highs = np.arange(m - k + 1, m + 1, dtype=np.int64)
    draws = rng.integers(0, highs)
    chosen: Set[int] = set()
    for top, draw in zip(highs.tolist(), draws.tolist()):
        chosen.add(top - 1 if draw in chosen else draw)
    return np.array(sorted(chosen), dtype=np.int64)


def sample_ring(K: int, P: int, rng: np.random.Generator) -> np.ndarray:
    if not 1 <= K < P:
        logger.error("Ring size %s invalid for pool %s", K, P)
        raise ParameterRangeError(f"ring size must satisfy 1 <= K < P; got K={K}, P={P}")
    return sample_subset(K, P, rng)


def assign_classes(n: int, mix: ClassMix, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. 1-based class labels by inverse CDF over mu."""
    cumulative = np.cumsum(mix.mu)
    labels = np.searchsorted(cumulative, rng.random(n), side="right")
    return np.minimum(labels, mix.r - 1).astype(np.int64) + 1


def intersects(ring_a: Sequence[int], ring_b: Sequence[int]) -> bool:
    """Linear merge scan over two sorted rings."""
    i = j = 0
    while i < len(ring_a) and j < len(ring_b):
        a, b = ring_a[i], ring_b[j]
        if a == b:
            return True
        if a < b:
            i += 1
        else:
            j += 1
    return False


def _pack_edges(pairs: np.ndarray, n: int) -> np.ndarray:
    if pairs.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    codes = np.unique(pairs[:, 0] * n + pairs[:, 1])
    return np.column_stack((codes // n, codes % n))


def _edges_by_key_index(rings: Sequence[np.ndarray], n: int) -> np.ndarray:
    sizes = np.fromiter((len(ring) for ring in rings), dtype=np.int64, count=n)
    holders = np.repeat(np.arange(n, dtype=np.int64), sizes)
    keys = np.concatenate(rings) if n else np.empty(0, dtype=np.int64)
    order = np.argsort(keys, kind="stable")
    keys, holders = keys[order], holders[order]
    boundaries = np.flatnonzero(np.diff(keys)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [keys.size]))
    shared = np.flatnonzero(ends - starts > 1)

    chunks: List[np.ndarray] = []
    for bucket in shared:
        members = holders[starts[bucket]:ends[bucket]]
        left, right = np.triu_indices(members.size, k=1)
        chunks.append(np.column_stack((members[left], members[right])))
    pairs = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    return _pack_edges(pairs, n)


def _edges_by_pairwise_scan(rings: Sequence[np.ndarray], n: int, P: int) -> np.ndarray:
    """Shared-key counts block by block; peak memory is O(n P + SCAN_BLOCK_ROWS n)."""
    incidence = np.zeros((n, P), dtype=np.int32)
    for node, ring in enumerate(rings):
        incidence[node, ring] = 1
    chunks: List[np.ndarray] = []
    for start in range(0, n, SCAN_BLOCK_ROWS):
        stop = min(start + SCAN_BLOCK_ROWS, n)
        shared = incidence[start:stop] @ incidence[start:].T
        rows, cols = np.nonzero(shared)
        left, right = rows + start, cols + start
        upper = left < right
        chunks.append(np.column_stack((left[upper], right[upper])))
    if not chunks:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(chunks).astype(np.int64)


def pairwise_edges(rings: Sequence[np.ndarray]) -> np.ndarray:
    """O(n^2) edge oracle built from `intersects`."""
    pairs = [
        (x, y)
        for x, y in combinations(range(len(rings)), 2)
        if intersects(rings[x].tolist(), rings[y].tolist())
    ]
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def build_graph(n: int, theta: SchemeParams, seed: SeedSpec) -> SampledGraph:
    """
    Sample classes and rings for n nodes and join them into an edge set.

    Edges come from a key -> holders inverted index; when the pool is smaller
    than the node count, a dense pairwise scan is cheaper and used instead.
    """
    if n < 1:
        raise ParameterRangeError(f"node count must be at least 1, got {n}")
    key = trial_key(seed)
    classes = assign_classes(n, theta.mix, stream(key, CLASS_STREAM))
    sizes = np.asarray(theta.K, dtype=np.int64)[classes - 1]
    rings = tuple(
        sample_ring(int(size), theta.P, stream(key, RING_STREAM, node))
        for node, size in enumerate(sizes)
    )
    if theta.P < n:
        edges = _edges_by_pairwise_scan(rings, n, theta.P)
    else:
        edges = _edges_by_key_index(rings, n)
    logger.debug(
        "Built graph n=%s trial=%s with %s edges", n, seed.trial_index, len(edges)
    )
    return SampledGraph(n=n, P=theta.P, r=theta.r, classes=classes, rings=rings, edges=edges)


def dump_graph(graph: SampledGraph, out: TextIO) -> None:
    """Line-oriented dump: `n P r`, one `class key...` line per node, `edges`, then `x y` lines."""
    out.write(f"{graph.n} {graph.P} {graph.r}\n")
    for label, ring in zip(graph.classes.tolist(), graph.rings):
        out.write(" ".join(str(v) for v in [label, *ring.tolist()]) + "\n")
    out.write(DUMP_EDGE_SENTINEL + "\n")
    for x, y in graph.edges.tolist():
        out.write(f"{x} {y}\n")


def dumps_graph(graph: SampledGraph) -> str:
    buffer = io.StringIO()
    dump_graph(graph, buffer)
    return buffer.getvalue()


def load_graph(lines: Iterable[str]) -> SampledGraph:
    rows = [line.split() for line in lines if line.strip()]
    if not rows:
        raise SchemeValidationError("empty graph dump")
    n, P, r = (int(v) for v in rows[0])
    node_rows = rows[1:1 + n]
    if len(rows) < 2 + n or rows[1 + n] != [DUMP_EDGE_SENTINEL]:
        raise SchemeValidationError(f"graph dump does not list {n} nodes before '{DUMP_EDGE_SENTINEL}'")
    classes = np.array([int(row[0]) for row in node_rows], dtype=np.int64)
    rings = tuple(np.array([int(v) for v in row[1:]], dtype=np.int64) for row in node_rows)
    edges = np.array([[int(v) for v in row] for row in rows[2 + n:]], dtype=np.int64).reshape(-1, 2)
    return SampledGraph(n=n, P=P, r=r, classes=classes, rings=rings, edges=edges)


__all__ = [
    "SeedSpec",
    "SampledGraph",
    "trial_key",
    "stream",
    "sample_subset",
    "sample_ring",
    "assign_classes",
    "intersects",
    "pairwise_edges",
    "build_graph",
    "dump_graph",
    "dumps_graph",
    "load_graph",
]

"""
Statistical checks of single closed-form claims: pairwise edge frequency,
the spanning-tree bound on small connected subgraphs, node capture, and the
key-coverage event on prefixes of the node order.
"""

import logging
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel

from core.errors import ParameterRangeError
from core.exactprob import edge_prob, expected_pool_coverage
from core.model import SchemeParams
from montecarlo.trials import AGREEMENT_SE, Estimate, map_ordered, run_trials
from simulation.analysis import EventThresholds, event_thresholds, prefix_union_profile
from simulation.sampler import (
    CAPTURE_STREAM,
    RING_STREAM,
    SeedSpec,
    build_graph,
    intersects,
    sample_ring,
    sample_subset,
    stream,
    trial_key,
)


logger = logging.getLogger(__name__)

MIN_TREE_ELL = 2
MAX_TREE_ELL = 8


class EdgeFrequencyResult(BaseModel):
    i: int
    j: int
    estimate: Estimate
    exact: float
    agrees: bool


class TreeBoundResult(BaseModel):
    """
    Empirical probability that the graph on nodes 1..ell is connected,
    against ell ** (ell - 2) * p_rr ** (ell - 1) capped at 1.
    """

    ell: int
    connected: Estimate
    raw_bound: float
    bound: float
    vacuous: bool
    within_bound: bool


class CaptureResult(BaseModel):
    s: int
    n: int
    pool_coverage: Estimate
    compromised_link_fraction: Estimate
    expected_pool_coverage: float


class CoverageEventRow(BaseModel):
    ell: int
    threshold: int
    union_size: Estimate
    violated: Estimate


class CoverageEventResult(BaseModel):
    """
    Per-ell frequency of U_ell <= X_ell over the prefixes {1..ell}.

    `any_violated` is the frequency of trials with at least one violating
    prefix up to `max_ell`.
    """

    n: int
    beta: float
    gamma: float
    L_n: int
    max_ell: int
    rows: List[CoverageEventRow]
    any_violated: Estimate


def _ring_pair_intersects(task: Tuple[int, int, int, int, int]) -> bool:
    Ki, Kj, P, master_seed, pair_index = task
    key = trial_key(SeedSpec(master_seed=master_seed, trial_index=pair_index))
    ring_a = sample_ring(Ki, P, stream(key, RING_STREAM, 0))
    ring_b = sample_ring(Kj, P, stream(key, RING_STREAM, 1))
    return intersects(ring_a.tolist(), ring_b.tolist())


def edge_freq_check(
    theta: SchemeParams, i: int, j: int, pairs: int, master_seed: int, threads: int = 1
) -> EdgeFrequencyResult:
    """Intersection frequency over `pairs` independent (class i, class j) ring pairs."""
    if pairs < 1:
        raise ParameterRangeError(f"pairs must be at least 1, got {pairs}")
    exact = edge_prob(i, j, theta)
    Ki, Kj = theta.K[i - 1], theta.K[j - 1]
    tasks = [(Ki, Kj, theta.P, master_seed, t) for t in range(pairs)]
    hits = map_ordered(_ring_pair_intersects, tasks, threads)
    estimate = Estimate.from_samples(hits, master_seed)
    logger.info("Edge frequency (%s, %s): %.6f vs exact %.6f", i, j, estimate.mean, exact)
    return EdgeFrequencyResult(
        i=i, j=j, estimate=estimate, exact=exact, agrees=estimate.agrees_with(exact)
    )


def tree_bound_check(
    theta: SchemeParams, ell: int, trials: int, master_seed: int, threads: int = 1
) -> TreeBoundResult:
    if not MIN_TREE_ELL <= ell <= MAX_TREE_ELL:
        logger.error("Tree bound prefix %s outside %s..%s", ell, MIN_TREE_ELL, MAX_TREE_ELL)
        raise ParameterRangeError(
            f"ell must lie in {MIN_TREE_ELL}..{MAX_TREE_ELL}, got {ell}"
        )
    p_rr = edge_prob(theta.r, theta.r, theta)
    raw_bound = ell ** (ell - 2) * p_rr ** (ell - 1)
    bound = min(1.0, raw_bound)
    connected = run_trials(theta, ell, trials, master_seed, threads).connected
    within = connected.mean <= bound + AGREEMENT_SE * (connected.stderr or 0.0) + 1e-12
    if raw_bound >= 1.0:
        logger.warning("Tree bound at ell=%s is vacuous (%.4f >= 1)", ell, raw_bound)
    return TreeBoundResult(
        ell=ell,
        connected=connected,
        raw_bound=raw_bound,
        bound=bound,
        vacuous=raw_bound >= 1.0,
        within_bound=within,
    )


def _capture_trial(task: Tuple[SchemeParams, int, int, int, int]) -> Tuple[float, float]:
    theta, n, s, master_seed, trial_index = task
    seed = SeedSpec(master_seed=master_seed, trial_index=trial_index)
    graph = build_graph(n, theta, seed)
    captured = sample_subset(s, n, stream(trial_key(seed), CAPTURE_STREAM))

    covered = np.zeros(theta.P, dtype=bool)
    for node in captured.tolist():
        covered[graph.rings[node]] = True

    is_captured = np.zeros(n, dtype=bool)
    is_captured[captured] = True
    remaining = graph.edges[~(is_captured[graph.edges[:, 0]] | is_captured[graph.edges[:, 1]])]
    compromised = sum(
        bool(covered[np.intersect1d(graph.rings[x], graph.rings[y], assume_unique=True)].all())
        for x, y in remaining.tolist()
    )
    link_fraction = compromised / len(remaining) if len(remaining) else 0.0
    return float(covered.mean()), link_fraction


def capture_attack(
    theta: SchemeParams, n: int, s: int, trials: int, master_seed: int, threads: int = 1
) -> CaptureResult:
    """
    Capture s uniformly random nodes per trial.

    A surviving link (no captured endpoint) is compromised when every key its
    endpoints share is held by some captured node.
    """
    if not 0 <= s <= n:
        logger.error("Captured node count %s outside 0..%s", s, n)
        raise ParameterRangeError(f"captured node count must lie in 0..{n}, got {s}")
    if trials < 1:
        raise ParameterRangeError(f"trials must be at least 1, got {trials}")
    logger.info("Capture attack: s=%s of n=%s over %s trials", s, n, trials)
    tasks = [(theta, n, s, master_seed, t) for t in range(trials)]
    outcomes = map_ordered(_capture_trial, tasks, threads)
    return CaptureResult(
        s=s,
        n=n,
        pool_coverage=Estimate.from_samples([c for c, _ in outcomes], master_seed),
        compromised_link_fraction=Estimate.from_samples([f for _, f in outcomes], master_seed),
        expected_pool_coverage=expected_pool_coverage(s, theta),
    )


def _coverage_trial(
    task: Tuple[SchemeParams, int, int, EventThresholds, int, int]
) -> Tuple[List[int], List[bool]]:
    theta, n, max_ell, thresholds, master_seed, trial_index = task
    graph = build_graph(n, theta, SeedSpec(master_seed=master_seed, trial_index=trial_index))
    profile = prefix_union_profile(graph, max_ell, thresholds)
    return [rec.union_size for rec in profile], [rec.violated for rec in profile]


def coverage_event_check(
    theta: SchemeParams,
    n: int,
    beta: float,
    gamma: float,
    max_ell: int,
    trials: int,
    master_seed: int,
    threads: int = 1,
) -> CoverageEventResult:
    """Estimate how often the first ell nodes hold at most X_ell distinct keys."""
    if trials < 1:
        raise ParameterRangeError(f"trials must be at least 1, got {trials}")
    if not 1 <= max_ell <= n:
        logger.error("Prefix cap %s outside 1..%s", max_ell, n)
        raise ParameterRangeError(f"max_ell must lie in 1..{n}, got {max_ell}")
    thresholds = event_thresholds(n, theta.K[0], theta.P, beta, gamma)
    logger.info(
        "Coverage event: n=%s, L_n=%s, ell<=%s over %s trials", n, thresholds.L_n, max_ell, trials
    )
    tasks = [(theta, n, max_ell, thresholds, master_seed, t) for t in range(trials)]
    outcomes = map_ordered(_coverage_trial, tasks, threads)
    unions = np.array([u for u, _ in outcomes], dtype=np.float64)
    violated = np.array([v for _, v in outcomes], dtype=bool)

    rows = [
        CoverageEventRow(
            ell=ell,
            threshold=thresholds.threshold(ell),
            union_size=Estimate.from_samples(unions[:, ell - 1], master_seed),
            violated=Estimate.from_samples(violated[:, ell - 1], master_seed),
        )
        for ell in range(1, max_ell + 1)
    ]
    any_violated = Estimate.from_samples(violated.any(axis=1), master_seed)
    if any_violated.mean > 0.0:
        logger.warning("Coverage event violated in %.4f of trials", any_violated.mean)
    return CoverageEventResult(
        n=n,
        beta=beta,
        gamma=gamma,
        L_n=thresholds.L_n,
        max_ell=max_ell,
        rows=rows,
        any_violated=any_violated,
    )



__all__ = [
    "EdgeFrequencyResult",
    "TreeBoundResult",
    "CaptureResult",
    "CoverageEventRow",
    "CoverageEventResult",
    "edge_freq_check",
    "tree_bound_check",
    "capture_attack",
    "coverage_event_check",
]

"""
Reproducible trial harness.

Trial t always samples its graph from SeedSpec(master_seed, t), and results
are gathered in trial order before any reduction, so every estimate is
bit-identical for any worker count.
"""

import logging
import math
from multiprocessing import Pool
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.errors import ParameterRangeError
from core.model import SchemeParams
from simulation.analysis import graph_stats
from simulation.sampler import SeedSpec, build_graph


logger = logging.getLogger(__name__)

Z_95 = 1.96
AGREEMENT_SE = 3.0

Task = TypeVar("Task")
Result = TypeVar("Result")


class TrialRecord(BaseModel):
    """Observables of one trial; `no_iso_but_disconnected` is I_n = 0 and not connected."""

    model_config = ConfigDict(frozen=True)

    trial_index: int
    isolated_total: int
    class1_isolated: int
    connected: bool
    component_count: int
    no_iso_but_disconnected: bool
    first_pair_class1_isolated: bool


class Estimate(BaseModel):
    """
    Monte-Carlo mean with its standard error.

    stderr is the sample standard deviation over sqrt(trials) and the 95%
    interval is mean +- 1.96 stderr; both are None for a single trial.
    """

    model_config = ConfigDict(frozen=True)

    mean: float
    stderr: Optional[float]
    trials: int
    ci95_low: Optional[float]
    ci95_high: Optional[float]
    master_seed: int

    @classmethod
    def from_samples(cls, samples: Sequence[float], master_seed: int) -> "Estimate":
        values = np.asarray(samples, dtype=np.float64)
        if values.size == 0:
            raise ParameterRangeError("an estimate needs at least one sample")
        mean = float(values.mean())
        if values.size < 2:
            return cls(
                mean=mean, stderr=None, trials=1,
                ci95_low=None, ci95_high=None, master_seed=master_seed,
            )
        stderr = float(values.std(ddof=1) / math.sqrt(values.size))
        return cls(
            mean=mean,
            stderr=stderr,
            trials=int(values.size),
            ci95_low=mean - Z_95 * stderr,
            ci95_high=mean + Z_95 * stderr,
            master_seed=master_seed,
        )

    def agrees_with(self, value: float, k: float = AGREEMENT_SE) -> bool:
        """True when `value` lies within k standard errors of the mean."""
        return abs(self.mean - value) <= k * (self.stderr or 0.0) + 1e-12


class TrialSummary(BaseModel):
    n: int
    trials: int
    master_seed: int
    no_isolated: Estimate
    connected: Estimate
    isolated_mean: Estimate
    class1_isolated_mean: Estimate
    no_iso_but_disconnected: Estimate
    pair_class1_isolated: Estimate
    records: Optional[List[TrialRecord]] = None


def map_ordered(
    fn: Callable[[Task], Result], tasks: Sequence[Task], threads: int = 1
) -> List[Result]:
    """Apply `fn` over `tasks` on a worker pool, returning results in task order."""
    if threads <= 1 or len(tasks) < 2:
        return [fn(task) for task in tasks]
    chunksize = max(1, len(tasks) // (threads * 8))
    with Pool(processes=threads) as pool:
        return pool.map(fn, tasks, chunksize=chunksize)


def simulate_trial(task: Tuple[SchemeParams, int, int, int]) -> TrialRecord:
    theta, n, master_seed, trial_index = task
    graph = build_graph(n, theta, SeedSpec(master_seed=master_seed, trial_index=trial_index))
    stats = graph_stats(graph)
    first_pair = (
        n >= 2
        and bool(graph.classes[0] == 1 and graph.classes[1] == 1)
        and not bool(np.isin([0, 1], graph.edges).any())
    )
    return TrialRecord(
        trial_index=trial_index,
        isolated_total=stats.isolated_total,
        class1_isolated=stats.isolated_by_class[0],
        connected=stats.connected,
        component_count=stats.component_count,
        no_iso_but_disconnected=stats.isolated_total == 0 and not stats.connected,
        first_pair_class1_isolated=first_pair,
    )


def run_trials(
    theta: SchemeParams,
    n: int,
    trials: int,
    master_seed: int,
    threads: int = 1,
    keep_records: bool = False,
) -> TrialSummary:
    if trials < 1:
        raise ParameterRangeError(f"trials must be at least 1, got {trials}")
    logger.info(
        "Running %s trials at n=%s, K=%s, P=%s (seed=%s, threads=%s)",
        trials, n, theta.K, theta.P, master_seed, threads,
    )
    tasks = [(theta, n, master_seed, t) for t in range(trials)]
    records = map_ordered(simulate_trial, tasks, threads)

    def estimate(values: Sequence[float]) -> Estimate:
        return Estimate.from_samples(values, master_seed)

    summary = TrialSummary(
        n=n,
        trials=trials,
        master_seed=master_seed,
        no_isolated=estimate([rec.isolated_total == 0 for rec in records]),
        connected=estimate([rec.connected for rec in records]),
        isolated_mean=estimate([rec.isolated_total for rec in records]),
        class1_isolated_mean=estimate([rec.class1_isolated for rec in records]),
        no_iso_but_disconnected=estimate([rec.no_iso_but_disconnected for rec in records]),
        pair_class1_isolated=estimate([rec.first_pair_class1_isolated for rec in records]),
        records=records if keep_records else None,
    )
    logger.info(
        "Trials done: P[connected]=%.4f, P[I=0]=%.4f, E[I]=%.4f",
        summary.connected.mean, summary.no_isolated.mean, summary.isolated_mean.mean,
    )
    return summary


__all__ = [
    "TrialRecord",
    "Estimate",
    "TrialSummary",
    "map_ordered",
    "simulate_trial",
    "run_trials",
]

"""
Zero-one law sweeps.

Each (n, c) cell runs through the compiled cell workflow: dimension the
preset to target c at n, simulate, compare against the exact E[I_n], and
report a row. Infeasible cells are flagged in the row's status, never raised.
"""

import logging
from typing import List, Sequence

from core.errors import ParameterRangeError
from core.scaling import ScalingPreset
from montecarlo.trials import TrialRecord
from workflow.builder import build_sweep_graph
from workflow.state import SweepCellState, SweepRow


logger = logging.getLogger(__name__)


class CellTrialRecord(TrialRecord):
    """A raw trial tagged with the sweep cell it belongs to."""

    n: int
    c_target: float


def sweep(
    preset: ScalingPreset,
    c_grid: Sequence[float],
    n_grid: Sequence[int],
    trials: int,
    master_seed: int,
    threads: int = 1,
    keep_records: bool = False,
) -> List[SweepRow]:
    """
    Rows in n-major, c-minor order; every cell reuses `master_seed`.

    With `keep_records`, each feasible row also carries its raw TrialRecords.
    """
    if not c_grid or not n_grid:
        raise ParameterRangeError("sweep grids must be nonempty")
    if trials < 1:
        raise ParameterRangeError(f"trials must be at least 1, got {trials}")

    graph = build_sweep_graph(threads=threads)
    rows: List[SweepRow] = []
    for n in n_grid:
        for c in c_grid:
            logger.info("Sweep cell n=%s, c=%s", n, c)
            initial: SweepCellState = {
                "preset": preset,
                "n": int(n),
                "c_target": float(c),
                "trials": trials,
                "master_seed": master_seed,
                "keep_records": keep_records,
                "visited_steps": [],
            }
            result = graph.invoke(initial)
            rows.append(result["row"])
    return rows


def cell_records(rows: Sequence[SweepRow]) -> List[CellTrialRecord]:
    """Flatten the kept trials of every row, in row then trial order."""
    return [
        CellTrialRecord(**record.model_dump(), n=row.n, c_target=row.c_target)
        for row in rows
        for record in row.records or ()
    ]


__all__ = ["sweep", "cell_records", "CellTrialRecord", "SweepRow"]

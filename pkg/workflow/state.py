from __future__ import annotations

import operator
from typing import Annotated, List, Literal, Optional, Tuple, TypedDict

from pydantic import BaseModel, Field

from core.model import SchemeParams
from core.scaling import ScalingPreset
from montecarlo.trials import Estimate, TrialRecord, TrialSummary


CellStatus = Literal["ok", "infeasible"]


class SweepRow(BaseModel):
    """
    One row of the zero-one table.

    Infeasible cells keep n and c_target and leave every measured column None.
    `records` holds the raw trials when the sweep keeps them; it is never
    serialized with the row.
    """

    n: int
    c_target: float
    c_achieved: Optional[float] = None
    P: Optional[int] = None
    K: Optional[Tuple[int, ...]] = None
    no_isolated: Optional[Estimate] = None
    connected: Optional[Estimate] = None
    isolated_mean: Optional[Estimate] = None
    exact_isolated: Optional[float] = None
    agrees: Optional[bool] = None
    status: CellStatus = "ok"
    records: Optional[List[TrialRecord]] = Field(default=None, exclude=True)


class SweepCellState(TypedDict, total=False):
    """
    State carried through one (n, c) sweep cell.

    Notes:
    - `preset`, `n`, `c_target`, `trials`, `master_seed` are the inputs; the
      remaining keys are filled in by the steps.
    - `visited_steps` uses an operator.add reducer so each step appends its
      own name.
    """

    # Inputs
    preset: ScalingPreset
    n: int
    c_target: float
    trials: int
    master_seed: int
    keep_records: bool

    # Dimensioning
    theta: Optional[SchemeParams]
    c_achieved: Optional[float]
    status: CellStatus
    error: Optional[str]

    # Simulation and comparison
    summary: Optional[TrialSummary]
    exact_isolated: Optional[float]
    agrees: Optional[bool]

    # Output
    row: Optional[SweepRow]
    visited_steps: Annotated[List[str], operator.add]


__all__ = ["SweepCellState", "SweepRow", "CellStatus"]

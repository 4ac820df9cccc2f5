import logging
from typing import Literal

from .state import SweepCellState


logger = logging.getLogger(__name__)


def route_after_dimension(state: SweepCellState) -> Literal["report", "simulate"]:
    """
    Route after the dimension step.

    - If status == "infeasible" -> "report" (row flagged, no trials)
    - Otherwise -> "simulate"
    """
    status = state.get("status")
    logger.info("Routing after dimension with status=%s", status)
    if status == "infeasible":
        return "report"
    return "simulate"


def route_after_simulation(state: SweepCellState) -> Literal["compare", "report"]:
    """
    Route after the simulation step.

    - If trials >= 2 -> "compare" (a standard error exists)
    - Otherwise -> "report"
    """
    trials = state.get("trials", 0)
    logger.info("Routing after simulation with trials=%s", trials)
    if trials >= 2:
        return "compare"
    return "report"


__all__ = [
    "route_after_dimension",
    "route_after_simulation",
]

import logging

from montecarlo.trials import run_trials
from workflow.state import SweepCellState


logger = logging.getLogger(__name__)


class SimulationStep:
    def __init__(self, threads: int = 1) -> None:
        self.threads = threads

    def run(self, state: SweepCellState) -> SweepCellState:
        """Runs the cell's trials on the dimensioned scheme and stores the summary."""
        logger.info("Running simulation step.")
        summary = run_trials(
            state["theta"],
            state["n"],
            state["trials"],
            state["master_seed"],
            threads=self.threads,
            keep_records=state.get("keep_records", False),
        )
        return {"summary": summary, "visited_steps": ["simulate"]}


__all__ = ["SimulationStep"]

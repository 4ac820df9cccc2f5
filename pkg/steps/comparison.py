import logging

from core.exactprob import expected_isolated
from workflow.state import SweepCellState


logger = logging.getLogger(__name__)


class ComparisonStep:
    def run(self, state: SweepCellState) -> SweepCellState:
        """
        Comparison Step:
        - Evaluates the exact E[I_n] for the dimensioned scheme.
        - Sets `agrees` when the empirical mean lies within 3 standard errors of it.
        """
        logger.info("Running comparison step.")
        exact = expected_isolated(state["n"], state["theta"])
        estimate = state["summary"].isolated_mean
        agrees = estimate.agrees_with(exact)
        if not agrees:
            logger.warning(
                "E[I_n] disagreement at n=%s: empirical %.4f +- %.4f vs exact %.4f",
                state["n"], estimate.mean, estimate.stderr or 0.0, exact,
            )
        return {"exact_isolated": exact, "agrees": agrees, "visited_steps": ["compare"]}


__all__ = ["ComparisonStep"]

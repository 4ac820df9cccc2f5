import logging

from core.errors import InfeasibleDimensioningError
from core.scaling import achieved_c, instantiate
from workflow.state import SweepCellState


logger = logging.getLogger(__name__)


class DimensionStep:
    def run(self, state: SweepCellState) -> SweepCellState:
        """
        Dimension Step:
        - Retargets the preset to the cell's `c_target` and sizes the rings for `n`.
        - Sets `theta`, `c_achieved` and `status="ok"` on success.
        - Sets `status="infeasible"` and `error` when no ring size reaches the
          target; the cell is reported, not raised.
        """
        n = state["n"]
        c_target = state["c_target"]
        logger.info("Running dimension step for n=%s, c=%s.", n, c_target)
        preset = state["preset"].model_copy(update={"target_c": c_target})

        try:
            theta = instantiate(preset, n)
        except InfeasibleDimensioningError as exc:
            logger.warning("Cell (n=%s, c=%s) is infeasible: %s", n, c_target, exc)
            return {
                "theta": None,
                "status": "infeasible",
                "error": str(exc),
                "visited_steps": ["dimension"],
            }

        c_n = achieved_c(n, theta)
        logger.info("Dimensioned K=%s, P=%s, c_n=%.4f", theta.K, theta.P, c_n)
        return {
            "theta": theta,
            "c_achieved": c_n,
            "status": "ok",
            "error": None,
            "visited_steps": ["dimension"],
        }


__all__ = ["DimensionStep"]

import logging

from core.exactprob import expected_isolated
from workflow.state import SweepCellState, SweepRow


logger = logging.getLogger(__name__)


class ReportStep:
    def run(self, state: SweepCellState) -> SweepCellState:
        """
        Report Step:
        - Builds the cell's SweepRow from whatever the earlier steps produced.
        - Infeasible cells get a row with only n, c_target and the status.
        - Single-trial cells skip comparison, so the exact E[I_n] is filled here
          and `agrees` stays None.
        """
        n, c_target = state["n"], state["c_target"]
        logger.info("Running report step for n=%s, c=%s.", n, c_target)

        if state.get("status") == "infeasible":
            row = SweepRow(n=n, c_target=c_target, status="infeasible")
            return {"row": row, "visited_steps": ["report"]}

        theta = state["theta"]
        summary = state["summary"]
        exact = state.get("exact_isolated")
        if exact is None:
            exact = expected_isolated(n, theta)

        row = SweepRow(
            n=n,
            c_target=c_target,
            c_achieved=state.get("c_achieved"),
            P=theta.P,
            K=theta.K,
            no_isolated=summary.no_isolated,
            connected=summary.connected,
            isolated_mean=summary.isolated_mean,
            exact_isolated=exact,
            agrees=state.get("agrees"),
            status="ok",
            records=summary.records,
        )
        return {"row": row, "exact_isolated": exact, "visited_steps": ["report"]}


__all__ = ["ReportStep"]

import logging

from langgraph.graph import START, END, StateGraph
from langgraph.graph.state import CompiledStateGraph

from steps.comparison import ComparisonStep
from steps.dimension import DimensionStep
from steps.report import ReportStep
from steps.simulate import SimulationStep
from workflow.routing import route_after_dimension, route_after_simulation
from workflow.state import SweepCellState


logger = logging.getLogger(__name__)


def build_sweep_graph(threads: int = 1) -> CompiledStateGraph:
    """
    Construct and compile the StateGraph for one sweep cell.

    Nodes:
    - dimension
    - simulate
    - compare
    - report

    Cells are independent one-shot runs, so no checkpointer is attached.
    """
    logger.info("Building sweep cell StateGraph (threads=%s).", threads)

    builder: StateGraph[SweepCellState] = StateGraph(SweepCellState)

    builder.add_node("dimension", DimensionStep().run)
    builder.add_node("simulate", SimulationStep(threads=threads).run)
    builder.add_node("compare", ComparisonStep().run)
    builder.add_node("report", ReportStep().run)

    builder.add_edge(START, "dimension")

    builder.add_conditional_edges(
        "dimension",
        route_after_dimension,
        {
            "report": "report",
            "simulate": "simulate",
        },
    )

    builder.add_conditional_edges(
        "simulate",
        route_after_simulation,
        {
            "compare": "compare",
            "report": "report",
        },
    )

    builder.add_edge("compare", "report")
    builder.add_edge("report", END)

    graph = builder.compile()
    logger.info("Sweep cell graph compiled.")
    return graph


__all__ = ["build_sweep_graph"]

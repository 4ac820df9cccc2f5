"""
Output schemas shared by every CLI command.

Floats are written with 9 significant digits; a missing value (a standard
error of a single-trial estimate, or an infeasible cell's measurement) is
written as MISSING. Every file starts with HEADER_COMMENT lines echoing the
master seed.
"""

from typing import List, Optional, Sequence, Union

FLOAT_FORMAT = ".9g"
MISSING = "n/a"
K_SEPARATOR = ";"

HEADER_COMMENT = "# command={command} master_seed={master_seed}"
SWEEP_FOOTER = "# master_seed={master_seed} wall_time_s={wall_time:.3f}"

PROBE_HEADER = ["quantity", "i", "j", "value"]

SWEEP_HEADER = [
    "n",
    "c_target",
    "c_achieved",
    "P",
    "K",
    "p_no_isolated",
    "p_no_isolated_se",
    "p_connected",
    "p_connected_se",
    "mean_isolated",
    "mean_isolated_se",
    "exact_isolated",
    "agrees",
    "status",
]

RESILIENCE_HEADER = [
    "s",
    "pool_coverage",
    "pool_coverage_se",
    "expected_pool_coverage",
    "compromised_link_fraction",
    "compromised_link_fraction_se",
]

COVERAGE_HEADER = [
    "n",
    "c_target",
    "ell",
    "threshold",
    "mean_union",
    "mean_union_se",
    "p_violated",
    "p_violated_se",
]

Cell = Union[None, bool, int, float, str, Sequence[int]]


def condition_header(r: int) -> List[str]:
    """`n,P,K1..Kr,lambda1,c_n,P_over_n,nK1sq_over_P,gapA,saturated`."""
    return ["n", "P", *(f"K{i}" for i in range(1, r + 1)),
            "lambda1", "c_n", "P_over_n", "nK1sq_over_P", "gapA", "saturated"]


def format_cell(value: Cell) -> str:
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    if isinstance(value, (tuple, list)):
        return K_SEPARATOR.join(str(v) for v in value)
    return str(value)


def format_row(values: Sequence[Cell]) -> List[str]:
    return [format_cell(value) for value in values]


def header_comment(command: str, master_seed: Optional[int]) -> str:
    seed = MISSING if master_seed is None else master_seed
    return HEADER_COMMENT.format(command=command, master_seed=seed)


__all__ = [
    "Cell",
    "FLOAT_FORMAT",
    "MISSING",
    "PROBE_HEADER",
    "SWEEP_HEADER",
    "RESILIENCE_HEADER",
    "COVERAGE_HEADER",
    "SWEEP_FOOTER",
    "condition_header",
    "format_cell",
    "format_row",
    "header_comment",
]

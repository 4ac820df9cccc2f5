from .formats import (
    MISSING,
    PROBE_HEADER,
    RESILIENCE_HEADER,
    COVERAGE_HEADER,
    SWEEP_FOOTER,
    SWEEP_HEADER,
    condition_header,
    format_cell,
    format_row,
    header_comment,
)
from .output import write_csv, write_jsonl

__all__ = [
    "MISSING",
    "PROBE_HEADER",
    "RESILIENCE_HEADER",
    "COVERAGE_HEADER",
    "SWEEP_FOOTER",
    "SWEEP_HEADER",
    "condition_header",
    "format_cell",
    "format_row",
    "header_comment",
    "write_csv",
    "write_jsonl",
]

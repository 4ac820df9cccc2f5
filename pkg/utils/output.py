import csv
import logging
from typing import Iterable, Sequence, TextIO

from pydantic import BaseModel

from utils.formats import Cell, format_row


logger = logging.getLogger(__name__)


def write_csv(
    out: TextIO,
    header: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    comments: Sequence[str] = (),
    footer: Sequence[str] = (),
) -> int:
    """Write comment lines, the header and formatted rows; returns the row count."""
    for line in comments:
        out.write(line + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    count = 0
    for row in rows:
        writer.writerow(format_row(row))
        count += 1
    for line in footer:
        out.write(line + "\n")
    logger.debug("Wrote %s CSV rows", count)
    return count


def write_jsonl(
    out: TextIO, records: Iterable[BaseModel], comments: Sequence[str] = ()
) -> int:
    """Comment lines, then one pydantic model per line as JSON."""
    for line in comments:
        out.write(line + "\n")
    count = 0
    for record in records:
        out.write(record.model_dump_json() + "\n")
        count += 1
    logger.debug("Wrote %s JSON lines", count)
    return count


__all__ = ["write_csv", "write_jsonl"]

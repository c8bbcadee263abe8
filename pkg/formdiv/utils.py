"""Core utilities for formdiv: rendering, tables, report envelopes, worker pools."""

import json
import logging
import multiprocessing
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

from pydantic import BaseModel, ConfigDict, Field

from . import __version__


logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')

SCHEMA_VERSION = 1


def class_item(modulus: int, r: int, letter: str = 'm') -> str:
    """
    Render one residue class the way the catalog prints it.

    Examples:
        (20, 1) -> 20m+1
        (20, 19) -> 20m+19
    """
    return f"{modulus}{letter}+{r}"


def residue_item(P: int, residue: int) -> str:
    """Render a residue of N mod P as Pn+k or Pn-k, choosing |k| <= P/2."""
    if residue > P // 2:
        return f"{P}n-{P - residue}"
    return f"{P}n+{residue}"


def format_table(headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    Aligned plain-text table.

    Args:
        headers: Column titles
        rows: Row values; each is converted with str()

    Returns:
        Table text without a trailing newline
    """
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for index, row in enumerate(cells):
        lines.append('  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if index == 0:
            lines.append('  '.join('-' * width for width in widths))
    return '\n'.join(lines)


class ReportEnvelope(BaseModel):
    """Wrapper around every JSON report the CLI emits."""
    schema_version: int = Field(default=SCHEMA_VERSION, alias='schema')
    tool: str = 'formdiv'
    version: str = __version__
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    payload: Any = None

    model_config = ConfigDict(populate_by_name=True)


def dump_json(envelope: ReportEnvelope) -> str:
    """Serialize an envelope with stable key order."""
    return json.dumps(envelope.model_dump(mode='json', by_alias=True), indent=2, ensure_ascii=False)


def _make_executor(max_workers: Optional[int] = None) -> Executor:
    """
    Process pool using 'fork' so module-level work functions need no re-import.

    Falls back to threads where 'fork' is unavailable.
    """
    try:
        ctx = multiprocessing.get_context('fork')
        return ProcessPoolExecutor(max_workers=max_workers, mp_context=ctx)
    except ValueError as exc:
        logger.debug("process pool unavailable (%s); using threads", exc)
        return ThreadPoolExecutor(max_workers=max_workers)


def run_parallel(func: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> List[R]:
    """
    Map ``func`` over ``items``; results come back in input order.

    Runs serially when jobs <= 1 or there is at most one item.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    chunksize = max(1, len(items) // (jobs * 4))
    with _make_executor(max_workers=jobs) as executor:
        return list(executor.map(func, items, chunksize=chunksize))


def emit(args, command: str, parameters: Dict[str, Any], payload: Any, text: str) -> None:
    """
    Print a command result to stdout.

    Args:
        args: Parsed arguments; ``args.format`` selects json or table
        command: Subcommand name echoed in the envelope
        parameters: Effective parameters echoed in the envelope
        payload: JSON-ready payload
        text: Human-readable rendering
    """
    if getattr(args, 'format', 'table') == 'json':
        envelope = ReportEnvelope(command=command, parameters=parameters, payload=payload)
        print(dump_json(envelope))
    else:
        print(text)

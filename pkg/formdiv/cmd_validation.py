"""Validation commands: verify, errata."""

import logging
from typing import List

from .catalog import CatalogRecord, find_record, load_catalog
from .config import bounds_from_args
from .errors import UsageError
from .utils import emit, format_table
from .validators import Status, VerifySummary, verify_all


logger = logging.getLogger(__name__)


def _select_records(args) -> List[CatalogRecord]:
    records = load_catalog(getattr(args, 'catalog', None))
    if getattr(args, 'theorem', None):
        records = [find_record(records, selector) for selector in args.theorem]
    elif not getattr(args, 'all', True):
        raise UsageError("give --theorem ID or --all")
    if getattr(args, 'as_printed', False):
        records = [r.model_copy(update={'corrected': None}) for r in records]
    return records


def _parameters(args, bounds) -> dict:
    return {
        'theorem': list(args.theorem or []),
        'as_printed': args.as_printed,
        'bounds': bounds.model_dump(),
    }


def _status_line(summary: VerifySummary) -> str:
    return ', '.join(f"{status}: {count}" for status, count in summary.counts.items())


def cmd_verify(args):
    """Verify catalog records; exit 1 when any record fails."""
    bounds = bounds_from_args(args)
    records = _select_records(args)
    summary = verify_all(records, bounds, jobs=args.jobs)

    rows = []
    for report in summary.reports:
        diffs = '; '.join(d.render() for d in report.diffs) or '-'
        rows.append([report.theorem_id, report.kind.value, report.status.value, diffs])
    lines = [format_table(['record', 'kind', 'status', 'diffs'], rows), '', _status_line(summary)]
    if summary.errata:
        lines.append(f"{len(summary.errata)} erratum item(s); run `formdiv errata` for the list")
    for report in summary.reports:
        if report.status is Status.FAILED:
            unresolved = '; '.join(d.render() for d in report.unresolved)
            logger.warning("%s failed: %s", report.theorem_id, unresolved)

    emit(args, 'verify', _parameters(args, bounds), summary.model_dump(mode='json'), '\n'.join(lines))
    return 1 if summary.failed else 0


def cmd_errata(args):
    """Print every printed item that recomputation corrects, in record order."""
    bounds = bounds_from_args(args)
    records = _select_records(args)
    summary = verify_all(records, bounds, jobs=args.jobs)

    rows = [[e.theorem_id, e.field, e.printed or '-', e.computed or '-'] for e in summary.errata]
    text = format_table(['record', 'field', 'printed', 'computed'], rows)
    text += f"\n\n{len(summary.errata)} erratum item(s); {_status_line(summary)}"
    payload = {
        'errata': [e.model_dump(mode='json') for e in summary.errata],
        'counts': summary.counts,
    }
    emit(args, 'errata', _parameters(args, bounds), payload, text)
    return 1 if summary.failed else 0

"""Scan command: search non-square families for squares."""

import logging
from typing import Dict, List

from .catalog import load_catalog
from .config import bounds_from_args
from .errors import ErrorCode, UsageError
from .forms import FormSpec, Sign
from .nonsquare import NonsquareFamily, ScanReport, generate_families, parse_family, scan_family
from .utils import emit, format_table


logger = logging.getLogger(__name__)


def printed_corrections() -> Dict[str, str]:
    """Labels of printed families that the catalog corrects, mapped to the corrected text."""
    corrections: Dict[str, str] = {}
    for record in load_catalog():
        if record.corrected is None or record.corrected.families is None:
            continue
        for printed, corrected in zip(record.printed.families or [], record.corrected.families):
            if printed != corrected:
                corrections[parse_family(printed).label] = corrected
    return corrections


def _families(args) -> List[NonsquareFamily]:
    if args.generated:
        if args.n is None:
            raise UsageError("--generated needs --n")
        return generate_families(FormSpec(args.n, Sign(args.sign)))
    if args.corollary:
        return [parse_family(args.corollary)]
    if not args.family:
        raise UsageError("give --family, --corollary or --generated", code=ErrorCode.UNKNOWN_FAMILY)
    families = []
    corrections = {} if args.as_printed else printed_corrections()
    for text in args.family:
        family = parse_family(text)
        if family.label in corrections:
            replacement = corrections[family.label]
            logger.warning("%s is a printed erratum; scanning %s (use --as-printed for the printed family)",
                           family.label, replacement)
            family = parse_family(replacement)
        families.append(family)
    return families


def _bound_for(family: NonsquareFamily, args, bounds) -> int:
    if args.bound is not None:
        return bounds.scan_bound
    return bounds.corollary_bound if family.variant.is_corollary else bounds.scan_bound


def cmd_scan(args):
    """Scan families over [1, bound]; exit 1 when any square turns up."""
    bounds = bounds_from_args(args)
    families = _families(args)
    if args.shift:
        families = [shifted for family in families for shifted in (family, *family.shifted(args.shift))]

    reports: List[ScanReport] = []
    for family in families:
        reports.append(scan_family(family, _bound_for(family, args, bounds),
                                   enforce_coprime=not args.no_coprime, jobs=args.jobs))

    rows = []
    for report in reports:
        first = report.counterexamples[0] if report.counterexamples else None
        found = f"{first.assignment} -> {first.value} = {first.root}²" if first else '-'
        rows.append([report.family.label, report.bound, report.cells_scanned,
                     'clean' if report.clean else f"{len(report.counterexamples)} square(s)", found])
    text = format_table(['family', 'bound', 'cells', 'result', 'first square'], rows)
    dirty = [r for r in reports if not r.clean]
    text += f"\n\n{len(reports) - len(dirty)} clean, {len(dirty)} with squares"

    parameters = {
        'families': [f.label for f in families],
        'enforce_coprime': not args.no_coprime,
        'as_printed': args.as_printed,
        'shift': args.shift,
    }
    emit(args, 'scan', parameters, {'reports': [r.to_dict() for r in reports]}, text)
    return 1 if dirty else 0

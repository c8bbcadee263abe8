"""Form commands: classes, tables."""

import logging
from typing import Dict, List

from .catalog import find_record, load_catalog
from .errors import ErrorCode, UsageError
from .forms import (
    FormSpec,
    Sign,
    character_row,
    divisor_classes,
    forbidden_classes,
    reduced_classes,
    special_primes,
)
from .arith import is_prime
from .utils import emit, format_table, residue_item
from .validators import compare_items


logger = logging.getLogger(__name__)

TABLE_NOTES = {9: Sign.PLUS, 17: Sign.MINUS}


def cmd_classes(args):
    """Print the divisor classes of a^2 +/- N b^2, the forbidden ones and the reduction."""
    form = FormSpec(args.n, Sign(args.sign))
    classes = divisor_classes(form)
    forbidden = forbidden_classes(form)
    reduced = None if form.degenerate else reduced_classes(form)
    primes = special_primes(form)

    lines = [str(form)]
    if form.degenerate:
        lines.append(f"degenerate: N={form.n} is a square, so every odd class mod {form.modulus} holds divisors")
    summary = f"mod {form.modulus}: {' '.join(map(str, classes))}; forbidden: {' '.join(map(str, forbidden)) or 'none'}"
    if reduced is not None:
        summary += f"; reduced mod {reduced.modulus}: {' '.join(map(str, reduced))}"
    else:
        summary += "; not reducible"
    lines.append(summary)
    lines.append(f"divisor primes outside the classes: {' or '.join(map(str, primes))}")
    lines.append(f"{len(classes)} classes")

    payload = {
        'form': str(form),
        'n': form.n,
        'sign': form.sign.value,
        'modulus': form.modulus,
        'degenerate': form.degenerate,
        'count': len(classes),
        'classes': list(classes),
        'forbidden': list(forbidden),
        'reduced': reduced.to_dict() if reduced is not None else None,
        'special_primes': primes,
    }
    emit(args, 'classes', {'n': form.n, 'sign': form.sign.value}, payload, '\n'.join(lines))
    return 0


def _printed_rows(note: int) -> Dict[int, List[List[str]]]:
    record = find_record(load_catalog(), f"Note {note}")
    return {row.prime: [row.plus, row.minus] for row in record.printed.rows or []}


def cmd_tables(args):
    """
    Reproduce the Note 9 or Note 17 character table for odd primes up to --prime-max.

    Rows the catalog prints are compared against the computed row; each
    printed item that disagrees is flagged.
    """
    if args.note not in TABLE_NOTES:
        raise UsageError("tables exist for Note 9 and Note 17 only", str(args.note), code=ErrorCode.UNKNOWN_RECORD)
    if args.prime_max < 3:
        raise UsageError("--prime-max must be at least 3", str(args.prime_max))
    sign = TABLE_NOTES[args.note]
    printed = _printed_rows(args.note)

    rows = []
    table = []
    flagged = 0
    for P in range(3, args.prime_max + 1):
        if not is_prime(P):
            continue
        row = character_row(P, sign)
        flags = []
        if P in printed:
            plus, _ = compare_items(f'+{P}', printed[P][0], set(row.plus_classes), P, 'n')
            minus, _ = compare_items(f'-{P}', printed[P][1], set(row.minus_classes), P, 'n')
            flags = [d.render() for d in plus + minus]
        flagged += len(flags)
        entry = row.to_dict()
        entry['printed'] = P in printed
        entry['flags'] = flags
        rows.append(entry)
        table.append([
            P,
            ' '.join(residue_item(P, r) for r in row.plus_classes),
            ' '.join(residue_item(P, r) for r in row.minus_classes),
            '; '.join(flags) if flags else ('ok' if P in printed else '-'),
        ])

    form = 'aa+Nbb' if sign is Sign.PLUS else 'aa-Nbb'
    text = (f"Note {args.note}: divisors {form}, N by residue mod P\n"
            + format_table(['P', 'alpha = +P', 'alpha = -P', 'printed'], table))
    if flagged:
        text += f"\n{flagged} printed item(s) differ"
        logger.warning("Note %d: %d printed item(s) differ from the computed table", args.note, flagged)
    emit(args, 'tables', {'note': args.note, 'prime_max': args.prime_max},
         {'note': args.note, 'sign': sign.value, 'rows': rows}, text)
    return 0

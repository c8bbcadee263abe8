"""Command-line interface for formdiv."""

import sys
import argparse
import logging

from pydantic import ValidationError

from . import __version__
from .cmd_forms import cmd_classes, cmd_tables
from .cmd_represent import cmd_represent
from .cmd_scan import cmd_scan
from .cmd_validation import cmd_errata, cmd_verify
from .errors import ErrorCode, FormdivError, OracleFailure


logger = logging.getLogger(__name__)

_BOUND_FLAGS = {
    ErrorCode.FACTOR_CEILING: '--factor-ceiling',
    ErrorCode.PRIME_BOUND: '--representative-bound',
}


def _output_parent():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--format', choices=['table', 'json'], default='table',
                        help='Output format (default: table)')
    return parent


def _bounds_parent():
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('bounds')
    group.add_argument('--samples', type=int, help='Representative primes per class (default: 3)')
    group.add_argument('--prime-bound', type=int, help='Completeness bound for representation claims (default: 100000)')
    group.add_argument('--survey-bound', type=int, help='Prime bound for multiplier and split surveys (default: 10000)')
    group.add_argument('--harvest-bound', type=int, help='Argument bound for harvesting divisors (default: 40)')
    group.add_argument('--bound', type=int, help='Scan bound per variable (default: 300, corollaries 60)')
    group.add_argument('--corollary-bound', type=int, help='Scan bound for the abc corollaries (default: 60)')
    group.add_argument('--search-bound', type=int, help='b bound for minus-form representations (default: 10000)')
    group.add_argument('--representative-bound', type=int,
                       help='Search bound for representative primes of a class (default: 10000000)')
    group.add_argument('--factor-ceiling', type=int,
                       help='Largest trial divisor before factoring gives up (default: 1000000)')
    group.add_argument('--jobs', type=int, default=1, help='Worker processes (default: 1)')
    return parent


def create_parser():
    """Create the argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog='formdiv',
        description="Divisor classes of aa+Nbb and aa-Nbb, and verification of Euler's catalog"
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='Log progress to stderr')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='Log errors only')

    output = _output_parent()
    bounds = _bounds_parent()
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # classes command
    classes_parser = subparsers.add_parser(
        'classes',
        parents=[output],
        help='Divisor classes mod 4N'
    )
    classes_parser.add_argument('--n', type=int, required=True, help='N of aa±Nbb')
    classes_parser.add_argument('--sign', choices=['plus', 'minus'], default='plus')
    classes_parser.set_defaults(func=cmd_classes)

    # represent command
    represent_parser = subparsers.add_parser(
        'represent',
        parents=[output, bounds],
        help='Find a representation value = paa±qbb'
    )
    represent_parser.add_argument('--value', type=int, help='Value to represent')
    represent_parser.add_argument('--n', type=int, help='Use the form aa±Nbb')
    represent_parser.add_argument('--p', type=int, help='First coefficient')
    represent_parser.add_argument('--q', type=int, help='Second coefficient')
    represent_parser.add_argument('--form', help='Form as printed, e.g. 2aa+3bb')
    represent_parser.add_argument('--sign', choices=['plus', 'minus'], default='plus')
    represent_parser.add_argument('--smallest-multiplier', action='store_true',
                                  help='Find the smallest k with k*value represented')
    represent_parser.add_argument('--multipliers', action='store_true',
                                  help='Survey the smallest multipliers per class of aa+Nbb')
    represent_parser.add_argument('--split', nargs='*', metavar='FORM',
                                  help='Survey which forms represent the primes of each class')
    represent_parser.set_defaults(func=cmd_represent)

    # verify command
    verify_parser = subparsers.add_parser(
        'verify',
        parents=[output, bounds],
        help='Verify catalog records'
    )
    target = verify_parser.add_mutually_exclusive_group(required=True)
    target.add_argument('--theorem', action='append', metavar='ID',
                        help='Record id, e.g. 22, "Note 9", "Scholion 3" (repeatable)')
    target.add_argument('--all', action='store_true', help='Verify every record')
    verify_parser.add_argument('--as-printed', action='store_true',
                               help='Ignore catalog corrections')
    verify_parser.set_defaults(func=cmd_verify)

    # tables command
    tables_parser = subparsers.add_parser(
        'tables',
        parents=[output],
        help='Character tables of Note 9 and Note 17'
    )
    tables_parser.add_argument('--note', type=int, required=True, choices=[9, 17])
    tables_parser.add_argument('--prime-max', type=int, default=13, help='Largest prime P (default: 13)')
    tables_parser.set_defaults(func=cmd_tables)

    # scan command
    scan_parser = subparsers.add_parser(
        'scan',
        parents=[output, bounds],
        help='Search non-square families for squares'
    )
    scan_parser.add_argument('--family', action='append', help='Family as printed, e.g. "20mn-7(m+n)"')
    scan_parser.add_argument('--corollary', help='abc corollary, e.g. 4abc-b-c')
    scan_parser.add_argument('--generated', action='store_true', help='Scan every family derived from a form')
    scan_parser.add_argument('--n', type=int, help='N for --generated')
    scan_parser.add_argument('--sign', choices=['plus', 'minus'], default='plus')
    scan_parser.add_argument('--shift', type=int, help='Also scan coefficients A ± 4Np')
    scan_parser.add_argument('--no-coprime', action='store_true', help='Drop the coprimality conditions')
    scan_parser.add_argument('--as-printed', action='store_true', help='Scan printed errata as printed')
    scan_parser.set_defaults(func=cmd_scan)

    # errata command
    errata_parser = subparsers.add_parser(
        'errata',
        parents=[output, bounds],
        help='List printed items that recomputation corrects'
    )
    errata_parser.add_argument('--theorem', action='append', metavar='ID', help='Restrict to records')
    errata_parser.add_argument('--as-printed', action='store_true', help='Ignore catalog corrections')
    errata_parser.set_defaults(func=cmd_errata)

    return parser


def configure_logging(args) -> None:
    level = logging.WARNING
    if getattr(args, 'verbose', False):
        level = logging.DEBUG
    elif getattr(args, 'quiet', False):
        level = logging.ERROR
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def main(argv=None):
    """Main entry point for the CLI."""
    parser = create_parser()
    args = parser.parse_args(argv)
    configure_logging(args)

    if not args.command:
        parser.print_help()
        return 2

    try:
        return args.func(args)
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130
    except ValidationError as e:
        first = e.errors()[0]
        where = '.'.join(str(part) for part in first.get('loc', ()))
        print(f"Error: invalid bound {where}: {first['msg']}", file=sys.stderr)
        return 2
    except OracleFailure as e:
        flag = _BOUND_FLAGS.get(e.code, 'the bound')
        print(f"Error: {e} (raise {flag} and retry)", file=sys.stderr)
        return 2
    except FormdivError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        import traceback
        traceback.print_exc()
        return 1


if __name__ == '__main__':
    sys.exit(main())

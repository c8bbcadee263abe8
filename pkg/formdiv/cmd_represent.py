"""Representation commands: represent, with multiplier and split surveys."""

import logging

from .config import bounds_from_args
from .errors import UsageError
from .forms import FormSpec, Sign
from .represent import (
    TwoCoefForm,
    class_multiplier_survey,
    parse_form,
    represent,
    smallest_multiplier,
    split_survey,
)
from .utils import class_item, emit, format_table


logger = logging.getLogger(__name__)


def _form_from_args(args) -> TwoCoefForm:
    sign = Sign(args.sign)
    if args.form:
        return parse_form(args.form)
    if args.n is not None:
        if args.p is not None or args.q is not None:
            raise UsageError("give either --n or --p/--q, not both")
        return TwoCoefForm.principal(args.n, sign)
    if args.p is None or args.q is None:
        raise UsageError("a form is needed: --n, --p with --q, or --form")
    return TwoCoefForm(args.p, args.q, sign)


def cmd_represent(args):
    """
    Find coprime a, b with value = p*a^2 +/- q*b^2, or the smallest multiplier k.

    With --multipliers or --split the command runs a survey over the primes
    up to --survey-bound instead.
    """
    bounds = bounds_from_args(args)
    if args.multipliers:
        return _multiplier_survey(args, bounds)
    if args.split is not None:
        return _split_survey(args, bounds)
    if args.value is None:
        raise UsageError("--value is required unless a survey is requested")

    form = _form_from_args(args)
    if args.smallest_multiplier:
        found = smallest_multiplier(args.value, form, search_bound=bounds.search_bound)
        witness = found[1] if found else None
    else:
        witness = represent(args.value, form, bounds.search_bound)

    parameters = {'value': args.value, 'form': str(form), 'search_bound': bounds.search_bound,
                  'smallest_multiplier': args.smallest_multiplier}
    payload = {'form': str(form), 'value': args.value,
               'witness': witness.to_dict() if witness else None}
    emit(args, 'represent', parameters, payload, witness.render() if witness else 'none')
    return 0


def _multiplier_survey(args, bounds):
    if args.n is None:
        raise UsageError("--multipliers needs --n")
    form = FormSpec(args.n, Sign.PLUS)
    survey = class_multiplier_survey(form, bounds.survey_bound, jobs=args.jobs)
    rows = [[class_item(form.modulus, r), survey.samples.get(r, 0), ' '.join(map(str, ks)) or '-']
            for r, ks in survey.multipliers.items()]
    text = (f"smallest k with k*p = aa+{args.n}bb, primes up to {bounds.survey_bound}\n"
            + format_table(['class', 'primes', 'k'], rows))
    emit(args, 'represent', {'n': args.n, 'survey': 'multipliers', 'survey_bound': bounds.survey_bound},
         survey.to_dict(), text)
    return 0


def _split_survey(args, bounds):
    if args.n is None:
        raise UsageError("--split needs --n")
    companions = [parse_form(text) for text in args.split]
    survey = split_survey(args.n, companions, bounds.survey_bound, jobs=args.jobs)
    rows = [[class_item(4 * args.n, r), ' or '.join(names) or 'none']
            for r, names in survey.assignment.items()]
    text = (f"forms representing the primes of each class, primes up to {bounds.survey_bound}\n"
            + format_table(['class', 'forms'], rows))
    if not survey.exclusive:
        text += f"\nshared classes: {' '.join(map(str, survey.mixed))}"
    if survey.unrepresented:
        text += f"\nclasses represented by none: {' '.join(map(str, survey.unrepresented))}"
    emit(args, 'represent', {'n': args.n, 'survey': 'split', 'forms': args.split,
                             'survey_bound': bounds.survey_bound},
         survey.to_dict(), text)
    return 0

"""Verification of catalog records against independent recomputation."""

import logging
import re
from collections import Counter
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, Field

from .arith import euler_criterion, gcd, primes_up_to
from .catalog import (
    CatalogRecord,
    ClaimKind,
    Group,
    ParsedItem,
    Payload,
    parse_item,
    record_sort_key,
)
from .config import Bounds
from .errors import DomainError, OracleFailure, UsageError
from .forms import (
    FormSpec,
    Sign,
    character_row,
    divisor_classes,
    forbidden_classes,
    note6_count,
    reduce_set,
    representative_primes,
    special_primes,
)
from .nonsquare import NonsquareFamily, ScanReport, Variant, generate_families, parse_family, scan_family
from .represent import TwoCoefForm, inclusion_check, parse_form, represent, smallest_multiplier
from .utils import run_parallel


logger = logging.getLogger(__name__)

FIELD_ORDER = (
    'primes', 'classes', 'reduced', 'forms', 'represented', 'converse',
    'groups', 'rows', 'counts', 'families', 'residues', 'count',
)

_SHAPE_RE = re.compile(r'^N=(?:1|(2?)([pqrs]*))$')
_COUNT_TOKEN_RE = re.compile(r'\d+|\([pqrs]-1\)|[pqrs]-1')
_SAMPLE_PRIMES = ({'p': 3, 'q': 5, 'r': 7, 's': 11}, {'p': 5, 'q': 7, 'r': 11, 's': 13})


class Status(str, Enum):
    VERIFIED = 'verified'
    VERIFIED_WITH_ERRATA = 'verified-with-errata'
    FAILED = 'failed'


class Diff(BaseModel):
    """A printed item paired with what recomputation gives in its place."""
    field: str
    printed: Optional[str] = None
    computed: Optional[str] = None

    def render(self) -> str:
        return f"{self.printed or '(none)'} → {self.computed or '(none)'}"


class VerificationReport(BaseModel):
    theorem_id: str
    kind: ClaimKind
    status: Status
    computed: Dict[str, Any] = Field(default_factory=dict)
    diffs: List[Diff] = Field(default_factory=list)
    unresolved: List[Diff] = Field(default_factory=list)
    bounds: Dict[str, int] = Field(default_factory=dict)


class ErratumEntry(BaseModel):
    theorem_id: str
    field: str
    printed: Optional[str] = None
    computed: Optional[str] = None


class VerifySummary(BaseModel):
    counts: Dict[str, int]
    reports: List[VerificationReport]
    errata: List[ErratumEntry]

    @property
    def failed(self) -> int:
        return self.counts.get(Status.FAILED.value, 0)


def render_class(modulus: int, residues: Iterable[int], style: str, letter: str = 'm') -> str:
    """Render a class (or ± pair) in the printed style: 20m+3, 20m-1, 28m±9."""
    members = sorted(residues)
    if style == '±' and len(members) == 2:
        r = min(min(x, modulus - x) for x in members)
        return f"{modulus}{letter}±{r}"
    r = members[0]
    if style == '-':
        return f"{modulus}{letter}-{(modulus - r) % modulus}"
    return f"{modulus}{letter}+{r}"


def majority_style(items: Sequence[str], letter: str = 'm') -> str:
    """The sign style most items are printed in; '+' when none parse."""
    styles = Counter(item.style for item in (parse_item(t, letter) for t in items) if item is not None)
    return styles.most_common(1)[0][0] if styles else '+'


def _reachable(form: TwoCoefForm) -> FrozenSet[int]:
    """Residues mod 4pq taken by the form; a prime outside them is never represented."""
    M = 4 * form.product
    return frozenset(form.value(a, b) % M for a in range(M) for b in range(M))


def _prime_to_multipliers(primes: List[int],
                          multipliers: Optional[Sequence[int]]) -> Tuple[List[int], List[int]]:
    """Split off primes dividing a claimed multiplier: k*p = p*p*(k/p) has no coprime witness."""
    if not multipliers:
        return primes, []
    kept = [p for p in primes if all(k % p for k in multipliers)]
    return kept, [p for p in primes if any(k % p == 0 for k in multipliers)]


def _units(missing: Sequence[int], modulus: int, style: str) -> List[FrozenSet[int]]:
    left = set(missing)
    units = []
    for r in sorted(missing):
        if r not in left:
            continue
        unit = frozenset({r, (modulus - r) % modulus}) & left if style == '±' else frozenset({r})
        left -= unit
        units.append(unit)
    return units


def _printed_number(unit: FrozenSet[int], modulus: int, style: str) -> int:
    r = min(unit)
    if style == '±':
        return min(min(x, modulus - x) for x in unit)
    if style == '-':
        return (modulus - r) % modulus
    return r


def compare_items(field: str, items: Sequence[str], expected: Set[int], modulus: int,
                  letter: str = 'm') -> Tuple[List[Diff], Set[int]]:
    """
    Diff printed class items against the exact class set.

    An item is correct when it parses strictly, has the right modulus and
    names only members of ``expected``. Wrong items are paired with missing
    classes: first the same class read leniently, then the class whose
    printed number matches, then in order.
    """
    parsed: List[Tuple[str, Optional[ParsedItem]]] = [(text, parse_item(text, letter)) for text in items]
    style = majority_style(items, letter)

    covered: Set[int] = set()
    bad: List[Tuple[str, Optional[ParsedItem]]] = []
    for text, item in parsed:
        if item is not None and item.strict and item.modulus == modulus and item.residues <= expected:
            covered |= item.residues
        else:
            bad.append((text, item))

    diffs: List[Diff] = []
    remaining: List[Tuple[str, Optional[ParsedItem]]] = []
    for text, item in bad:
        if (item is not None and item.modulus == modulus and item.residues <= expected
                and not item.residues & covered):
            covered |= item.residues
            diffs.append(Diff(field=field, printed=text,
                              computed=render_class(modulus, item.residues, item.style, letter)))
        else:
            remaining.append((text, item))

    units = _units(sorted(expected - covered), modulus, style)
    unmatched: List[Tuple[str, str]] = []
    for text, item in remaining:
        own = item.style if item is not None else style
        match = None
        if item is not None:
            match = next((u for u in units if _printed_number(u, modulus, own) == item.residue), None)
        if match is None:
            unmatched.append((text, own))
            continue
        units.remove(match)
        diffs.append(Diff(field=field, printed=text, computed=render_class(modulus, match, own, letter)))
    for text, own in unmatched:
        unit = units.pop(0) if units else None
        computed = render_class(modulus, unit, own, letter) if unit else None
        diffs.append(Diff(field=field, printed=text, computed=computed))
    for unit in units:
        diffs.append(Diff(field=field, printed=None, computed=render_class(modulus, unit, style, letter)))
    return diffs, covered


def listed_residues(items: Sequence[str], modulus: int, letter: str = 'm') -> Set[int]:
    """Residues mod ``modulus`` named by items whose modulus divides it, read leniently."""
    found: Set[int] = set()
    for text in items:
        item = parse_item(text, letter)
        if item is None or modulus % item.modulus:
            continue
        for r in range(modulus):
            if r % item.modulus in item.residues:
                found.add(r)
    return found


def _eval_count(text: str, values: Dict[str, int]) -> Optional[int]:
    cleaned = text.replace(' ', '').replace('−', '-')
    tokens = _COUNT_TOKEN_RE.findall(cleaned)
    if not tokens or ''.join(tokens) != cleaned:
        return None
    result = 1
    for token in tokens:
        if token.isdigit():
            result *= int(token)
        else:
            result *= values[token.strip('()')[0]] - 1
    return result


def _canonical_count(even: bool, letters: str) -> str:
    if not letters:
        return '2' if even else '1'
    if len(letters) == 1 and not even:
        return f"{letters}-1"
    return ('2' if even else '') + ''.join(f"({x}-1)" for x in letters)


class RecordValidator:
    """Checks every field of one record's payload."""

    def __init__(self, record: CatalogRecord, bounds: Bounds):
        self.record = record
        self.bounds = bounds
        self.form = FormSpec(record.n, record.sign) if record.n is not None else None
        self.used: Set[str] = set()
        self.computed: Dict[str, Any] = {}
        self._cache: Dict[Tuple, Any] = {}

    def _use(self, name: str) -> int:
        self.used.add(name)
        return getattr(self.bounds, name)

    @property
    def modulus(self) -> int:
        return self.form.modulus

    def expected_classes(self) -> Set[int]:
        if self.record.kind is ClaimKind.FORBIDDEN_CLASSES:
            return set(forbidden_classes(self.form))
        return set(divisor_classes(self.form))

    def validate(self, payload: Payload) -> List[Diff]:
        """Run every check for the fields present in ``payload``."""
        diffs: List[Diff] = []
        for name in FIELD_ORDER:
            if getattr(payload, name) is None:
                continue
            diffs.extend(getattr(self, f'validate_{name}')(payload))
        return diffs

    def validate_primes(self, payload: Payload) -> List[Diff]:
        computed = special_primes(self.form)
        self.computed['primes'] = computed
        if sorted(set(payload.primes)) == computed:
            return []
        return [Diff(field='primes',
                     printed=' or '.join(str(p) for p in payload.primes),
                     computed=' or '.join(str(p) for p in computed))]

    def validate_classes(self, payload: Payload) -> List[Diff]:
        expected = self.expected_classes()
        diffs, _ = compare_items('classes', payload.classes, expected, self.modulus)
        style = majority_style(payload.classes)
        self.computed['classes'] = [render_class(self.modulus, u, style)
                                    for u in _units(sorted(expected), self.modulus, style)]
        return diffs

    def validate_reduced(self, payload: Payload) -> List[Diff]:
        full = forbidden_classes(self.form) if self.record.kind is ClaimKind.FORBIDDEN_CLASSES \
            else divisor_classes(self.form)
        reduced = reduce_set(full)
        if reduced is None:
            self.computed['reduced'] = None
            return [Diff(field='reduced', printed=', '.join(payload.reduced), computed='not reducible')]
        diffs, _ = compare_items('reduced', payload.reduced, set(reduced), reduced.modulus)
        style = majority_style(payload.reduced)
        self.computed['reduced'] = [render_class(reduced.modulus, u, style)
                                    for u in _units(list(reduced), reduced.modulus, style)]
        return diffs

    def _candidate_forms(self) -> List[TwoCoefForm]:
        n, sign = self.form.n, self.form.sign
        found = []
        for p in range(1, n + 1):
            if n % p or gcd(p, n // p) != 1:
                continue
            q = n // p
            if sign is Sign.PLUS and p > q:
                continue
            found.append(TwoCoefForm(p, q, sign))
        return found

    def validate_forms(self, payload: Payload) -> List[Diff]:
        harvest = self._use('harvest_bound')
        ceiling = self._use('factor_ceiling')
        good: List[TwoCoefForm] = []
        bad: List[str] = []
        diffs: List[Diff] = []
        inclusion = {}
        for text in payload.forms:
            try:
                form = parse_form(text)
            except DomainError:
                bad.append(text)
                continue
            if self.form is not None and (form.product != self.form.n or form.sign is not self.form.sign):
                bad.append(text)
                continue
            key = ('inclusion', form)
            if key not in self._cache:
                self._cache[key] = inclusion_check(form, harvest, ceiling)
            report = self._cache[key]
            inclusion[str(form)] = report.holds
            if not report.holds:
                diffs.append(Diff(field='forms', printed=text,
                                  computed=f"divisors outside {form.target}: {list(report.outside)}"))
            good.append(form)
        self.computed['forms'] = inclusion
        candidates = [f for f in self._candidate_forms() if f not in good] if self.form is not None else []
        for text in bad:
            replacement = candidates.pop(0) if candidates else None
            diffs.append(Diff(field='forms', printed=text, computed=str(replacement) if replacement else None))
        return diffs

    def _forms_or_principal(self, texts: Optional[Sequence[str]]) -> List[TwoCoefForm]:
        forms = []
        for text in texts or []:
            try:
                forms.append(parse_form(text))
            except DomainError:
                continue
        return forms or [TwoCoefForm.principal(self.form.n, self.form.sign)]

    def _class_primes(self, residues: Set[int], bound: int) -> List[int]:
        M = self.modulus
        return [p for p in primes_up_to(bound) if p > 2 and self.form.n % p and p % M in residues]

    def validate_represented(self, payload: Payload) -> List[Diff]:
        if not payload.represented:
            return []
        bound = self._use('prime_bound')
        search = self._use('search_bound')
        items = payload.classes if payload.classes is not None else payload.reduced or []
        residues = listed_residues(items, self.modulus) & set(divisor_classes(self.form))
        forms = self._forms_or_principal(payload.forms)
        key = ('represented', frozenset(residues), tuple(forms))
        if key not in self._cache:
            primes = self._class_primes(residues, bound)
            reach = {f: _reachable(f) for f in forms}
            misses = [p for p in primes
                      if not any(p % (4 * f.product) in reach[f] and represent(p, f, search) is not None
                                 for f in forms)]
            self._cache[key] = (len(primes), misses)
        checked, misses = self._cache[key]
        self.computed['represented'] = {'primes_checked': checked, 'misses': misses[:10]}
        if not misses:
            return []
        names = ' or '.join(str(f) for f in forms)
        return [Diff(field='represented', printed=f"primes of {', '.join(items)} are {names}",
                     computed=f"{len(misses)} primes up to {bound} are not, first {misses[0]}")]

    def validate_converse(self, payload: Payload) -> List[Diff]:
        if not payload.converse:
            return []
        samples = self._use('samples')
        bound = self._use('representative_bound')
        items = payload.classes if payload.classes is not None else payload.reduced or []
        residues = sorted(listed_residues(items, self.modulus) & set(divisor_classes(self.form)))
        top = -self.form.n if self.form.sign is Sign.PLUS else self.form.n
        failures = []
        for r in residues:
            for p in representative_primes(r, self.modulus, samples, bound):
                if euler_criterion(top, p) != 1:
                    failures.append(p)
        self.computed['converse'] = {'classes_checked': len(residues), 'failures': failures[:10]}
        if not failures:
            return []
        return [Diff(field='converse', printed='every prime of these classes is a divisor',
                     computed=f"{failures[0]} divides no value")]

    def _group_residues(self, group: Group) -> Set[int]:
        return listed_residues(group.classes, self.modulus) & set(divisor_classes(self.form))

    def validate_groups(self, payload: Payload) -> List[Diff]:
        bound = self._use('survey_bound')
        items = [text for group in payload.groups for text in group.classes]
        diffs, _ = compare_items('groups', items, set(divisor_classes(self.form)), self.modulus)
        summaries = []
        for index, group in enumerate(payload.groups):
            residues = self._group_residues(group)
            primes = self._class_primes(residues, bound)
            label = ', '.join(group.classes)
            if self.record.kind is ClaimKind.MULTIPLIER:
                candidates = group.multipliers or self.record.multipliers
                primes, excluded = _prime_to_multipliers(primes, candidates)
                form = TwoCoefForm.principal(self.form.n)
                observed: Dict[int, Set[int]] = {}
                misses = []
                for p in primes:
                    found = smallest_multiplier(p, form)
                    if found is not None:
                        observed.setdefault(p % self.modulus, set()).add(found[0])
                    if smallest_multiplier(p, form, candidates=candidates) is None:
                        misses.append(p)
                summaries.append({
                    'classes': sorted(residues),
                    'claimed': list(candidates or []),
                    'excluded': excluded,
                    'smallest_observed': {str(r): sorted(ks) for r, ks in sorted(observed.items())},
                    'misses': misses[:10],
                })
                if misses:
                    diffs.append(Diff(field='groups', printed=f"{label}: k in {candidates}",
                                      computed=f"{len(misses)} primes need another multiplier, first {misses[0]}"))
                continue
            forms = self._forms_or_principal(group.forms)
            primes, excluded = _prime_to_multipliers(primes, group.multipliers)
            misses = []
            for p in primes:
                if group.multipliers:
                    ok = any(smallest_multiplier(p, f, candidates=group.multipliers) for f in forms)
                else:
                    ok = any(represent(p, f) is not None for f in forms)
                if not ok:
                    misses.append(p)
            summary = {'classes': sorted(residues), 'forms': [str(f) for f in forms],
                       'primes': len(primes), 'misses': misses[:10], 'excluded': excluded}
            if misses:
                diffs.append(Diff(field='groups', printed=f"{label}: {' or '.join(map(str, forms))}",
                                  computed=f"{len(misses)} primes are not represented, first {misses[0]}"))
            if group.image_group is not None and group.multipliers:
                target = self._group_residues(payload.groups[group.image_group])
                strays = sorted({k * r % self.modulus for r in residues for k in group.multipliers} - target)
                summary['image_strays'] = strays
                if strays:
                    diffs.append(Diff(field='groups', printed=f"{label}: times {group.multipliers} lands in group {group.image_group}",
                                      computed=f"lands outside at {strays}"))
            summaries.append(summary)
        self.computed['groups'] = summaries
        return diffs

    def validate_rows(self, payload: Payload) -> List[Diff]:
        diffs: List[Diff] = []
        computed = []
        for row in payload.rows:
            try:
                table = character_row(row.prime, self.record.sign)
            except DomainError:
                diffs.append(Diff(field='rows', printed=str(row.prime), computed=None))
                continue
            plus, _ = compare_items(f'rows[{row.prime}].plus', row.plus, set(table.plus_classes), row.prime, 'n')
            minus, _ = compare_items(f'rows[{row.prime}].minus', row.minus, set(table.minus_classes), row.prime, 'n')
            diffs.extend(plus + minus)
            computed.append(table.to_dict())
        self.computed['rows'] = computed
        return diffs

    def validate_counts(self, payload: Payload) -> List[Diff]:
        diffs: List[Diff] = []
        computed = []
        for row in payload.counts:
            match = _SHAPE_RE.match(row.shape.replace(' ', ''))
            if not match or match.group(0) == 'N=':
                diffs.append(Diff(field='counts', printed=row.render(), computed=None))
                continue
            even, letters = bool(match.group(1)), match.group(2) or ''
            canonical = _canonical_count(even, letters)
            ok = True
            for values in _SAMPLE_PRIMES:
                N = 2 if even else 1
                for letter in letters:
                    N *= values[letter]
                if _eval_count(row.count, values) != note6_count(N):
                    ok = False
            computed.append(f"{row.shape} → {canonical}")
            if not ok:
                diffs.append(Diff(field='counts', printed=row.render(), computed=f"{row.shape} → {canonical}"))
        self.computed['counts'] = computed
        return diffs

    def _scan(self, family: NonsquareFamily) -> ScanReport:
        key = ('scan', family)
        if key not in self._cache:
            bound = self._use('corollary_bound') if family.variant.is_corollary else self._use('scan_bound')
            self._cache[key] = scan_family(family, bound)
        return self._cache[key]

    def validate_families(self, payload: Payload) -> List[Diff]:
        good: List[str] = []
        bad: List[Tuple[str, Optional[NonsquareFamily]]] = []
        scans = []
        grid_ns: Dict[Variant, Set[int]] = {}
        for text in payload.families:
            try:
                family = parse_family(text)
            except UsageError:
                bad.append((text, None))
                continue
            if not family.variant.is_corollary:
                grid_ns.setdefault(family.variant, set()).add(family.n)
            report = self._scan(family)
            scans.append({'family': text, 'cells': report.cells_scanned,
                          'counterexamples': [c.to_dict() for c in report.counterexamples[:5]]})
            if family.derivation_ok and report.clean:
                good.append(family.label)
            else:
                bad.append((text, family))
        self.computed['families'] = scans

        missing: List[NonsquareFamily] = []
        for variant, ns in grid_ns.items():
            sign = Sign.PLUS if variant is Variant.SUM else Sign.MINUS
            for n in sorted(ns):
                missing.extend(f for f in generate_families(FormSpec(n, sign)) if f.label not in good)

        diffs: List[Diff] = []
        for text, family in bad:
            replacement = None
            if family is not None and not family.variant.is_corollary:
                replacement = next((f for f in missing if f.n == family.n and f.variant is family.variant), None)
            if replacement is not None:
                missing.remove(replacement)
            diffs.append(Diff(field='families', printed=text,
                              computed=replacement.label if replacement else self._scan_summary(family)))
        for family in missing:
            diffs.append(Diff(field='families', printed=None, computed=family.label))
        return diffs

    def _scan_summary(self, family: Optional[NonsquareFamily]) -> Optional[str]:
        if family is None:
            return None
        report = self._scan(family)
        if report.clean:
            return None
        first = report.counterexamples[0]
        return f"square {first.value} at {first.assignment}"

    def validate_residues(self, payload: Payload) -> List[Diff]:
        top = self._use('reduction_max_n')
        classes = listed_residues(payload.residues, 4, 'n')
        sign = self.record.sign
        exceptions = []
        checked = 0
        for n in range(1, top + 1):
            if n % 4 not in classes:
                continue
            form = FormSpec(n, sign)
            if form.degenerate:
                continue
            checked += 1
            reducible = reduce_set(divisor_classes(form)) is not None
            if reducible != bool(payload.reducible):
                exceptions.append(n)
        self.computed['residues'] = {'checked': checked, 'exceptions': exceptions}
        if not exceptions:
            return []
        claim = 'reducible' if payload.reducible else 'not reducible'
        return [Diff(field='residues', printed=f"{', '.join(payload.residues)}: {claim}",
                     computed=f"fails for N = {exceptions[:10]}")]

    def validate_count(self, payload: Payload) -> List[Diff]:
        size = len(divisor_classes(self.form))
        expected = note6_count(self.form.n)
        self.computed['count'] = size
        diffs = []
        if payload.count != expected or size != expected:
            diffs.append(Diff(field='count', printed=str(payload.count), computed=str(size)))
        if payload.pairs is not None:
            self.computed['pairs'] = size // 2
            if payload.pairs * 2 != size:
                diffs.append(Diff(field='pairs', printed=str(payload.pairs), computed=str(size // 2)))
        return diffs


def verify_theorem(record: CatalogRecord, bounds: Optional[Bounds] = None) -> VerificationReport:
    """
    Check a record as printed, then, if that fails, with its corrections.

    OracleFailure from a bounded search propagates with the record id; it
    never becomes a failed status.
    """
    bounds = bounds or Bounds()
    validator = RecordValidator(record, bounds)
    try:
        diffs = validator.validate(record.printed)
        unresolved: List[Diff] = []
        if not diffs:
            status = Status.VERIFIED
            if record.corrected is not None:
                status = Status.FAILED
                unresolved = [Diff(field='corrected', printed='erratum recorded', computed='printed text verifies')]
        elif record.corrected is None:
            status = Status.FAILED
            unresolved = diffs
        else:
            unresolved = validator.validate(record.merged)
            status = Status.FAILED if unresolved else Status.VERIFIED_WITH_ERRATA
    except OracleFailure as exc:
        raise OracleFailure(exc.message, f"{record.id}: {exc.context}", code=exc.code)
    logger.debug("%s: %s (%d diffs)", record.id, status.value, len(diffs))
    return VerificationReport(
        theorem_id=record.id,
        kind=record.kind,
        status=status,
        computed=validator.computed,
        diffs=diffs,
        unresolved=unresolved,
        bounds={name: getattr(bounds, name) for name in sorted(validator.used)},
    )


def _verify_task(args) -> VerificationReport:
    record, bounds = args
    return verify_theorem(record, bounds)


def errata(reports: Sequence[VerificationReport]) -> List[ErratumEntry]:
    """Every diff of every report, in record-id order."""
    ordered = sorted(reports, key=lambda r: record_sort_key(r.theorem_id))
    return [
        ErratumEntry(theorem_id=r.theorem_id, field=d.field, printed=d.printed, computed=d.computed)
        for r in ordered
        for d in r.diffs
    ]


def verify_all(records: Sequence[CatalogRecord], bounds: Optional[Bounds] = None,
               jobs: int = 1) -> VerifySummary:
    """Verify every record; reports come back in catalog order for any job count."""
    bounds = bounds or Bounds()
    reports = run_parallel(_verify_task, [(record, bounds) for record in records], jobs)
    counts = {status.value: 0 for status in Status}
    for report in reports:
        counts[report.status.value] += 1
    return VerifySummary(counts=counts, reports=reports, errata=errata(reports))

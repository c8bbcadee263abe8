"""Representation witnesses k*M = p*a^2 +/- q*b^2 and the surveys built on them."""

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arith import DEFAULT_FACTOR_CEILING, factorize, is_prime, is_square, isqrt, primes_up_to
from .errors import DomainError
from .forms import FormSpec, ResidueClassSet, Sign, divisor_classes
from .utils import run_parallel


logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BOUND = 10_000

_FORM_RE = re.compile(r'^(\d*)aa([+-])(\d*)bb$')


@dataclass(frozen=True)
class TwoCoefForm:
    """
    The form p*a^2 + q*b^2 or p*a^2 - q*b^2 with gcd(p, q) = 1.

    Plus forms are stored with p <= q. Minus forms keep the given order since
    p*a^2 - q*b^2 and q*a^2 - p*b^2 are different forms.
    """
    p: int
    q: int
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise DomainError("form coefficients must be positive", f"p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError("form coefficients must be coprime", f"p={self.p}, q={self.q}")
        sign = Sign(self.sign)
        object.__setattr__(self, 'sign', sign)
        if sign is Sign.PLUS and self.p > self.q:
            p, q = self.q, self.p
            object.__setattr__(self, 'p', p)
            object.__setattr__(self, 'q', q)

    @classmethod
    def principal(cls, n: int, sign: Sign = Sign.PLUS) -> 'TwoCoefForm':
        return cls(1, n, sign)

    @property
    def product(self) -> int:
        return self.p * self.q

    @property
    def target(self) -> FormSpec:
        """The form a^2 +/- pq b^2 whose divisors this form shares."""
        return FormSpec(self.product, self.sign)

    def value(self, a: int, b: int) -> int:
        if self.sign is Sign.PLUS:
            return self.p * a * a + self.q * b * b
        return self.p * a * a - self.q * b * b

    def __str__(self) -> str:
        p = '' if self.p == 1 else str(self.p)
        q = '' if self.q == 1 else str(self.q)
        return f"{p}aa{self.sign.symbol}{q}bb"


@dataclass(frozen=True)
class RepresentationWitness:
    """multiplier * value = p*a^2 +/- q*b^2 with gcd(a, b) = 1."""
    value: int
    multiplier: int
    a: int
    b: int
    form: TwoCoefForm

    def __post_init__(self):
        if math.gcd(self.a, self.b) != 1:
            raise DomainError("witness pair is not coprime", f"a={self.a}, b={self.b}")
        if self.multiplier * self.value != self.form.value(self.a, self.b):
            raise DomainError(
                "witness does not satisfy its equation",
                f"{self.multiplier}*{self.value} != {self.form}({self.a},{self.b})",
            )

    def render(self) -> str:
        form = self.form
        lhs = str(self.value) if self.multiplier == 1 else f"{self.multiplier}·{self.value}"
        p = '' if form.p == 1 else f"{form.p}·"
        q = '' if form.q == 1 else f"{form.q}·"
        op = '+' if form.sign is Sign.PLUS else '−'
        return f"{lhs} = {p}{self.a}² {op} {q}{self.b}²"

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'multiplier': self.multiplier,
            'a': self.a,
            'b': self.b,
            'form': str(self.form),
        }


@dataclass
class MultiplierSurvey:
    """Smallest multipliers observed per admissible class."""
    form: FormSpec
    prime_bound: int
    multipliers: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    samples: Dict[int, int] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'n': self.form.n,
            'modulus': self.form.modulus,
            'prime_bound': self.prime_bound,
            'multipliers': {str(r): list(ks) for r, ks in self.multipliers.items()},
            'samples': {str(r): count for r, count in self.samples.items()},
            'warnings': list(self.warnings),
        }


@dataclass
class SplitSurvey:
    """Which of several forms represent the sampled primes of each class."""
    n: int
    forms: Tuple[TwoCoefForm, ...]
    prime_bound: int
    assignment: Dict[int, Tuple[str, ...]] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    @property
    def mixed(self) -> List[int]:
        return [r for r, names in self.assignment.items() if len(names) > 1]

    @property
    def unrepresented(self) -> List[int]:
        return [r for r, names in self.assignment.items() if not names]

    @property
    def exclusive(self) -> bool:
        """No class is shared between two of the forms."""
        return not self.mixed

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'modulus': 4 * self.n,
            'forms': [str(f) for f in self.forms],
            'prime_bound': self.prime_bound,
            'assignment': {str(r): list(names) for r, names in self.assignment.items()},
            'exclusive': self.exclusive,
            'unrepresented': self.unrepresented,
            'warnings': list(self.warnings),
        }


@dataclass
class InclusionReport:
    """Odd prime divisors of a two-coefficient form checked against a^2 +/- pq b^2."""
    form: TwoCoefForm
    harvest_bound: int
    harvested: Tuple[int, ...]
    outside: Tuple[int, ...]

    @property
    def holds(self) -> bool:
        return not self.outside

    def to_dict(self) -> dict:
        return {
            'form': str(self.form),
            'target': str(self.form.target),
            'harvest_bound': self.harvest_bound,
            'harvested': list(self.harvested),
            'outside': list(self.outside),
            'holds': self.holds,
        }


def parse_form(text: str) -> TwoCoefForm:
    """
    Read the "2aa+3bb" notation; "aa-2bb" and "3aa-bb" give minus forms.

    Raises DomainError when the text is not a two-coefficient form.
    """
    cleaned = text.strip().replace(' ', '').replace('−', '-')
    match = _FORM_RE.match(cleaned)
    if not match:
        raise DomainError("not a form of the shape paa±qbb", text)
    p, op, q = match.groups()
    return TwoCoefForm(int(p or 1), int(q or 1), Sign.PLUS if op == '+' else Sign.MINUS)


def _find_pair(total: int, form: TwoCoefForm, search_bound: int) -> Optional[Tuple[int, int]]:
    """Coprime (a, b) with form.value(a, b) == total; minimal b, then minimal a."""
    p, q = form.p, form.q
    if form.sign is Sign.PLUS:
        b_max = isqrt(total // q) if total > 0 else -1
    else:
        b_max = search_bound
    for b in range(b_max + 1):
        rest = total - q * b * b if form.sign is Sign.PLUS else total + q * b * b
        if rest < 0 or rest % p:
            continue
        square = rest // p
        if not is_square(square):
            continue
        a = isqrt(square)
        if math.gcd(a, b) == 1:
            return a, b
    return None


def represent(M: int, form: TwoCoefForm,
              search_bound: int = DEFAULT_SEARCH_BOUND) -> Optional[RepresentationWitness]:
    """
    A witness M = p*a^2 +/- q*b^2 with gcd(a, b) = 1, or None.

    Plus forms are searched exhaustively (b <= sqrt(M/q)); minus forms
    only up to b <= search_bound.
    """
    if M < 1:
        raise DomainError("represented value must be positive", f"M={M}")
    pair = _find_pair(M, form, search_bound)
    if pair is None:
        return None
    return RepresentationWitness(M, 1, pair[0], pair[1], form)


def smallest_multiplier(prime: int, form: TwoCoefForm, cap: Optional[int] = None,
                        candidates: Optional[Iterable[int]] = None,
                        search_bound: int = DEFAULT_SEARCH_BOUND,
                        ) -> Optional[Tuple[int, RepresentationWitness]]:
    """
    Smallest k such that k*prime is represented with coprime arguments.

    Without ``candidates`` every k in [1, cap] is tried (cap defaults to
    4*p*q); with them only the listed multipliers are.
    """
    if prime < 3 or not is_prime(prime):
        raise DomainError("multiplier search needs an odd prime", f"prime={prime}")
    if form.product % prime == 0:
        raise DomainError("prime divides the form's coefficients", f"prime={prime}, form={form}")
    if cap is None:
        cap = 4 * form.product
    ks = sorted(set(candidates)) if candidates is not None else range(1, cap + 1)
    for k in ks:
        pair = _find_pair(k * prime, form, search_bound)
        if pair is not None:
            return k, RepresentationWitness(prime, k, pair[0], pair[1], form)
    return None


def _sampled_primes(n: int, prime_bound: int) -> List[int]:
    return [p for p in primes_up_to(prime_bound) if p > 2 and n % p != 0]


def _multiplier_task(args) -> Optional[int]:
    prime, form, cap, candidates = args
    found = smallest_multiplier(prime, form, cap, candidates)
    return None if found is None else found[0]


def class_multiplier_survey(form_n: FormSpec, prime_bound: int, cap: Optional[int] = None,
                            candidates: Optional[Sequence[int]] = None,
                            jobs: int = 1) -> MultiplierSurvey:
    """
    Smallest multiplier of every prime <= prime_bound in each admissible class.

    A class with no sampled prime, or a prime with no multiplier, becomes a
    warning entry.
    """
    if form_n.sign is not Sign.PLUS:
        raise DomainError("multiplier surveys are defined for plus forms", str(form_n))
    form = TwoCoefForm.principal(form_n.n)
    classes = divisor_classes(form_n)
    primes = [p for p in _sampled_primes(form_n.n, prime_bound)
              if p % form_n.modulus in classes]
    cap = cap if cap is not None else 4 * form_n.n
    ks = run_parallel(_multiplier_task, [(p, form, cap, candidates) for p in primes], jobs)

    survey = MultiplierSurvey(form_n, prime_bound)
    seen: Dict[int, set] = {r: set() for r in classes}
    for p, k in zip(primes, ks):
        r = p % form_n.modulus
        survey.samples[r] = survey.samples.get(r, 0) + 1
        if k is None:
            survey.warnings.append(f"class {r}: prime {p} has no multiplier up to {cap}")
        else:
            seen[r].add(k)
    for r in classes:
        if not survey.samples.get(r):
            survey.warnings.append(f"class {r}: no primes up to {prime_bound}")
        survey.multipliers[r] = tuple(sorted(seen[r]))
    for message in survey.warnings:
        logger.warning("%s: %s", form_n, message)
    return survey


def _split_task(args) -> Tuple[str, ...]:
    prime, forms = args
    return tuple(str(f) for f in forms if represent(prime, f) is not None)


def split_survey(n: int, companions: Sequence[TwoCoefForm], prime_bound: int,
                 jobs: int = 1) -> SplitSurvey:
    """
    For each admissible class of a^2 + n b^2, the forms that represent its primes.

    ``companions`` lists the forms beside a^2 + n b^2 (the principal form is
    added when missing); each must have p*q = n.
    """
    forms: List[TwoCoefForm] = [TwoCoefForm.principal(n)]
    for companion in companions:
        if companion.sign is not Sign.PLUS or companion.product != n:
            raise DomainError("companion form must be a plus form with p*q = n", f"{companion}, n={n}")
        if companion not in forms:
            forms.append(companion)
    target = FormSpec(n, Sign.PLUS)
    classes = divisor_classes(target)
    primes = [p for p in _sampled_primes(n, prime_bound)
              if p % target.modulus in classes]
    represented = run_parallel(_split_task, [(p, tuple(forms)) for p in primes], jobs)

    survey = SplitSurvey(n, tuple(forms), prime_bound)
    seen: Dict[int, set] = {r: set() for r in classes}
    counted: Dict[int, int] = {r: 0 for r in classes}
    for p, names in zip(primes, represented):
        r = p % target.modulus
        counted[r] += 1
        seen[r].update(names)
    order = [str(f) for f in forms]
    for r in classes:
        if not counted[r]:
            survey.warnings.append(f"class {r}: no primes up to {prime_bound}")
        survey.assignment[r] = tuple(name for name in order if name in seen[r])
    if survey.mixed:
        logger.info("n=%d: classes shared between forms: %s", n, survey.mixed)
    if survey.unrepresented:
        logger.info("n=%d: classes represented by none of %s: %s", n, order, survey.unrepresented)
    return survey


def inclusion_check(companion: TwoCoefForm, harvest_bound: int,
                    ceiling: int = DEFAULT_FACTOR_CEILING) -> InclusionReport:
    """
    Harvest odd prime divisors (coprime to pq) of the form over coprime pairs
    up to ``harvest_bound`` and check their classes against a^2 +/- pq b^2.
    """
    if harvest_bound < 2:
        raise DomainError("harvest bound must be at least 2", f"bound={harvest_bound}")
    target = companion.target
    allowed: ResidueClassSet = divisor_classes(target)
    harvested = set()
    for a in range(1, harvest_bound + 1):
        for b in range(1, harvest_bound + 1):
            if math.gcd(a, b) != 1:
                continue
            value = abs(companion.value(a, b))
            if value == 0:
                continue
            for p in set(factorize(value, ceiling)):
                if p != 2 and companion.product % p != 0:
                    harvested.add(p % target.modulus)
    outside = tuple(sorted(r for r in harvested if r not in allowed))
    return InclusionReport(companion, harvest_bound, tuple(sorted(harvested)), outside)

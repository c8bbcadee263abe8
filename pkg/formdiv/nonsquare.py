"""Families of integers that are never squares, and bounded scans that test them.

Two sources feed the families. A class 4Nm+A that holds no divisor of
a^2 + Nb^2 makes 4Nmn + A(m+n) a non-square; a class that holds no divisor of
a^2 - Nb^2 does the same for 4Nmn +/- A(m-n). The four abc corollaries follow
from the reduction rules for the divisor classes.
"""

import itertools
import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import checked, is_square, isqrt
from .errors import DomainError, ErrorCode, UsageError
from .forms import FormSpec, Sign, forbidden_classes
from .utils import run_parallel


logger = logging.getLogger(__name__)

_GRID_RE = re.compile(r'^(\d+)mn([+\-±])(\d*)\(m([+-])n\)$')

_COROLLARY_TEXT = {
    '4abc-b-c': 'abc-4',
    '2abc-b-c': 'abc-2-minus',
    '2abc-b+c': 'abc-2-mixed',
    '2abc±c+b': 'abc-2-pm',
    '2abc+c+b': 'abc-2-pm',
    '2abc-c+b': 'abc-2-pm',
}


class Variant(str, Enum):
    SUM = 'sum'
    DIFFERENCE = 'difference'
    ABC4 = 'abc-4'
    ABC2_MINUS = 'abc-2-minus'
    ABC2_MIXED = 'abc-2-mixed'
    ABC2_PM = 'abc-2-pm'

    @property
    def is_corollary(self) -> bool:
        return self not in (Variant.SUM, Variant.DIFFERENCE)


@dataclass(frozen=True)
class NonsquareFamily:
    """
    One never-a-square expression with its scan conditions.

    Grid variants carry N and the coefficient A; the abc variants carry
    neither. ``shift`` records the p of a shifted family A +/- 4Np.
    """
    variant: Variant
    n: Optional[int] = None
    coefficient: Optional[int] = None
    shift: int = 0

    def __post_init__(self):
        variant = Variant(self.variant)
        object.__setattr__(self, 'variant', variant)
        if variant.is_corollary:
            if self.n is not None or self.coefficient is not None:
                raise DomainError("abc families take no N or coefficient", variant.value)
            return
        if self.n is None or self.n < 1:
            raise DomainError("grid families need a positive N", f"n={self.n}")
        if not self.coefficient:
            raise DomainError("grid families need a nonzero coefficient", f"A={self.coefficient}")

    @property
    def variables(self) -> Tuple[str, ...]:
        return ('a', 'b', 'c') if self.variant.is_corollary else ('m', 'n')

    @property
    def signs(self) -> Tuple[int, ...]:
        """Signs the family is scanned under; the printed ± means both."""
        if self.variant in (Variant.DIFFERENCE, Variant.ABC2_PM):
            return (1, -1)
        return (1,)

    @property
    def modulus(self) -> Optional[int]:
        return None if self.n is None else 4 * self.n

    @property
    def conditions(self) -> Tuple[str, ...]:
        A = self.coefficient
        if self.variant is Variant.SUM:
            return (f"gcd(m,{abs(A)})=1", f"gcd(n,{abs(A)})=1")
        if self.variant is Variant.DIFFERENCE:
            return (f"gcd(m,{abs(A)})=1", f"gcd(n,{abs(A)})=1", "m≠n")
        if self.variant is Variant.ABC2_MINUS:
            return ("b≡3 or c≡3 (mod 4)",)
        if self.variant is Variant.ABC2_MIXED:
            return ("a odd", "b≡1 or 2 (mod 4)")
        if self.variant is Variant.ABC2_PM:
            return ("a odd", "b≡2 or 3 (mod 4)")
        return ()

    @property
    def label(self) -> str:
        if self.variant is Variant.ABC4:
            return '4abc-b-c'
        if self.variant is Variant.ABC2_MINUS:
            return '2abc-b-c'
        if self.variant is Variant.ABC2_MIXED:
            return '2abc-b+c'
        if self.variant is Variant.ABC2_PM:
            return '2abc±c+b'
        A = self.coefficient
        if self.variant is Variant.DIFFERENCE:
            return f"{self.modulus}mn±{abs(A)}(m-n)"
        op = '+' if A > 0 else '-'
        coef = '' if abs(A) == 1 else str(abs(A))
        return f"{self.modulus}mn{op}{coef}(m+n)"

    @property
    def derivation_ok(self) -> bool:
        """
        The coefficient is odd, prime to N, and lies in a class holding no
        divisor of the matching form (plus for sums, minus for differences).
        """
        if self.variant.is_corollary:
            return True
        A = self.coefficient
        if A % 2 == 0 or math.gcd(A, self.n) != 1:
            return False
        sign = Sign.PLUS if self.variant is Variant.SUM else Sign.MINUS
        return A % self.modulus in forbidden_classes(FormSpec(self.n, sign))

    def value(self, values: Sequence[int], sign: int = 1) -> int:
        """Family value at an assignment; every product is range-checked."""
        if self.variant is Variant.SUM:
            m, n = values
            return checked(checked(self.modulus * m * n) + checked(self.coefficient * (m + n)))
        if self.variant is Variant.DIFFERENCE:
            m, n = values
            return checked(checked(self.modulus * m * n) + checked(sign * self.coefficient * (m - n)))
        a, b, c = values
        abc = checked(a * b * c)
        if self.variant is Variant.ABC4:
            return checked(4 * abc - b - c)
        if self.variant is Variant.ABC2_MINUS:
            return checked(2 * abc - b - c)
        if self.variant is Variant.ABC2_MIXED:
            return checked(2 * abc - b + c)
        return checked(2 * abc + sign * c + b)

    def admits(self, values: Sequence[int], enforce_coprime: bool = True) -> bool:
        """True iff the assignment satisfies the family's side conditions."""
        if self.variant in (Variant.SUM, Variant.DIFFERENCE):
            m, n = values
            if self.variant is Variant.DIFFERENCE and m == n:
                return False
            A = abs(self.coefficient)
            return not enforce_coprime or (math.gcd(m, A) == 1 and math.gcd(n, A) == 1)
        a, b, c = values
        if self.variant is Variant.ABC2_MINUS:
            return b % 4 == 3 or c % 4 == 3
        if self.variant is Variant.ABC2_MIXED:
            return a % 2 == 1 and b % 4 in (1, 2)
        if self.variant is Variant.ABC2_PM:
            return a % 2 == 1 and b % 4 in (2, 3)
        return True

    def shifted(self, p: int) -> Tuple['NonsquareFamily', 'NonsquareFamily']:
        """The families with coefficient A + 4Np and A - 4Np."""
        if self.variant.is_corollary:
            raise DomainError("abc families have no shift", self.label)
        if p < 1:
            raise DomainError("shift must be positive", f"p={p}")
        step = self.modulus * p
        return (
            NonsquareFamily(self.variant, self.n, self.coefficient + step, self.shift + p),
            NonsquareFamily(self.variant, self.n, self.coefficient - step, self.shift + p),
        )

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'variant': self.variant.value,
            'n': self.n,
            'coefficient': self.coefficient,
            'shift': self.shift,
            'conditions': list(self.conditions),
            'derivation_ok': self.derivation_ok,
        }


@dataclass(frozen=True)
class Counterexample:
    assignment: Dict[str, int]
    value: int
    root: int

    def to_dict(self) -> dict:
        return {'assignment': dict(self.assignment), 'value': self.value, 'root': self.root}


@dataclass
class ScanReport:
    """Outcome of scanning a family over [1, bound] in every variable."""
    family: NonsquareFamily
    bound: int
    enforce_coprime: bool = True
    cells_scanned: int = 0
    counterexamples: List[Counterexample] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.counterexamples

    def add(self, values: Sequence[int], sign: int, value: int) -> None:
        """Record a square; the assignment is re-verified before it is kept."""
        if not self.family.admits(values, self.enforce_coprime):
            raise DomainError("counterexample violates the family conditions", str(values))
        if self.family.value(values, sign) != value or not is_square(value):
            raise DomainError("counterexample is not a square of the family", f"{values} -> {value}")
        assignment = dict(zip(self.family.variables, values))
        if len(self.family.signs) > 1:
            assignment['sign'] = sign
        self.counterexamples.append(Counterexample(assignment, value, isqrt(value)))

    def to_dict(self) -> dict:
        return {
            'family': self.family.to_dict(),
            'bound': self.bound,
            'enforce_coprime': self.enforce_coprime,
            'cells_scanned': self.cells_scanned,
            'clean': self.clean,
            'counterexamples': [c.to_dict() for c in self.counterexamples],
        }


def generate_families(form: FormSpec) -> List[NonsquareFamily]:
    """
    Families derived from the classes that hold no divisor of ``form``.

    Plus form: each forbidden class c gives 4Nmn + (c-4N)(m+n) and
    4Nmn + c(m+n). Minus form: each forbidden class c gives 4Nmn ± c(m-n).
    """
    forbidden = forbidden_classes(form)
    if form.sign is Sign.PLUS:
        first = [NonsquareFamily(Variant.SUM, form.n, c - form.modulus) for c in forbidden]
        second = [NonsquareFamily(Variant.SUM, form.n, c) for c in forbidden]
        return sorted(first, key=lambda f: abs(f.coefficient)) + sorted(second, key=lambda f: -f.coefficient)
    return [NonsquareFamily(Variant.DIFFERENCE, form.n, c) for c in forbidden]


def parse_family(text: str) -> NonsquareFamily:
    """
    Read a family as printed: "20mn-7(m+n)", "28mn±8(m-n)", "4abc-b-c".

    Raises UsageError for anything else.
    """
    cleaned = text.strip().replace(' ', '').replace('−', '-')
    if cleaned in _COROLLARY_TEXT:
        return NonsquareFamily(Variant(_COROLLARY_TEXT[cleaned]))
    match = _GRID_RE.match(cleaned)
    if not match:
        raise UsageError("unrecognized family", text, code=ErrorCode.UNKNOWN_FAMILY)
    modulus, op, coef, inner = match.groups()
    modulus = int(modulus)
    if modulus % 4:
        raise UsageError("leading coefficient must be 4N", text, code=ErrorCode.UNKNOWN_FAMILY)
    magnitude = int(coef or 1)
    if inner == '+':
        if op == '±':
            raise UsageError("sum families carry a single sign", text, code=ErrorCode.UNKNOWN_FAMILY)
        return NonsquareFamily(Variant.SUM, modulus // 4, magnitude if op == '+' else -magnitude)
    return NonsquareFamily(Variant.DIFFERENCE, modulus // 4, magnitude)


def _scan_slice(args) -> Tuple[int, List[Tuple[Tuple[int, ...], int, int]]]:
    family, first, bound, enforce_coprime = args
    cells = 0
    squares = []
    for tail in itertools.product(range(1, bound + 1), repeat=len(family.variables) - 1):
        values = (first,) + tail
        if not family.admits(values, enforce_coprime):
            continue
        for sign in family.signs:
            cells += 1
            value = family.value(values, sign)
            if value >= 0 and is_square(value):
                squares.append((values, sign, value))
    return cells, squares


def scan_family(family: NonsquareFamily, bound: int, enforce_coprime: bool = True,
                jobs: int = 1) -> ScanReport:
    """
    Scan every assignment in [1, bound] that meets the family's conditions.

    Negative values count as scanned cells and are never squares. With
    ``enforce_coprime=False`` the coprimality conditions are dropped.
    """
    if bound < 2:
        raise DomainError("scan bound must be at least 2", f"bound={bound}")
    report = ScanReport(family, bound, enforce_coprime)
    slices = run_parallel(
        _scan_slice,
        [(family, first, bound, enforce_coprime) for first in range(1, bound + 1)],
        jobs,
    )
    for cells, squares in slices:
        report.cells_scanned += cells
        for values, sign, value in squares:
            report.add(values, sign, value)
    logger.debug("scanned %s to %d: %d cells, %d squares",
                 family.label, bound, report.cells_scanned, len(report.counterexamples))
    return report


def scan_corollary(variant: Variant, bound: int, jobs: int = 1) -> ScanReport:
    """Scan one of the abc corollaries under its printed side conditions."""
    variant = Variant(variant)
    if not variant.is_corollary:
        raise DomainError("not an abc corollary", variant.value)
    return scan_family(NonsquareFamily(variant), bound, jobs=jobs)

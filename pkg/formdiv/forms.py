"""Residue classes containing the prime divisors of x^2 + N y^2 and x^2 - N y^2.

A class r mod 4N is admissible when some prime congruent to r divides a value
of the form with coprime arguments. The fast path decides this with the
Kronecker symbol (D/r), D = -4N for the plus form and +4N for the minus form;
``divisor_classes_oracle`` is the brute-force harvest the fast path is tested
against.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Set, Tuple

from .arith import (
    euler_criterion,
    factorize,
    is_prime,
    is_square,
    is_squarefree,
    kronecker,
    prime_factors,
    primes_in_class,
    DEFAULT_FACTOR_CEILING,
)
from .errors import DomainError, ErrorCode, OracleFailure


logger = logging.getLogger(__name__)


class Sign(str, Enum):
    """Sign between the two squares of a form."""
    PLUS = 'plus'
    MINUS = 'minus'

    @property
    def symbol(self) -> str:
        return '+' if self is Sign.PLUS else '-'


@dataclass(frozen=True)
class FormSpec:
    """The form a^2 + N b^2 (plus) or a^2 - N b^2 (minus)."""
    n: int
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("N must be positive", f"n={self.n}")
        object.__setattr__(self, 'sign', Sign(self.sign))

    @property
    def degenerate(self) -> bool:
        """x^2 - N y^2 with N a perfect square factors over the integers."""
        return self.sign is Sign.MINUS and is_square(self.n)

    @property
    def modulus(self) -> int:
        return 4 * self.n

    @property
    def discriminant(self) -> int:
        return -4 * self.n if self.sign is Sign.PLUS else 4 * self.n

    def value(self, a: int, b: int) -> int:
        if self.sign is Sign.PLUS:
            return a * a + self.n * b * b
        return a * a - self.n * b * b

    def __str__(self) -> str:
        coef = '' if self.n == 1 else str(self.n)
        return f"aa{self.sign.symbol}{coef}bb"


@dataclass(frozen=True)
class ResidueClassSet:
    """Sorted set of odd residues coprime to ``modulus``."""
    modulus: int
    members: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError("modulus must be positive", f"modulus={self.modulus}")
        members = tuple(sorted(set(self.members)))
        for r in members:
            if not 0 < r < self.modulus and not (self.modulus == 1 and r == 0):
                raise DomainError("residue outside [1, modulus)", f"{r} mod {self.modulus}")
            if math.gcd(r, self.modulus) != 1 or (self.modulus % 2 == 0 and r % 2 == 0):
                raise DomainError("residue not odd and coprime to modulus", f"{r} mod {self.modulus}")
        object.__setattr__(self, 'members', members)

    def __contains__(self, r: int) -> bool:
        return r % self.modulus in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {'modulus': self.modulus, 'members': list(self.members)}


@dataclass(frozen=True)
class CharacterRow:
    """Which residues of N mod P make +P (rather than -P) a divisor class."""
    prime: int
    sign_of_form: Sign
    plus_classes: Tuple[int, ...]
    minus_classes: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            'prime': self.prime,
            'sign': self.sign_of_form.value,
            'plus_classes': list(self.plus_classes),
            'minus_classes': list(self.minus_classes),
        }


def units(modulus: int) -> List[int]:
    """Odd residues in [1, modulus) coprime to modulus."""
    return [r for r in range(1, modulus) if r % 2 == 1 and math.gcd(r, modulus) == 1]


def divisor_classes(form: FormSpec) -> ResidueClassSet:
    """
    Admissible classes 4Nm + alpha for the prime divisors of the form.

    For a degenerate minus form every unit is admissible.
    """
    D = form.discriminant
    members = [r for r in units(form.modulus) if kronecker(D, r) == 1]
    return ResidueClassSet(form.modulus, tuple(members))


def forbidden_classes(form: FormSpec) -> ResidueClassSet:
    """Units mod 4N that contain no prime divisor of the form."""
    admissible = set(divisor_classes(form).members)
    members = [r for r in units(form.modulus) if r not in admissible]
    return ResidueClassSet(form.modulus, tuple(members))


def divisor_classes_oracle(form: FormSpec, harvest_bound: int,
                           ceiling: int = DEFAULT_FACTOR_CEILING) -> ResidueClassSet:
    """
    Classes of the odd prime divisors (not dividing N) of form values.

    Harvests every coprime pair 1 <= a, b <= harvest_bound, factorizes
    |value| and records the residues mod 4N. Zero values are skipped.
    """
    if harvest_bound < 2:
        raise DomainError("harvest bound must be at least 2", f"bound={harvest_bound}")
    seen: Set[int] = set()
    for a in range(1, harvest_bound + 1):
        for b in range(1, harvest_bound + 1):
            if math.gcd(a, b) != 1:
                continue
            value = abs(form.value(a, b))
            if value == 0:
                continue
            for p in set(factorize(value, ceiling)):
                if p != 2 and form.n % p != 0:
                    seen.add(p % form.modulus)
    logger.debug("harvest %s bound=%d found %d classes", form, harvest_bound, len(seen))
    return ResidueClassSet(form.modulus, tuple(seen))


def reduce_set(classes: ResidueClassSet) -> Optional[ResidueClassSet]:
    """
    Halve the modulus when the set is stable under adding half of it.

    Returns None when the modulus is odd or some r + modulus/2 falls outside
    the set.
    """
    if classes.modulus % 2:
        return None
    half = classes.modulus // 2
    members = set(classes.members)
    if any((r + half) % classes.modulus not in members for r in members):
        return None
    return ResidueClassSet(half, tuple(r % half for r in members))


def reduced_classes(form: FormSpec) -> Optional[ResidueClassSet]:
    """Divisor classes mod 2N, or None when the form does not reduce."""
    return reduce_set(divisor_classes(form))


def reduced_forbidden_classes(form: FormSpec) -> Optional[ResidueClassSet]:
    return reduce_set(forbidden_classes(form))


def note6_count(n: int) -> int:
    """
    Predicted number of divisor classes for a squarefree N.

    Odd N = p q r ...: (p-1)(q-1)(r-1)...; even N = 2 p q ...: twice that;
    N = 1 and N = 2 give 1 and 2. All equal phi(4N)/2.
    """
    if n < 1:
        raise DomainError("N must be positive", f"n={n}")
    if not is_squarefree(n):
        raise DomainError("count table covers squarefree N only", f"n={n}")
    count = 2 if n % 2 == 0 else 1
    for p in prime_factors(n):
        if p != 2:
            count *= p - 1
    return count


def closure_holds(classes: ResidueClassSet) -> bool:
    """True iff the set is closed under multiplication mod its modulus."""
    members = set(classes.members)
    return all(x * y % classes.modulus in members for x in members for y in members)


def seed_classes(form: FormSpec) -> ResidueClassSet:
    """
    Residues every divisor-class set must contain.

    Odd squares coprime to 4N, and the odd values a^2 + N (plus form) or
    a^2 - N and N - a^2 (minus form) coprime to 4N.
    """
    modulus = form.modulus
    seeds: Set[int] = set()
    for a in range(modulus):
        square = a * a
        if square % 2 == 1 and math.gcd(square, modulus) == 1:
            seeds.add(square % modulus)
        if form.sign is Sign.PLUS:
            candidates = [square + form.n]
        else:
            candidates = [square - form.n, form.n - square]
        for value in candidates:
            if value % 2 == 1 and math.gcd(value, modulus) == 1:
                seeds.add(value % modulus)
    return ResidueClassSet(modulus, tuple(seeds))


def character_row(P: int, sign_of_form: Sign) -> CharacterRow:
    """
    Split the nonzero residues of N mod P by whether +P is a divisor class.

    Minus form: +P admissible iff N is a square mod P. Plus form: iff N is a
    square mod P exactly when P = 1 mod 4.
    """
    if P < 3 or P % 2 == 0 or not is_prime(P):
        raise DomainError("character rows are defined for odd primes", f"P={P}")
    sign_of_form = Sign(sign_of_form)
    plus, minus = [], []
    for residue in range(1, P):
        D = -4 * residue if sign_of_form is Sign.PLUS else 4 * residue
        (plus if kronecker(D, P) == 1 else minus).append(residue)
    return CharacterRow(P, sign_of_form, tuple(plus), tuple(minus))


def special_primes(form: FormSpec) -> List[int]:
    """2 and the primes of N: the divisors listed outside the classes."""
    return sorted({2} | set(prime_factors(form.n)))


def representative_primes(r: int, modulus: int, samples: int, bound: int) -> List[int]:
    """First ``samples`` primes in a class; OracleFailure if the bound runs out."""
    primes = primes_in_class(r, modulus, samples, bound)
    if len(primes) < samples:
        raise OracleFailure(
            "representative-prime bound exhausted",
            f"{r} mod {modulus}, bound {bound}",
            code=ErrorCode.PRIME_BOUND,
        )
    return primes


def class_independent(form: FormSpec, r: int, samples: int, bound: int) -> bool:
    """
    Euler's criterion gives one symbol for all sampled primes of the class.

    The symbol checked is (-N/p) for the plus form and (N/p) for the minus form.
    """
    top = -form.n if form.sign is Sign.PLUS else form.n
    symbols = {euler_criterion(top, p) for p in representative_primes(r, form.modulus, samples, bound)}
    return len(symbols) == 1

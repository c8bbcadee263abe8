"""Exact integer kernel: gcd, powers, Jacobi/Kronecker symbols, primes, factoring.

All functions are pure. Inputs are Python ints; anything that must stay inside
the signed 64-bit range goes through ``checked``.
"""

import math
from typing import List, Literal

from .errors import ArithmeticOverflow, DomainError, ErrorCode, OracleFailure


SymbolValue = Literal[-1, 0, 1]

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

# Deterministic Miller-Rabin: these bases decide every n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 1 << 64

DEFAULT_FACTOR_CEILING = 1_000_000


def checked(value: int) -> int:
    """Return value unchanged, or raise if it does not fit a signed 64-bit int."""
    if value < INT64_MIN or value > INT64_MAX:
        raise ArithmeticOverflow("value outside signed 64-bit range", str(value))
    return value


def gcd(a: int, b: int) -> int:
    """Greatest common divisor, always non-negative; gcd(0, 0) = 0."""
    return math.gcd(a, b)


def modpow(base: int, exp: int, modulus: int) -> int:
    """base**exp mod modulus, in [0, modulus)."""
    if modulus < 1:
        raise DomainError("modulus must be positive", f"modulus={modulus}")
    if exp < 0:
        raise DomainError("exponent must be non-negative", f"exp={exp}")
    return pow(base, exp, modulus)


def jacobi(a: int, n: int) -> SymbolValue:
    """
    Jacobi symbol (a/n) for odd positive n.

    Returns 0 exactly when gcd(a, n) > 1. For prime n this is the Legendre
    symbol and agrees with Euler's criterion.
    """
    if n < 1 or n % 2 == 0:
        raise DomainError("Jacobi symbol needs an odd positive modulus", f"n={n}")
    sign = 1
    a %= n
    while a:
        # (2/n) = -1 iff n = 3, 5 mod 8
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def kronecker(D: int, r: int) -> SymbolValue:
    """
    Kronecker symbol (D/r) for odd positive r.

    For negative D the sign is split off explicitly:
    (D/r) = (-1/r) * (|D|/r) with (-1/r) = (-1)^((r-1)/2).
    """
    if r < 1 or r % 2 == 0:
        raise DomainError("Kronecker symbol needs an odd positive r", f"r={r}")
    if D >= 0:
        return jacobi(D, r)
    minus_one = 1 if r % 4 == 1 else -1
    return minus_one * jacobi(-D, r)


def euler_criterion(a: int, p: int) -> SymbolValue:
    """a^((p-1)/2) mod p for an odd prime p, mapped onto {-1, 0, 1}."""
    if p < 3 or p % 2 == 0:
        raise DomainError("Euler's criterion needs an odd prime", f"p={p}")
    value = pow(a, (p - 1) // 2, p)
    if value == 0:
        return 0
    if value == 1:
        return 1
    if value == p - 1:
        return -1
    raise DomainError("modulus is not prime", f"p={p}")


def _miller_rabin_round(n: int, d: int, r: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2^64."""
    if n < 0:
        raise DomainError("primality is defined for non-negative integers", f"n={n}")
    if n >= _MR_LIMIT:
        raise DomainError("n is too large for the deterministic base set", f"n={n}")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    return all(_miller_rabin_round(n, d, r, a) for a in _MR_BASES)


def primes_up_to(bound: int) -> List[int]:
    """All primes <= bound, by the sieve of Eratosthenes."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, bound + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_in_class(r: int, modulus: int, count: int, bound: int) -> List[int]:
    """
    The first ``count`` primes congruent to r mod ``modulus``, each <= bound.

    Returns a shorter list when the bound runs out first.
    """
    if modulus < 1:
        raise DomainError("modulus must be positive", f"modulus={modulus}")
    if count < 1:
        raise DomainError("count must be positive", f"count={count}")
    if math.gcd(r, modulus) != 1:
        raise DomainError(
            "class is not coprime to its modulus; it holds finitely many primes",
            f"{r} mod {modulus}",
        )
    found: List[int] = []
    candidate = r % modulus
    while candidate <= bound and len(found) < count:
        if is_prime(candidate):
            found.append(candidate)
        candidate += modulus
    return found


def factorize(n: int, ceiling: int = DEFAULT_FACTOR_CEILING) -> List[int]:
    """
    Prime factorization of n >= 1 by trial division, as a sorted multiset.

    Trial divisors stop at ``ceiling``; a cofactor that still has an untested
    divisor range raises OracleFailure rather than being reported as prime.
    """
    if n < 1:
        raise DomainError("factorize needs a positive integer", f"n={n}")
    factors: List[int] = []
    while n % 2 == 0:
        factors.append(2)
        n //= 2
    d = 3
    while d * d <= n:
        if d > ceiling:
            raise OracleFailure(
                "factorization ceiling exceeded",
                f"cofactor {n}, ceiling {ceiling}",
                code=ErrorCode.FACTOR_CEILING,
            )
        while n % d == 0:
            factors.append(d)
            n //= d
        d += 2
    if n > 1:
        factors.append(n)
    return factors


def prime_factors(n: int, ceiling: int = DEFAULT_FACTOR_CEILING) -> List[int]:
    """Distinct prime divisors of n, ascending."""
    return sorted(set(factorize(n, ceiling)))


def is_squarefree(n: int) -> bool:
    factors = factorize(n)
    return len(factors) == len(set(factors))


def euler_phi(n: int) -> int:
    """Euler's totient."""
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def isqrt(n: int) -> int:
    """Integer square root of a non-negative integer."""
    if n < 0:
        raise DomainError("isqrt of a negative number", f"n={n}")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    """True iff n is the square of an integer. Negative numbers never are."""
    if n < 0:
        return False
    root = math.isqrt(n)
    return root * root == n

"""Exact integer number theory: primality, Kronecker symbols, quadratic splitting."""
from __future__ import annotations

import enum
from functools import lru_cache
from math import isqrt

# Deterministic Miller-Rabin: these bases are correct for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


class SplitType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise ValueError(f"is_prime is only deterministic below {_MR_LIMIT}")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers a, n.

    Extends the Jacobi symbol with (a|2) = 0 for even a, +1 for a = +-1 mod 8,
    -1 for a = +-3 mod 8, and (a|-1) = sign of a.
    """
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        result = -result
    # n is now odd and positive: plain Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=256)
def is_squarefree(D: int) -> bool:
    """Squarefree test by trial division up to |D|^(1/3).

    The cofactor left after removing all primes below the cube root has at
    most two prime factors, so it is squarefree unless it is a perfect square.
    """
    n = abs(D)
    if n == 0:
        return False
    p = 2
    while p * p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        p += 1 if p == 2 else 2
    if n > 1:
        r = isqrt(n)
        if r * r == n:
            return False
    return True


def split_type(p: int, D: int) -> SplitType:
    """How the rational prime p decomposes in Q(sqrt(D))."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if D == 1 or not is_squarefree(D):
        raise ValueError(f"D={D} must be squarefree and different from 1")
    if p == 2:
        if D % 4 != 1:
            return SplitType.RAMIFIED
        return SplitType.SPLIT if D % 8 == 1 else SplitType.INERT
    if D % p == 0:
        return SplitType.RAMIFIED
    return SplitType.SPLIT if kronecker(D, p) == 1 else SplitType.INERT


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]

"""Integer primitives: squarefree cores, discriminants, symbols, Hensel lifts."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from sympy import isprime

from .errors import InvalidInput, NoRoot, PrecisionLoss

TRIAL_BOUND = 10**6

__all__ = [
    "TRIAL_BOUND",
    "coredisc",
    "factor_small",
    "fundamental_discriminant",
    "hensel_root",
    "hensel_sqrt",
    "is_fundamental_discriminant",
    "is_prime",
    "is_squarefree",
    "kronecker_symbol",
    "padic_valuation",
    "primes_up_to",
    "sqrt_mod_prime",
    "squarefree_core",
    "squarefree_product",
]

is_prime = isprime


@lru_cache(maxsize=8)
def _sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, isqrt(n) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags)


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    # round the sieve size up so repeated small calls share one cached sieve
    size = max(1 << 16, 1 << (n - 1).bit_length())
    ps = _sieve(size)
    return ps[: np.searchsorted(ps, n, side="right")].astype(np.int64)


def _trial_primes():
    return primes_up_to(TRIAL_BOUND).tolist()


_TRIAL_PRIMES: list[int] | None = None


def _small_primes() -> list[int]:
    global _TRIAL_PRIMES
    if _TRIAL_PRIMES is None:
        _TRIAL_PRIMES = _trial_primes()
    return _TRIAL_PRIMES


def factor_small(n: int) -> dict[int, int]:
    """Factor |n| completely, by trial division up to TRIAL_BOUND.

    The cofactor left after trial division must be 1 or a prime; anything
    else cannot be certified and raises InvalidInput.
    """
    if n == 0:
        raise InvalidInput("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for q in _small_primes():
        if q * q > n:
            break
        if n % q == 0:
            k = 0
            while n % q == 0:
                n //= q
                k += 1
            out[q] = k
    if n > 1:
        if not is_prime(n):
            raise InvalidInput(f"cofactor {n} has no certified factorization")
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_core(n: int) -> tuple[int, int]:
    """Return (d, f) with n = d*f**2 and d squarefree, sign(d) = sign(n)."""
    if n == 0:
        raise InvalidInput("squarefree_core(0) is undefined")
    sign = -1 if n < 0 else 1
    m = abs(n)
    d, f = 1, 1
    for q in _small_primes():
        if q * q > m:
            break
        if m % q == 0:
            k = 0
            while m % q == 0:
                m //= q
                k += 1
            f *= q ** (k // 2)
            if k % 2:
                d *= q
    if m > 1:
        # every prime factor of m exceeds the largest trial prime examined
        r = isqrt(m)
        if r * r == m:
            f *= r
        elif m < TRIAL_BOUND**3 or is_prime(m):
            d *= m
        else:
            raise InvalidInput(f"cannot certify the squarefree core of {n}")
    return sign * d, f


def is_squarefree(n: int) -> bool:
    return n != 0 and abs(squarefree_core(n)[0]) == abs(n)


def squarefree_product(a: int, b: int) -> int:
    """Squarefree core of a*b for squarefree a, b (no factoring needed)."""
    g = gcd(a, b)
    return (a // g) * (b // g)


def fundamental_discriminant(d: int) -> int:
    if d == 1:
        raise InvalidInput("d = 1 does not define a quadratic field")
    if d == 0:
        raise InvalidInput("d must be nonzero")
    return d if d % 4 == 1 else 4 * d


def coredisc(n: int) -> int:
    """Discriminant of Q(sqrt(n)); n must not be a square."""
    d, _ = squarefree_core(n)
    return fundamental_discriminant(d)


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extended to all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a|n) for odd positive n
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


def padic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise InvalidInput("valuation of 0 is infinite")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def sqrt_mod_prime(a: int, p: int) -> int:
    """Least nonnegative square root of a modulo the prime p (Tonelli–Shanks)."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        raise NoRoot(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


def hensel_root(b: int, c: int, p: int, k: int, r0: int) -> int:
    """Lift a simple root r0 of X^2 + bX + c modulo p to a root modulo p^k."""
    if (r0 * r0 + b * r0 + c) % p:
        raise NoRoot(f"{r0} is not a root modulo {p}")
    if (2 * r0 + b) % p == 0:
        raise PrecisionLoss("root is not simple; Hensel lifting does not apply")
    x, prec = r0 % p, 1
    while prec < k:
        prec = min(2 * prec, k)
        mod = p**prec
        fx = x * x + b * x + c
        x = (x - fx * pow(2 * x + b, -1, mod)) % mod
    return x % p**k


def hensel_sqrt(a: int, p: int, k: int) -> int:
    """Square root of a modulo p^k, lifted from the least positive root mod p."""
    if p == 2:
        raise InvalidInput("hensel_sqrt needs an odd prime")
    if a % p == 0:
        raise PrecisionLoss(f"{p} divides {a}; the ramified case is not liftable")
    r0 = sqrt_mod_prime(a, p)
    return hensel_root(0, -a, p, k, r0)

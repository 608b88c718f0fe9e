"""Small number-theory utilities: sieves, Kronecker symbol, multiplicative kit."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def primes_up_to(n: int) -> tuple:
    """All primes <= n (Eratosthenes, cached)."""
    if n < 2:
        return ()
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return tuple(int(p) for p in np.nonzero(sieve)[0])


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return n > 1


def factorize(n: int) -> dict:
    """Prime factorization {p: e} by trial division (small n only)."""
    n = abs(int(n))
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) by the standard binary algorithm."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    # pull out the sign of n
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # pull out factors of two from n:  (a/2) = 0, 1, -1 per a mod 8
    while n % 2 == 0:
        n //= 2
        r = a % 8
        if r in (3, 5):
            result = -result
    a %= n
    # quadratic reciprocity loop on odd n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def squarefree_sieve(lo: int, hi: int) -> np.ndarray:
    """Boolean mask over [lo, hi] marking squarefree integers."""
    size = hi - lo + 1
    mask = np.ones(size, dtype=bool)
    q = 2
    while q * q <= hi:
        q2 = q * q
        start = ((lo + q2 - 1) // q2) * q2
        mask[start - lo :: q2] = False
        q += 1
    return mask


def is_fundamental_discriminant(d: int) -> bool:
    if d == 0 or d == 1:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    n = abs(n)
    if n % 4 == 0:
        return False
    f = factorize(n)
    return all(e == 1 for e in f.values())

"""Small integer utilities: sieves, factorization tables, divisors."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def _sieve(limit):
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.flatnonzero(is_prime)
    primes.setflags(write=False)
    return primes


def primes_up_to(x):
    """Return a read-only int64 array of all primes ``p <= x``."""
    x = int(x)
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    # Round the cache key up so nearby bounds share one sieve.
    limit = max(1024, 1 << (x - 1).bit_length())
    primes = _sieve(limit)
    return primes[: np.searchsorted(primes, x, side="right")]


def prime_count(x):
    return len(primes_up_to(x))


def factorize(m):
    """Prime factorization of a positive integer as ``{p: exponent}``."""
    m = int(m)
    if m < 1:
        raise ValueError("factorize expects a positive integer")
    out = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def divisors(n):
    n = int(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def additive_fill(values_at_primes, primes, limit, identity, combine):
    """Extend a function given on primes to ``1..limit`` completely multiplicatively.

    ``combine(array_slice, value)`` must update ``array_slice`` in place; it
    is called once per prime power ``p**j <= limit`` on every multiple of it,
    so ``out[m]`` ends up combining ``value(p)`` exactly ``g_p`` times where
    ``p**g_p || m``.
    """
    out = np.full(limit + 1, identity, dtype=np.asarray(values_at_primes).dtype)
    for p, v in zip(primes.tolist(), values_at_primes):
        if p > limit:
            break
        pk = p
        while pk <= limit:
            combine(out[pk::pk], v)
            pk *= p
    return out

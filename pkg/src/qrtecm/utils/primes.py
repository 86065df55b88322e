"""Small-prime table and a seeded Miller-Rabin test."""

from functools import lru_cache
from typing import Tuple

import gmpy2

from .rng import stream


@lru_cache(maxsize=None)
def small_primes(limit: int = 1000) -> Tuple[int, ...]:
    """All primes below ``limit``."""
    out = []
    p = gmpy2.mpz(2)
    while p < limit:
        out.append(int(p))
        p = gmpy2.next_prime(p)
    return tuple(out)


def is_probable_prime(n: int, rounds: int = 64, seed: int = 0) -> bool:
    """Miller-Rabin with ``rounds`` bases drawn from a seeded stream."""
    if n < 2:
        return False
    for p in small_primes(100):
        if n == p:
            return True
        if n % p == 0:
            return False
    rng = stream(seed, n.bit_length())
    span = gmpy2.mpz(n - 3)
    for _ in range(rounds):
        base = gmpy2.mpz_random(rng, span) + 2
        if not gmpy2.is_strong_prp(n, base):
            return False
    return True

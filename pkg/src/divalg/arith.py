"""Elementary arithmetic helpers: factorization, divisors, prime windows."""

from __future__ import annotations

import math

# Trial division only; inputs are desk scale by design.
FACTOR_BOUND = 1 << 20


def factorize(m: int) -> dict[int, int]:
    """Prime factorization by trial division up to 2**20.

    Raises:
        ValueError: if ``m < 1`` or a composite cofactor survives the
            trial-division bound (the input is out of the supported range).
    """
    if m < 1:
        raise ValueError("factorize requires a positive integer")
    out: dict[int, int] = {}
    rem = m
    p = 2
    while p * p <= rem and p <= FACTOR_BOUND:
        while rem % p == 0:
            out[p] = out.get(p, 0) + 1
            rem //= p
        p += 1 if p == 2 else 2
    if rem > 1:
        # no factor <= 2**20, so rem is prime whenever rem <= 2**40
        if rem > FACTOR_BOUND * FACTOR_BOUND:
            raise ValueError(f"factorization bound exceeded for cofactor {rem}")
        out[rem] = out.get(rem, 0) + 1
    return out


def divisor_count(m: int) -> int:
    """Number of positive divisors of ``m``."""
    if m == 0:
        raise ValueError("divisor_count(0) is undefined")
    out = 1
    for e in factorize(abs(m)).values():
        out *= e + 1
    return out


def compositions_count(e: int, parts: int) -> int:
    """Number of ordered tuples of ``parts`` nonnegative integers summing to ``e``."""
    if e < 0 or parts < 1:
        raise ValueError("compositions_count requires e >= 0 and parts >= 1")
    return math.comb(e + parts - 1, parts - 1)


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, n + 1) if sieve[i]]


def primes_in_window(window_start: float, ramified: set[int] | frozenset[int] = frozenset()) -> list[int]:
    """Primes q with ``window_start <= q <= 2 * window_start`` not in ``ramified``.

    The lower endpoint must exceed 5 (standing assumption of the amplifier
    window); an empty result is allowed.
    """
    if not window_start > 5:
        raise ValueError("window start must exceed 5")
    hi = math.floor(2 * window_start)
    lo = math.ceil(window_start)
    return [q for q in primes_up_to(hi) if q >= lo and q not in ramified]

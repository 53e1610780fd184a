"""Prime sieving, Miller-Rabin, and the search for primes on either side of a real t."""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True, eq=False)
class PrimeList:
    """All primes <= ``limit`` as a sorted int64 array."""

    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    def pi(self, n) -> int:
        """Number of primes <= n (n must not exceed ``limit``)."""
        if n < 2:
            return 0
        if n > self.limit:
            raise ValueError(f"pi({n}) needs primes beyond limit {self.limit}")
        return bisect.bisect_right(self.aslist, n)

    def covers(self, t) -> bool:
        """True if the list reaches far enough past t to trust a search around it."""
        if t <= 2:
            return self.limit >= 2
        return self.limit >= t + 4 * math.log(t) ** 2

    @cached_property
    def aslist(self) -> list[int]:
        return [int(p) for p in self.primes]

    def tolist(self) -> list[int]:
        return list(self.aslist)


def sieve_primes(limit: int) -> PrimeList:
    """Sieve of Eratosthenes over [0, limit]."""
    limit = int(limit)
    if limit < 2:
        return PrimeList(max(limit, 0), np.zeros(0, dtype=np.int64))
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    return PrimeList(limit, np.flatnonzero(is_p).astype(np.int64))


def _strong_probable_prime(n: int, a: int) -> bool:
    # n odd, n > 3
    d = n - 1
    s = 0
    while not d & 1:
        d >>= 1
        s += 1
    v = pow(a, d, n)
    if v == 1 or v == n - 1:
        return True
    for _ in range(s - 1):
        v = v * v % n
        if v == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 20, rng: random.Random | None = None) -> bool:
    """Base-2 strong pseudoprime test followed by ``rounds - 1`` random-base rounds.

    A prime is never rejected.  A composite survives with probability at most
    ``4 ** -(rounds - 1)`` (the base-2 round aside).
    """
    n = int(n)
    if n < 2:
        return False
    if n < 4:
        return True
    if not n & 1:
        return False
    if not _strong_probable_prime(n, 2):
        return False
    if n < 5:
        return True
    rng = rng if rng is not None else random.Random()
    for _ in range(rounds - 1):
        if not _strong_probable_prime(n, rng.randrange(2, n - 1)):
            return False
    return True


def mr_rounds_for(x) -> int:
    """max(2, ceil(log2 log2 x)) rounds per candidate."""
    lg = math.log2(max(int(x), 4))
    return max(2, math.ceil(math.log2(lg)))


class PrimePair(NamedTuple):
    """Consecutive primes p1 < t <= p2; p1 == 1 stands in when t <= 2."""

    p1: int
    p2: int


def _ceil(t) -> int:
    return t if isinstance(t, int) else math.ceil(t)


def surrounding_primes(t, ctx=None, rng: random.Random | None = None) -> PrimePair:
    """Largest prime p1 < t and smallest prime p2 >= t.

    ``ctx`` may carry a ``primes`` attribute (a :class:`PrimeList`, searched by
    bisection when it reaches safely past t) and ``mr_rounds``.
    """
    if t <= 2:
        return PrimePair(1, 2)
    plist = getattr(ctx, "primes", None)
    if plist is not None and plist.covers(t):
        ps = plist.aslist
        idx = bisect.bisect_left(ps, _ceil(t))
        return PrimePair(ps[idx - 1], ps[idx])
    rounds = getattr(ctx, "mr_rounds", None) or mr_rounds_for(t)
    return window_search(t, rounds, rng if rng is not None else random.Random())


def _segment_survivors(a: int, b: int, sieving: list[int]) -> list[int]:
    """Integers in [a, b) with no prime factor in ``sieving`` (other than themselves)."""
    if b <= a:
        return []
    keep = bytearray(b"\x01") * (b - a)
    for q in sieving:
        start = max(q * q, -(-a // q) * q)
        if start >= b:
            continue
        n_hits = len(range(start - a, b - a, q))
        keep[start - a :: q] = bytes(n_hits)
    return [a + i for i in range(b - a) if keep[i] and a + i >= 2]


def _is_candidate_prime(n: int, rounds: int, rng) -> bool:
    if n < 4 or n % 2 == 0:
        return n in (2, 3)
    return _strong_probable_prime(n, 2) and is_probable_prime(n, rounds, rng)


def window_search(t, rounds: int, rng) -> PrimePair:
    """Sieve a window of length 2*ceil(log t) centred on t, doubling until both neighbours turn up."""
    c = _ceil(t)
    logt = math.log(t)
    half = max(1, math.ceil(logt))
    sieving = sieve_primes(max(int(logt), 100)).tolist()
    p1 = p2 = None
    lo_edge = c  # next segment below is [lo_edge - seg, lo_edge)
    hi_edge = c  # next segment above is [hi_edge, hi_edge + seg)
    seg = half
    while p1 is None or p2 is None:
        if p1 is None:
            a = max(2, lo_edge - seg)
            for n in reversed(_segment_survivors(a, lo_edge, sieving)):
                if _is_candidate_prime(n, rounds, rng):
                    p1 = n
                    break
            lo_edge = a
        if p2 is None:
            b = hi_edge + seg
            for n in _segment_survivors(hi_edge, b, sieving):
                if _is_candidate_prime(n, rounds, rng):
                    p2 = n
                    break
            hi_edge = b
        seg *= 2
    return PrimePair(p1, p2)

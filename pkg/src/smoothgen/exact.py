"""Exact smooth-number counting and enumeration through Buchstab's identity.

    Psi(x, y) = 1 + sum_{p <= y} Psi(x // p, p)

Every smooth n <= x is reached exactly once by recursing on its largest prime
factor.  Enumeration visits primes in increasing order, so the listing is
lexicographic in the factor sequence written largest prime first.
"""

from __future__ import annotations

import bisect
import math
from functools import lru_cache
from itertools import islice
from typing import Iterator

import numpy as np

from .factorization import Factorization
from .primes import PrimeList, sieve_primes

DEFAULT_CACHE_SIZE = 2**20
_NUMPY_SAFE = 2**53


class SmoothCounter:
    """Memoised exact Psi over a fixed prime list.

    States are keyed by ``(x, i)`` meaning Psi(x, primes[i]); ``i = -1`` means
    no primes are allowed.  The cache is an LRU bounded at ``cache_size``
    entries and is safe to share between threads.
    """

    def __init__(self, primes: PrimeList, cache_size: int = DEFAULT_CACHE_SIZE):
        self.primes = primes
        self._p = primes.aslist
        self._limit = primes.limit
        self._arr = primes.primes
        self._count_cached = lru_cache(maxsize=cache_size)(self._count)

    @property
    def limit(self) -> int:
        return self._limit

    def index_at_most(self, y) -> int:
        """Index of the largest listed prime <= y, or -1."""
        if y < 2:
            return -1
        if y >= self._limit:
            return len(self._p) - 1
        return bisect.bisect_right(self._p, y) - 1

    def psi(self, x: int, y) -> int:
        """Psi(x, y); the primes <= min(x, y) must all be in the list."""
        x = int(x)
        if x < 1 or y < 1:
            return 0
        if y >= x:
            return x
        if y > self.primes.limit:
            raise ValueError(f"need primes up to {y}, list stops at {self.primes.limit}")
        return self.count(x, self.index_at_most(y))

    def count(self, x: int, i: int) -> int:
        """Psi(x, primes[i]) with the base cases resolved before hitting the cache."""
        if x < 1:
            return 0
        if i < 0:
            return 1
        p = self._p[i]
        if p >= x:
            return x
        if i == 0:
            return x.bit_length()
        if i == 1:
            total = 0
            while x:
                total += x.bit_length()
                x //= 3
            return total
        return self._count_cached(x, i)

    def _count(self, x: int, i: int) -> int:
        # primes above sqrt(x) contribute floor(x/p) each; only the small ones recurse
        r = math.isqrt(x)
        j = min(i, self.index_at_most(r) if r <= self.primes.limit else len(self._p) - 1)
        total = 1
        p = self._p
        for l in range(j + 1):
            total += self.count(x // p[l], l)
        if i > j:
            if x < _NUMPY_SAFE:
                total += int((np.int64(x) // self._arr[j + 1 : i + 1]).sum())
            else:
                total += sum(x // q for q in p[j + 1 : i + 1])
        return total

    def kth(self, x: int, y, k: int) -> Factorization:
        """Entry k (0-based) of the lexicographic enumeration, by descending subtree counts."""
        x = int(x)
        total = self.psi(x, y)
        if not 0 <= k < total:
            raise IndexError(f"index {k} outside [0, {total}) for Psi({x}, {y})")
        i = self.index_at_most(min(x, y))
        stack = []
        while k > 0:
            # smallest l with Psi(x, p_l) >= k + 1
            lo, hi = 0, i
            while lo < hi:
                mid = (lo + hi) // 2
                if self.count(x, mid) >= k + 1:
                    hi = mid
                else:
                    lo = mid + 1
            k -= self.count(x, lo - 1)
            p = self._p[lo]
            stack.append(p)
            x //= p
            i = min(lo, self.index_at_most(x))
        return Factorization.from_primes(stack)

    def walk(self, x: int, y, skip: int = 0) -> Iterator[Factorization]:
        """Yield the enumeration from index ``skip`` onward, skipping whole subtrees by count."""
        x = int(x)
        if x < 1 or y < 1:
            return
        i = self.index_at_most(min(x, y))
        yield from self._walk(x, i, [], skip)

    def _walk(self, x, i, stack, skip):
        if skip == 0:
            yield Factorization.from_primes(stack)
        else:
            skip -= 1
        for l in range(i + 1):
            p = self._p[l]
            if p > x:
                break
            if skip:
                size = self.count(x // p, l)
                if skip >= size:
                    skip -= size
                    continue
            stack.append(p)
            yield from self._walk(x // p, l, stack, skip)
            stack.pop()
            skip = 0


def counter_for(x, y, cache_size: int = DEFAULT_CACHE_SIZE) -> SmoothCounter:
    """A counter whose prime list reaches min(x, y)."""
    return SmoothCounter(sieve_primes(max(2, min(int(x), int(y)))), cache_size)


def psi_exact(x, y) -> int:
    """Number of n in [1, x] whose prime factors are all <= y."""
    x, y = math.floor(x), math.floor(y)
    if x < 1 or y < 1:
        return 0
    if y >= x:
        return x
    return counter_for(x, y).psi(x, y)


def kth_smooth_exact(x, y, k: int, counter: SmoothCounter | None = None) -> Factorization:
    """The k-th (0-based) y-smooth integer <= x in enumeration order."""
    x, y = math.floor(x), math.floor(y)
    if counter is None:
        counter = counter_for(x, y)
    return counter.kth(x, y, k)


def enumerate_range(x, y, start: int = 0, stop: int | None = None,
                    counter: SmoothCounter | None = None) -> list[Factorization]:
    """Entries ``V[start:stop]`` of the enumeration of y-smooth integers <= x."""
    x, y = math.floor(x), math.floor(y)
    if counter is None:
        counter = counter_for(x, y)
    total = counter.psi(x, y)
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise IndexError(f"range [{start}, {stop}) outside [0, {total}]")
    return list(islice(counter.walk(x, y, start), stop - start))

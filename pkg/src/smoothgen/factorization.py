"""Factored integers and the validity checks used on sampler output."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class Factorization:
    """A positive integer stored as ``((p1, e1), (p2, e2), ...)`` with p1 < p2 < ..."""

    factors: tuple[tuple[int, int], ...] = ()
    value: int = field(default=1)

    @classmethod
    def from_primes(cls, primes: Iterable[int]) -> "Factorization":
        ps = sorted(map(int, primes))
        factors = []
        value = 1
        last = 0
        for p in ps:
            value *= p
            if p == last:
                factors[-1] = (p, factors[-1][1] + 1)
            else:
                factors.append((p, 1))
                last = p
        # consistent by construction; skip re-validation
        obj = object.__new__(cls)
        object.__setattr__(obj, "factors", tuple(factors))
        object.__setattr__(obj, "value", value)
        return obj

    def __post_init__(self):
        value = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors!r}")
            last = p
            value *= p**e
        if value != self.value:
            raise ValueError(f"value {self.value} does not match factors (product {value})")

    @property
    def primes(self) -> list[int]:
        """Prime factors with multiplicity, ascending."""
        return [p for p, e in self.factors for _ in range(e)]

    @property
    def descending(self) -> tuple[int, ...]:
        """Largest prime first; this is the key the enumeration is sorted by."""
        return tuple(reversed(self.primes))

    @property
    def omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def largest_prime(self) -> int:
        return self.factors[-1][0] if self.factors else 1

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def check_smooth(f: Factorization, x: int, y: int, rounds: int = 40, rng=None) -> list[str]:
    """Return a list of problems with ``f`` as a y-smooth integer <= x (empty if valid).

    Primality of each factor is checked with ``rounds`` Miller-Rabin rounds.
    """
    from .primes import is_probable_prime

    rng = rng if rng is not None else random.Random(0)
    problems = []
    product = 1
    for p, e in f.factors:
        product *= p**e
        if p > y:
            problems.append(f"factor {p} exceeds y={y}")
        if not is_probable_prime(p, rounds, rng):
            problems.append(f"factor {p} is composite")
    if product != f.value:
        problems.append(f"product {product} != recorded value {f.value}")
    if f.value > x:
        problems.append(f"value {f.value} exceeds x={x}")
    return problems

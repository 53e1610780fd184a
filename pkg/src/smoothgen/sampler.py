"""Random factored smooth integers by pruned descent of Buchstab's recursion.

Draw r in [0, 1), set k = floor(r * Psi(x, y)), then repeatedly pick the
consecutive primes p1 < p2 with Psi(x, p1) < k + 1 <= Psi(x, p2), push p2 and
continue with (x // p2, p2, k - Psi(x, p1)).  Under exact counting this lands
on entry k of the enumeration; under estimates it is asymptotically uniform.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .estimate import (EstimatorContext, cutoff_L, psi_auto, psi_exact_ctx,
                       psi_ht_estimate)
from .factorization import Factorization
from .primes import surrounding_primes
from .rho import rho_eval

MAX_SEARCH_STEPS = 200


class InconsistencyError(RuntimeError):
    """Evaluators disagreed beyond what index clamping can absorb."""


@dataclass
class SampleResult:
    n: Factorization
    k: int
    r: float
    depth: int
    regimes: list[str] = field(default_factory=list)
    fallback_used: bool = False


def _evaluator(ctx: EstimatorContext, x: int, regime: str):
    """Psi(x, t) as a function of real t >= 2 under one fixed regime."""
    two = x.bit_length()  # Psi(x, 2)
    logx = math.log(x)
    if regime == "rho":
        return lambda t: float(x) * rho_eval(ctx.rho, logx / math.log(t)) if t < x else float(x)
    if regime == "ht":
        return lambda t: two if t < 3 else psi_ht_estimate(ctx, x, t).value
    if regime == "exact":
        return lambda t: psi_exact_ctx(ctx, x, t).value
    raise ValueError(f"unknown regime {regime!r}")


def search_regime(ctx: EstimatorContext, x: int, y: int, k: int) -> tuple[str, float, float]:
    """Regime and t-bracket for one Find step; fixed for the whole step."""
    if ctx.mode == "exact":
        return "exact", 2, y
    if ctx.mode == "ht":
        return "ht", 2, y
    logx = math.log(x)
    if ctx.mode == "rho":
        t_min = max(2.0, math.exp(logx / ctx.rho.bound) * (1 + 1e-12))
        return "rho", t_min, y
    L = cutoff_L(x, ctx.erh, ctx.epsilon)
    if y >= L:
        at_L = float(x) * rho_eval(ctx.rho, logx / math.log(L)) if L < x else float(x)
        if at_L < k + 1:
            return "rho", L, y
        return "ht", 2, L
    return "ht", 2, y


def _integer_bisect(psi, target: int, lo: int, hi: int) -> int:
    # invariant psi(lo) < target <= psi(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if psi(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _integer_bracket(psi, target: int, lo: float, hi: float, t_floor: float) -> tuple[int, int]:
    a = max(math.floor(lo), math.ceil(t_floor))
    b = math.ceil(hi)
    if psi(b) < target:
        return b - 1, b
    if a >= b or psi(a) >= target:
        return a - 1, a
    return a, b


def _newton_rho(ctx, x: int, target: int, lo: float, hi: float, psi) -> tuple[float, float]:
    """Shrink [lo, hi] around the root of x*rho(v) = target with g(t) = t - f/f'."""
    logx = math.log(x)
    t = math.sqrt(lo * hi)
    for _ in range(MAX_SEARCH_STEPS):
        if hi - lo <= 1:
            break
        v = logx / math.log(t)
        if psi(t) >= target:
            hi = t
        else:
            lo = t
        dens = rho_eval(ctx.rho, v - 1) if v > 1 else 0.0
        if dens > 0:
            g = t - (rho_eval(ctx.rho, v) - target / x) / dens * t * math.log(t)
        else:
            g = hi
        if not lo < g < hi:
            g = math.sqrt(lo * hi) if hi > 2 * lo else 0.5 * (lo + hi)
        if abs(g - t) < 1:
            # close to the root: pin an integer on each side
            a, b = math.floor(g), math.floor(g) + 1
            if lo < a and psi(a) < target:
                lo = a
            if b < hi and psi(b) >= target:
                hi = b
            if lo >= a and hi <= b:
                break
        t = g
    return lo, hi


def _illinois(psi, target: int, lo: float, hi: float, switch: float) -> tuple[float, float]:
    """Illinois false position on log Psi against log t, until hi - lo <= switch."""
    a, b = math.log(lo), math.log(hi)
    lt = math.log(target)
    fa = math.log(max(psi(lo), 1e-300)) - lt
    fb = math.log(max(psi(hi), 1e-300)) - lt
    side = 0
    for _ in range(MAX_SEARCH_STEPS):
        if math.exp(b) - math.exp(a) <= switch:
            break
        s = (a * fb - b * fa) / (fb - fa) if fb != fa else 0.5 * (a + b)
        if not a < s < b:
            s = 0.5 * (a + b)
        fs = math.log(max(psi(math.exp(s)), 1e-300)) - lt
        if fs >= 0:
            b, fb = s, fs
            if side == 1:
                fa /= 2
            side = 1
        else:
            a, fa = s, fs
            if side == -1:
                fb /= 2
            side = -1
    return math.exp(a), math.exp(b)


def find_threshold_t(ctx: EstimatorContext, x: int, k: int, y: int | None = None,
                     regime: str | None = None, bracket: tuple[float, float] | None = None) -> int:
    """Integer t with Psi(x, t - 1) < k + 1 <= Psi(x, t) under one regime.

    rho regime: safeguarded Newton on the smooth x*rho(log x / log t).
    ht and exact regimes: Illinois until the bracket is 2 (log y)^2 wide, then bisection.
    """
    x = int(x)
    y = int(ctx.y if y is None else y)
    target = k + 1
    if regime is None:
        regime, lo, hi = search_regime(ctx, x, y, k)
    else:
        lo, hi = 2, y
    if bracket is not None:
        lo, hi = bracket
    hi = min(hi, x) if x >= 2 else hi
    psi = _evaluator(ctx, x, regime)
    if psi(hi) < target:
        return math.ceil(hi)
    if psi(lo) >= target:
        return math.ceil(lo)
    if regime == "rho":
        lo, hi = _newton_rho(ctx, x, target, lo, hi, psi)
    else:
        lo, hi = _illinois(psi, target, lo, hi, 2 * math.log(max(y, 3)) ** 2)
    a, b = _integer_bracket(psi, target, lo, hi, 2)
    return _integer_bisect(psi, target, a, b)


def _largest_prime_upto(ctx, m: int, rng) -> int:
    return surrounding_primes(m + 1, ctx, rng).p1


def _find_pair(ctx, x: int, y: int, k: int, rng) -> tuple[int, int, int | float, str]:
    """p1, p2, Psi(x, p1) and the regime for one Branch step (k + 1 > Psi(x, 2))."""
    regime, lo, hi = search_regime(ctx, x, y, k)
    psi = _evaluator(ctx, x, regime)
    target = k + 1

    def at(p):
        if p < 2:
            return 1
        return x.bit_length() if p == 2 else psi(p)

    t = find_threshold_t(ctx, x, k, y, regime, (lo, hi))
    p1, p2 = surrounding_primes(t, ctx, rng)
    top = min(x, y)
    if p2 > top:
        p2 = _largest_prime_upto(ctx, top, rng)
        p1 = surrounding_primes(p2, ctx, rng).p1
    # the defining inequality is the contract; t is only a means to it
    while at(p2) < target and p2 < top:
        nxt = surrounding_primes(p2 + 1, ctx, rng).p2
        if nxt > top:
            break
        p1, p2 = p2, nxt
    while p1 >= 2 and at(p1) >= target:
        p1, p2 = surrounding_primes(p1, ctx, rng).p1, p1
    return p1, p2, at(p1), regime


def _descend_exact(ctx: EstimatorContext, x: int, y: int, k: int, stack: list):
    """Branch with exact counts throughout; no clamping is ever needed."""
    counter = ctx.counter(x, y)
    total = counter.psi(x, y)
    if not 0 <= k < total:
        raise IndexError(f"index {k} outside [0, {total})")
    count = counter.count
    p = counter.primes.aslist
    hi = counter.index_at_most(min(x, y))
    regimes = []
    while k > 0:
        if k + 1 <= x.bit_length():
            j, psi_p1 = 0, 1
        else:
            lo = 1
            while lo < hi:
                mid = (lo + hi) // 2
                if count(x, mid) >= k + 1:
                    hi = mid
                else:
                    lo = mid + 1
            j, psi_p1 = hi, count(x, hi - 1)
        regimes.append("exact")
        k -= psi_p1
        stack.append(p[j])
        x //= p[j]
        hi = j
    return stack, regimes, False


def _descend(ctx: EstimatorContext, x: int, y: int, k: int, rng, stack=None):
    stack = list(stack or [])
    if ctx.mode == "exact" and x >= 1:
        return _descend_exact(ctx, int(x), int(y), k, stack)
    regimes = []
    fallback = False
    x, y = int(x), int(y)
    while True:
        if x < 1:
            if k > 0:
                raise InconsistencyError(f"reached x < 1 with k = {k}")
            break
        top = psi_auto(ctx, x, y)
        k = min(max(k, 0), max(top.floor() - 1, 0))
        if k == 0:
            break
        if ctx.mode == "auto" and top.regime == "exact":
            f = ctx.counter(x, y).kth(x, y, k)
            stack.extend(reversed(f.primes))
            regimes.append("exact")
            fallback = True
            break
        if k + 1 <= x.bit_length():
            p1, p2, psi_p1, regime = 1, 2, 1, "exact"
        else:
            if rng is None:
                rng = random.Random(0)
            p1, p2, psi_p1, regime = _find_pair(ctx, x, y, k, rng)
        regimes.append(regime)
        k -= psi_p1 if isinstance(psi_p1, int) else math.floor(psi_p1)
        stack.append(p2)
        x //= p2
        y = p2
    return stack, regimes, fallback


def branch(ctx: EstimatorContext, x, y, k: int, stack=None, rng=None) -> Factorization:
    """The smooth integer at (approximate) enumeration index k, times the primes in ``stack``."""
    primes, _, _ = _descend(ctx, x, y, k, rng, stack)
    return Factorization.from_primes(primes)


def sample_smooth(ctx: EstimatorContext, x, y, rng: random.Random) -> SampleResult:
    """One random y-smooth n <= x with its factorization."""
    x, y = int(x), int(y)
    bits = rng.getrandbits(64)
    r = bits / 2**64
    if x < 1 or y < 2:
        return SampleResult(Factorization(), 0, r, 0, [], False)
    total = psi_auto(ctx, x, y).floor()
    k = (bits * total) >> 64
    primes, regimes, fallback = _descend(ctx, x, y, k, rng)
    n = Factorization.from_primes(primes)
    return SampleResult(n, k, r, n.omega, regimes, fallback)

"""Psi(x, y) estimates: x*rho(u) above the cutoff L(x), the saddle-point formula below it.

All evaluators live behind :func:`psi_auto`, which is a pure function of
(x, y) once an :class:`EstimatorContext` is fixed.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exact import SmoothCounter, counter_for
from .primes import PrimeList, mr_rounds_for, sieve_primes
from .rho import RhoTable, build_rho_table, rho_eval

MODES = ("exact", "auto", "rho", "ht")
EXACT_X_MAX = 10**6
EXACT_PSI_MAX = 2**16
EAGER_PRIME_LIMIT = 2 * 10**6
SADDLE_MAX_ITER = 200


class SaddlePointError(ArithmeticError):
    """The saddle-point equation did not converge."""


@dataclass(frozen=True)
class PsiEstimate:
    value: int | float
    regime: str  # "exact", "rho" or "ht"

    def floor(self) -> int:
        return self.value if isinstance(self.value, int) else math.floor(self.value)


def cutoff_L(x, erh: bool = False, epsilon: float = 0.1) -> float:
    """Smallest y for which x*rho(u) is trusted."""
    if x < 3:
        raise ValueError(f"L(x) needs x >= 3, got {x}")
    logx = math.log(x)
    if erh:
        return logx ** (2 + epsilon)
    return math.exp(math.log(logx) ** (5 / 3 + epsilon))


def default_rho_step(x) -> float:
    return 1 / max(math.log(x), 100.0)


def default_rho_bound(x, erh: bool = False, epsilon: float = 0.1) -> float:
    """u up to log x / log L(x) covers every rho lookup the dispatch can make."""
    if x < 3:
        return 2.0
    return max(2.0, math.log(x) / math.log(max(cutoff_L(x, erh, epsilon), 2.0)))


@dataclass(frozen=True, eq=False)
class EstimatorContext:
    """Configuration plus shared read-only tables for one run.

    The prime list may be re-sieved further on demand (saddle-point sums need
    every prime <= y); each :class:`PrimeList` itself is immutable.
    """

    x: int
    y: int
    mode: str = "auto"
    erh: bool = False
    epsilon: float = 0.1
    precision: int = 64
    rho: RhoTable | None = None
    L: float | None = None
    mr_rounds: int = 2
    _state: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def primes(self) -> PrimeList | None:
        return self._state.get("primes")

    def primes_upto(self, n: int) -> PrimeList:
        plist = self._state.get("primes")
        if plist is not None and plist.limit >= n:
            return plist
        with self._lock:
            plist = self._state.get("primes")
            if plist is None or plist.limit < n:
                grow = n if plist is None else max(n, 2 * plist.limit)
                plist = sieve_primes(grow)
                self._state["primes"] = plist
                self._state["logp"] = np.log(plist.primes.astype(np.float64))
                self._state.pop("counter", None)
            return plist

    def log_primes(self, count: int) -> np.ndarray:
        return self._state["logp"][:count]

    def counter(self, x: int, y: int) -> SmoothCounter:
        """Exact counter whose prime list reaches min(x, y)."""
        need = max(2, min(x, y))
        c = self._state.get("counter")
        if c is not None and c.limit >= need:
            return c
        if need > EAGER_PRIME_LIMIT and self.primes is None:
            return counter_for(x, y)
        plist = self.primes_upto(need)
        with self._lock:
            c = self._state.get("counter")
            if c is None or c.limit < need:
                c = SmoothCounter(plist)
                self._state["counter"] = c
        return c


def make_context(x, y, mode: str = "auto", erh: bool = False, epsilon: float = 0.1,
                 precision: int = 64, rho: RhoTable | None = None) -> EstimatorContext:
    """Context for sampling or estimating at the driving point (x, y)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    x, y = int(x), int(y)
    L = cutoff_L(x, erh, epsilon) if x >= 3 else None
    if rho is None:
        bound = default_rho_bound(x, erh, epsilon)
        if mode == "rho" and y >= 2 and x >= 3:
            # deeper levels see any (x', y') with y' >= 2
            bound = max(bound, math.log2(x) + 1)
        rho = build_rho_table(bound, default_rho_step(max(x, 3)), precision)
    ctx = EstimatorContext(x=x, y=y, mode=mode, erh=erh, epsilon=epsilon, precision=precision,
                           rho=rho, L=L, mr_rounds=mr_rounds_for(x))
    if y >= 2:
        top = min(y, x)
        if mode in ("auto", "ht") and L is not None and mode != "ht":
            top = min(top, max(int(L), 2))
        top = min(top, EAGER_PRIME_LIMIT)
        ctx.primes_upto(top + int(4 * math.log(max(top, 2)) ** 2) + 2)
    return ctx


def psi_rho_estimate(ctx: EstimatorContext, x, y) -> PsiEstimate:
    """x * rho(log x / log y); constant time given the table."""
    if y < 2 or x < 1:
        raise ValueError(f"rho estimate needs x >= 1, y >= 2 (got {x}, {y})")
    if y >= x:
        return PsiEstimate(float(x), "rho")
    u = math.log(x) / math.log(y)
    return PsiEstimate(float(x) * rho_eval(ctx.rho, u), "rho")


def _saddle(logp: np.ndarray, logx: float, alpha0: float) -> tuple[float, float]:
    """Solve sum log p / (p^a - 1) = log x by bracketed Newton; return (alpha, sigma2)."""
    lo, hi = 1e-6, 2.0
    a = min(max(alpha0, lo), hi)
    for _ in range(SADDLE_MAX_ITER):
        pa1 = np.expm1(a * logp)
        g = float(np.sum(logp / pa1)) - logx
        sigma2 = float(np.sum(logp * logp * (pa1 + 1) / (pa1 * pa1)))
        if g > 0:
            lo = a
        else:
            hi = a
        step = g / sigma2
        nxt = a + step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - a) <= 1e-13 * a or hi - lo <= 1e-14:
            return nxt, sigma2
        a = nxt
    raise SaddlePointError(f"saddle point did not converge (bracket [{lo}, {hi}])")


def ht_log_psi(logp: np.ndarray, logx: float) -> tuple[float, float]:
    """log of x^a * prod (1 - p^-a)^-1 / (a * sqrt(2 pi sigma2)), and the saddle a."""
    logy = float(logp[-1])
    u = logx / logy
    alpha0 = 1 - math.log(u) / logy if u > 1 else 1.0
    alpha, sigma2 = _saddle(logp, logx, min(max(alpha0, 0.05), 1.0))
    zeta_log = float(-np.sum(np.log1p(-np.exp(-alpha * logp))))
    return alpha * logx + zeta_log - math.log(alpha) - 0.5 * math.log(2 * math.pi * sigma2), alpha


@lru_cache(maxsize=8192)
def _ht_cached(ctx: EstimatorContext, x: int, count: int) -> float:
    logv, _ = ht_log_psi(ctx.log_primes(count), math.log(x))
    return logv


def psi_ht_estimate(ctx: EstimatorContext, x, y) -> PsiEstimate:
    """Hildebrand-Tenenbaum saddle-point estimate, clamped into [1, x]."""
    if y < 2:
        raise ValueError(f"saddle-point estimate needs y >= 2, got {y}")
    x = math.floor(x)
    if x < 1:
        return PsiEstimate(0.0, "ht")
    y = min(math.floor(y), x) if x >= 2 else 2
    count = ctx.primes_upto(y).pi(y)
    logv = _ht_cached(ctx, x, count)
    value = math.exp(min(logv, 700.0))
    return PsiEstimate(min(max(value, 1.0), float(x)), "ht")


def psi_exact_ctx(ctx: EstimatorContext, x, y) -> PsiEstimate:
    x, y = math.floor(x), math.floor(y)
    if x < 1 or y < 1:
        return PsiEstimate(0, "exact")
    if y >= x:
        return PsiEstimate(x, "exact")
    return PsiEstimate(ctx.counter(x, y).psi(x, y), "exact")


def approximate(ctx: EstimatorContext, x, y) -> PsiEstimate:
    """rho above L(x), saddle point below (auto mode without the exact shortcut)."""
    if ctx.mode == "rho":
        return psi_rho_estimate(ctx, x, y)
    if ctx.mode == "ht" or y < cutoff_L(x, ctx.erh, ctx.epsilon):
        return psi_ht_estimate(ctx, x, y)
    return psi_rho_estimate(ctx, x, y)


def psi_auto(ctx: EstimatorContext, x, y) -> PsiEstimate:
    """Psi(x, y) under the context's mode.

    y < 3 is always answered exactly (Psi(x, 2) = floor(log2 x) + 1).  In auto
    mode the exact count is also used whenever x <= 10**6 or the approximate
    value is at most 2**16.
    """
    x = math.floor(x)
    if x < 1 or y < 1:
        return PsiEstimate(0, "exact")
    if ctx.mode == "exact" or y < 3:
        return psi_exact_ctx(ctx, x, y)
    if ctx.mode == "auto" and x <= EXACT_X_MAX:
        return psi_exact_ctx(ctx, x, y)
    est = approximate(ctx, x, y)
    if ctx.mode == "auto" and est.value <= EXACT_PSI_MAX:
        return psi_exact_ctx(ctx, x, y)
    return est

"""Dickman's rho on a uniform grid by the trapezoid rule.

rho = 1 on [0, 1] and u*rho(u) = integral of rho over [u - 1, u] beyond.  With
m = 1/h grid points per unit, trapezoid quadrature of that window gives

    (u - h/2) * rho(u) = h * (rho(u - 1)/2 + rho(u - 1 + h) + ... + rho(u - h))

which is solved for rho(u) from a window sum.  Errors stay relative to rho
itself; marching rho' = -rho(u - 1)/u directly lets absolute errors pile up
while rho decays, and the table turns negative near u = 7 for h ~ 1/230.

A table that reaches the bottom of its float format is cut there and marked
exhausted; rho beyond it reads as 0 at that precision.
"""

import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

_DTYPES = {53: np.float64, 64: np.longdouble}


class RhoRangeError(ValueError):
    """Requested u lies beyond the tabulated bound."""


@dataclass(frozen=True, eq=False)
class RhoTable:
    h: float
    bound: float
    values: np.ndarray
    precision: int
    exhausted: bool = False

    def __call__(self, u) -> float:
        return rho_eval(self, u)


def _dtype(precision: int):
    try:
        return _DTYPES[precision]
    except KeyError:
        raise ValueError(f"precision must be one of {sorted(_DTYPES)}, got {precision}") from None


def build_rho_table(bound: float, h: float, precision: int = 64) -> RhoTable:
    """Tabulate rho(i*h) for 0 <= i*h <= bound (bound rounded up to the grid).

    The step is shrunk to 1/ceil(1/h) so that u - 1 lands on the grid.
    """
    if not (h > 0 and bound > 0):
        raise ValueError(f"h and bound must be positive (h={h}, bound={bound})")
    if h > 0.5:
        raise ValueError(f"step h={h} too coarse; need h <= 1/2")
    m = math.ceil(1 / h - 1e-9)
    dt = _dtype(precision)
    H = dt(1) / dt(m)
    bound = max(bound, 1.0)
    n = math.ceil(bound * m - 1e-9)
    vals = np.ones(n + 1, dtype=dt)
    window = dt(m - 1)  # sum of vals[i-m+1 .. i-1] for the next i
    # rho drops fast, so a running sum keeps absolute (not relative) error;
    # re-summing every `refresh` steps bounds the drift
    refresh = max(1, m // 16)
    tiny = np.finfo(dt).tiny
    for i in range(m + 1, n + 1):
        u = i * H
        vals[i] = H * (vals[i - m] / 2 + window) / (u - H / 2)
        if not vals[i] > 0:
            raise FloatingPointError(f"rho table went non-positive at u={u:.4f}")
        if vals[i] < tiny:
            return RhoTable(float(H), float((i - 1) * H), vals[:i].copy(), precision, exhausted=True)
        if i % refresh == 0:
            window = vals[i - m + 2:i + 1].sum()
        else:
            window += vals[i] - vals[i - m + 1]
    return RhoTable(float(H), float(n * H), vals, precision)


def rho_eval(table: RhoTable, u) -> float:
    """rho(u) by linear interpolation in the table."""
    if u < 0:
        return 0.0
    if u <= 1:
        return 1.0
    if u > table.bound:
        if table.exhausted:
            return 0.0
        raise RhoRangeError(f"u={u} beyond table bound {table.bound}")
    q = u / table.h
    j = int(q)
    v = table.values
    if j >= len(v) - 1:
        return float(v[-1])
    frac = q - j
    return float(v[j] + (v[j + 1] - v[j]) * frac)


def rho_closed_form(u: float) -> float:
    """rho on [0, 2]: 1 then 1 - ln u."""
    if not 0 <= u <= 2:
        raise ValueError(f"closed form only covers [0, 2], got {u}")
    return 1.0 if u <= 1 else 1.0 - math.log(u)


def dump_table(table: RhoTable, out: TextIO) -> None:
    """Write ``u value`` lines, value to 20 significant digits."""
    for i, v in enumerate(table.values):
        out.write(f"{i * table.h:.6f} {np.format_float_scientific(v, precision=19, unique=False)}\n")

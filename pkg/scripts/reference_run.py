#!/usr/bin/env python3
"""Draw the r = 1/2 sample at x = 10^100, y = 10^4 and compare it with a reference run."""

import argparse
import time

from smoothgen import make_context, sample_smooth
from smoothgen.cli import REFERENCE_RUN
from smoothgen.factorization import Factorization, check_smooth


class HalfBits:
    def getrandbits(self, n):
        return 1 << (n - 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--erh", action="store_true")
    args = ap.parse_args()
    x, y = 10**100, 10**4
    t0 = time.perf_counter()
    ctx = make_context(x, y, erh=args.erh)
    s = sample_smooth(ctx, x, y, HalfBits())
    dt = time.perf_counter() - t0
    ref = Factorization.from_primes(REFERENCE_RUN)
    print(f"k     = {s.k:.6e}")
    print(f"n     = {s.n.value:.6e}")
    print(f"n     = {s.n}")
    print(f"omega = {s.n.omega}, regimes = {sorted(set(s.regimes))}, fallback = {s.fallback_used}")
    print(f"valid = {not check_smooth(s.n, x, y, rounds=40)}, time = {dt:.3f} s")
    print(f"ref   = {ref.value:.6e} ({ref.omega} primes)")
    shared = 0
    for a, b in zip(reversed(s.n.primes), reversed(REFERENCE_RUN)):
        if a != b:
            break
        shared += 1
    print(f"largest primes shared with the reference: {shared}")


if __name__ == "__main__":
    main()

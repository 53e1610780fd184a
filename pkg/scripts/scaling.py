#!/usr/bin/env python3
"""Mean time per sample and mean factor count as log x grows at fixed y."""

import argparse
import math
import random
import time

from smoothgen import make_context, sample_smooth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--y", type=int, default=10**4)
    ap.add_argument("--digits", type=int, nargs="+", default=[25, 50, 100, 200])
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--mode", default="auto")
    args = ap.parse_args()

    print(f"{'digits':>6} {'setup s':>8} {'s/sample':>9} {'mean omega':>10} {'u':>6}")
    for d in args.digits:
        x = 10**d
        t0 = time.perf_counter()
        ctx = make_context(x, args.y, mode=args.mode)
        setup = time.perf_counter() - t0
        rng = random.Random(d)
        omegas = []
        t0 = time.perf_counter()
        for _ in range(args.samples):
            omegas.append(sample_smooth(ctx, x, args.y, rng).n.omega)
        per = (time.perf_counter() - t0) / args.samples
        u = math.log(x) / math.log(args.y)
        print(f"{d:>6} {setup:>8.3f} {per:>9.4f} {sum(omegas) / len(omegas):>10.2f} {u:>6.1f}")


if __name__ == "__main__":
    main()

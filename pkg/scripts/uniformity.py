#!/usr/bin/env python3
"""Chi-square uniformity of exact-mode samples over all y-smooth n <= x."""

import argparse
import random

from scipy.stats import chisquare

from smoothgen import make_context, sample_smooth
from smoothgen.exact import enumerate_range


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", type=int, default=3000)
    ap.add_argument("--y", type=int, default=13)
    ap.add_argument("--per-cell", type=int, default=200)
    ap.add_argument("--mode", default="exact")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cells = {f.value: i for i, f in enumerate(enumerate_range(args.x, args.y))}
    counts = [0] * len(cells)
    ctx = make_context(args.x, args.y, mode=args.mode)
    rng = random.Random(args.seed)
    n = args.per_cell * len(cells)
    for _ in range(n):
        counts[cells[sample_smooth(ctx, args.x, args.y, rng).n.value]] += 1
    res = chisquare(counts)
    print(f"cells={len(cells)} samples={n} chi2={res.statistic:.1f} p={res.pvalue:.4f}")
    print(f"min/max count: {min(counts)}/{max(counts)} (expected {args.per_cell})")


if __name__ == "__main__":
    main()

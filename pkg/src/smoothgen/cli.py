"""Command-line entry point: sample, psi, enumerate, rho, selftest."""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from decimal import Decimal, InvalidOperation

from .estimate import MODES, default_rho_step, make_context, psi_auto
from .exact import SmoothCounter, enumerate_range, psi_exact
from .factorization import Factorization, check_smooth
from .rho import build_rho_table, rho_eval
from .sampler import sample_smooth


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_int(text: str) -> int:
    """Non-negative integer from decimal or integer-valued scientific notation ("1e100")."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not d.is_finite() or d != d.to_integral_value() or d < 0:
        raise argparse.ArgumentTypeError(f"not a non-negative integer: {text!r}")
    return int(d)


def record(f: Factorization) -> dict:
    return {"n": str(f.value), "factors": [[str(p), e] for p, e in f.factors]}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="smoothgen", description="Random factored smooth integers and Psi(x, y).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, mode_default="auto"):
        sp.add_argument("--x", type=parse_int, required=True)
        sp.add_argument("--y", type=parse_int, required=True)
        sp.add_argument("--mode", choices=MODES, default=mode_default)
        sp.add_argument("--erh", action="store_true", help="use the ERH cutoff (log x)^(2+eps)")
        sp.add_argument("--epsilon", type=float, default=0.1)

    sp = sub.add_parser("sample", help="draw random factored y-smooth n <= x")
    common(sp)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=("jsonl", "text"), default="jsonl")
    sp.add_argument("--ordered", action="store_true", help="emit in draw order (always the case)")

    sp = sub.add_parser("psi", help="count or estimate Psi(x, y)")
    common(sp)
    sp.add_argument("--format", choices=("jsonl", "text"), default="text")

    sp = sub.add_parser("enumerate", help="list y-smooth n <= x in enumeration order")
    sp.add_argument("--x", type=parse_int, required=True)
    sp.add_argument("--y", type=parse_int, required=True)
    sp.add_argument("--start", type=parse_int, default=0)
    sp.add_argument("--end", type=parse_int)
    sp.add_argument("--format", choices=("jsonl", "text"), default="text")

    sp = sub.add_parser("rho", help="evaluate Dickman rho from a trapezoid table")
    sp.add_argument("--u", type=float, required=True)
    sp.add_argument("--x", type=parse_int, help="driving x; step h = 1/max(log x, 100)")
    sp.add_argument("--h", type=float, help="explicit step (default 1e-3)")

    sub.add_parser("selftest", help="check the worked examples and the 10^100 fixture")
    return p


def _cmd_sample(a, out) -> int:
    if a.count < 1:
        raise UsageError("--count must be positive")
    if a.y < 1 or a.x < a.y:
        raise ValueError(f"need x >= y >= 1 (got x={a.x}, y={a.y})")
    seed = a.seed if a.seed is not None else random.SystemRandom().getrandbits(64)
    if not 0 <= seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    rng = random.Random(seed)
    ctx = make_context(a.x, a.y, a.mode, a.erh, a.epsilon)
    for _ in range(a.count):
        s = sample_smooth(ctx, a.x, a.y, rng)
        if a.format == "jsonl":
            rec = record(s.n)
            rec.update(k=str(s.k), seed=seed, mode_trace=s.regimes, fallback=s.fallback_used)
            out.write(json.dumps(rec) + "\n")
        else:
            out.write(f"{s.n.value}  = {s.n}  (k={s.k}, depth={s.depth}"
                      f"{', fallback' if s.fallback_used else ''})\n")
    return 0


def _cmd_psi(a, out) -> int:
    ctx = make_context(max(a.x, 3), max(a.y, 1), a.mode, a.erh, a.epsilon)
    est = psi_auto(ctx, a.x, a.y)
    if a.format == "jsonl":
        out.write(json.dumps({"x": str(a.x), "y": str(a.y), "psi": str(est.value),
                              "regime": est.regime}) + "\n")
    else:
        out.write(f"{est.value}\n")
    return 0


def _cmd_enumerate(a, out) -> int:
    if a.y < 1 or a.x < a.y:
        raise ValueError(f"need x >= y >= 1 (got x={a.x}, y={a.y})")
    for i, f in enumerate(enumerate_range(a.x, a.y, a.start, a.end), start=a.start):
        if a.format == "jsonl":
            out.write(json.dumps({"index": i, **record(f)}) + "\n")
        else:
            out.write(f"{f.value}\t{f}\n")
    return 0


def _cmd_rho(a, out) -> int:
    if a.h is not None:
        h = a.h
    elif a.x is not None:
        if a.x < 3:
            raise ValueError("--x must be at least 3")
        h = default_rho_step(a.x)
    else:
        h = 1e-3
    table = build_rho_table(max(a.u, 1.0), h)
    out.write(f"{rho_eval(table, a.u):.15g}\n")
    return 0


REFERENCE_RUN = [2, 3, 5, 7, 29, 31, 97, 113, 113, 113, 157, 223, 241, 503, 509, 569, 691, 727, 1033,
             1367, 1571, 2141, 2339, 2617, 2741, 3041, 3221, 3547, 3989, 4021, 4513, 4999, 5573,
             6577, 7573, 9463]


def selftest_checks():
    """(name, passed) pairs for the worked examples."""
    yield "Psi(15,3) = 8", psi_exact(15, 3) == 8
    yield "Psi(7,2) = 3", psi_exact(7, 2) == 3
    yield "Psi(5,3) = 4", psi_exact(5, 3) == 4
    got = [f.value for f in enumerate_range(15, 3)]
    yield "enumerate(15,3) = 1 2 4 8 3 6 12 9 (lexicographic listing)", got == [1, 2, 4, 8, 3, 6, 12, 9]
    run = [63, 126, 252, 504, 189, 378, 756, 567, 35, 70, 140]
    got = [f.value for f in enumerate_range(1000, 7, 100, 111)]
    yield "7-smooth <= 1000 from position 100", got == run
    f = Factorization.from_primes(REFERENCE_RUN)
    ok = not check_smooth(f, 10**100, 10**4) and len(REFERENCE_RUN) == 36
    ok = ok and abs(f.value / 10**97 - 4.29) < 0.005
    yield "10^100 example: 36 primes <= 10^4, product ~ 4.29e97", ok


def _cmd_selftest(a, out) -> int:
    failed = 0
    for name, ok in selftest_checks():
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}\n")
        failed += not ok
    return 2 if failed else 0


COMMANDS = {"sample": _cmd_sample, "psi": _cmd_psi, "enumerate": _cmd_enumerate,
            "rho": _cmd_rho, "selftest": _cmd_selftest}


def run_cli(argv=None, out=None, err=None) -> int:
    """Run one command; 0 ok, 1 usage error, 2 domain or numeric error."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return 1
    except (ValueError, ArithmeticError, IndexError) as e:
        err.write(f"error: {e}\n")
        return 2


def main():
    sys.exit(run_cli())

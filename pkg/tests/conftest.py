import random

import pytest

from oracles import largest_prime_factor


@pytest.fixture(scope="session")
def lpf_table():
    """Largest prime factor of every n <= 10^5, by trial division."""
    return [0] + [largest_prime_factor(n) for n in range(1, 10**5 + 1)]


@pytest.fixture
def rng():
    return random.Random(20240917)


def brute_psi(lpf, x, y):
    return sum(1 for n in range(1, x + 1) if lpf[n] <= y)


ACCEPTANCE_LINES = []


def report(criterion, ok, detail=""):
    """Record and print one acceptance line; returns ok for chaining into assert."""
    line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import math
import random
import threading

import pytest
from hypothesis import given, settings, strategies as st

from smoothgen.estimate import make_context, psi_auto
from smoothgen.exact import counter_for, enumerate_range, psi_exact
from smoothgen.factorization import check_smooth
from smoothgen.rho import rho_eval
from smoothgen.sampler import branch, find_threshold_t, sample_smooth, search_regime

X100 = 10**100


class FixedBits:
    """Stands in for random.Random when r must be pinned."""

    def __init__(self, r):
        self.bits = int(r * 2**64)
        self.fallback = random.Random(0)

    def getrandbits(self, n):
        assert n == 64
        return self.bits

    def __getattr__(self, name):
        return getattr(self.fallback, name)


@pytest.fixture(scope="module")
def big_ctx():
    return make_context(X100, 10**4)


def test_branch_k_zero():
    ctx = make_context(15, 3, mode="exact")
    assert branch(ctx, 15, 3, 0).value == 1


def test_branch_index_5_is_6():
    ctx = make_context(15, 3, mode="exact")
    assert branch(ctx, 15, 3, 5).value == 6


def test_branch_15_3_all():
    ctx = make_context(15, 3, mode="exact")
    assert [branch(ctx, 15, 3, k) for k in range(8)] == enumerate_range(15, 3)


def test_branch_keeps_stack():
    ctx = make_context(15, 3, mode="exact")
    assert branch(ctx, 15, 3, 5, stack=[7]).value == 42


@settings(max_examples=60, deadline=None)
@given(x=st.integers(2, 5000), data=st.data())
def test_branch_exact_matches_enumeration(x, data):
    y = data.draw(st.integers(2, x))
    ctx = make_context(x, y, mode="exact")
    total = psi_exact(x, y)
    ks = {0, total - 1, data.draw(st.integers(0, total - 1))}
    counter = counter_for(x, y)
    for k in ks:
        assert branch(ctx, x, y, k) == counter.kth(x, y, k)


def test_branch_index_out_of_range():
    ctx = make_context(15, 3, mode="exact")
    with pytest.raises(IndexError):
        branch(ctx, 15, 3, 8)


def test_threshold_exact_at_97():
    x = 10**6
    ctx = make_context(x, 97, mode="exact")
    k = psi_exact(x, 97) - 1
    t = find_threshold_t(ctx, x, k, y=97)
    assert 89 < t <= 97
    assert psi_exact(x, t - 1) < k + 1 <= psi_exact(x, t)


def test_threshold_top_of_range(big_ctx):
    y = 10**4
    k = psi_auto(big_ctx, X100, y).floor() - 1
    t = find_threshold_t(big_ctx, X100, k, y=y)
    assert 9973 <= t <= y


def test_threshold_rho_newton_vs_bisection():
    x = X100
    ctx = make_context(x, x)
    target = int(x * rho_eval(ctx.rho, 2) / 2)
    k = target - 1
    assert search_regime(ctx, x, x, k)[0] == "rho"
    t = find_threshold_t(ctx, x, k, y=x)

    def psi(s):
        return float(x) * rho_eval(ctx.rho, math.log(x) / math.log(s))

    # oracle: plain bisection on the same monotone function
    lo, hi = 2.0**100, float(x)
    for _ in range(400):
        mid = math.sqrt(lo * hi)
        if psi(mid) >= target:
            hi = mid
        else:
            lo = mid
    assert abs(t - hi) <= 1 + 1e-9 * hi
    assert psi(t - 1) < target <= psi(t)


def test_sample_two_element():
    ctx = make_context(2, 2, mode="exact")
    assert sample_smooth(ctx, 2, 2, FixedBits(0.25)).n.value == 1
    assert sample_smooth(ctx, 2, 2, FixedBits(0.5)).n.value == 2
    assert sample_smooth(ctx, 2, 2, FixedBits(0.99)).n.value == 2


def test_sample_r_07_gives_6():
    ctx = make_context(15, 3, mode="exact")
    s = sample_smooth(ctx, 15, 3, FixedBits(0.7))
    assert s.k == 5 and s.n.value == 6 and s.depth == 2


def test_sample_y_one():
    ctx = make_context(10, 1)
    assert sample_smooth(ctx, 10, 1, random.Random(0)).n.value == 1


def test_sample_big_valid(big_ctx):
    rng = random.Random(11)
    for _ in range(20):
        s = sample_smooth(big_ctx, X100, 10**4, rng)
        assert check_smooth(s.n, X100, 10**4, rounds=40) == []
        assert s.depth == s.n.omega
        assert s.k < psi_auto(big_ctx, X100, 10**4).value
        assert "ht" in s.regimes


def test_sample_half_matches_reference_run(big_ctx):
    s = sample_smooth(big_ctx, X100, 10**4, FixedBits(0.5))
    assert s.k == pytest.approx(2.05e61, rel=0.01)
    # top primes agree with the reference run at r = 1/2
    assert s.n.primes[-5:] == [4999, 5573, 6577, 7573, 9463]


def test_sample_determinism(big_ctx):
    a = [sample_smooth(big_ctx, X100, 10**4, random.Random(7)) for _ in range(2)]
    assert a[0] == a[1]


def test_sample_bach_mode():
    x = 10**60
    ctx = make_context(x, x)
    rng = random.Random(3)
    for _ in range(10):
        s = sample_smooth(ctx, x, x, rng)
        assert check_smooth(s.n, x, x) == []
        assert s.regimes and s.regimes[0] == "rho"


@pytest.mark.parametrize("mode", ["ht", "rho", "auto"])
def test_sample_modes_valid(mode):
    x, y = 10**30, 10**5
    ctx = make_context(x, y, mode=mode)
    rng = random.Random(5)
    for _ in range(10):
        s = sample_smooth(ctx, x, y, rng)
        assert check_smooth(s.n, x, y) == []


def test_fallback_used_at_small_x():
    ctx = make_context(10**12, 10**3)
    rng = random.Random(9)
    results = [sample_smooth(ctx, 10**12, 10**3, rng) for _ in range(20)]
    assert any(r.fallback_used for r in results)
    assert all(check_smooth(r.n, 10**12, 10**3) == [] for r in results)


def test_auto_mode_small_instance_is_exact():
    ctx = make_context(3000, 13)
    counter = counter_for(3000, 13)
    for r in (0.01, 0.3, 0.77, 0.999):
        s = sample_smooth(ctx, 3000, 13, FixedBits(r))
        assert s.fallback_used and s.n == counter.kth(3000, 13, s.k)


def test_concurrent_sampling(big_ctx):
    seeds = list(range(4))
    expected = {s: sample_smooth(big_ctx, X100, 10**4, random.Random(s)) for s in seeds}
    got = {}

    def work(seed):
        got[seed] = sample_smooth(big_ctx, X100, 10**4, random.Random(seed))

    threads = [threading.Thread(target=work, args=(s,)) for s in seeds]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert got == expected

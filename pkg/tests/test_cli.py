import io
import json
import math
import subprocess
import sys

import pytest

from smoothgen.cli import parse_int, run_cli
from smoothgen.factorization import Factorization, check_smooth


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_psi_text():
    assert run("psi", "--x", "15", "--y", "3") == (0, "8\n", "")


def test_psi_jsonl():
    code, out, _ = run("psi", "--x", "1000", "--y", "7", "--format", "jsonl")
    assert code == 0
    assert json.loads(out) == {"x": "1000", "y": "7", "psi": "141", "regime": "exact"}


def test_enumerate_text():
    code, out, _ = run("enumerate", "--x", "15", "--y", "3")
    assert code == 0
    lines = out.splitlines()
    assert [int(l.split("\t")[0]) for l in lines] == [1, 2, 4, 8, 3, 6, 12, 9]
    assert lines[5] == "6\t2 * 3"


def test_enumerate_slice_jsonl():
    code, out, _ = run("enumerate", "--x", "1000", "--y", "7", "--start", "100", "--end", "103",
                       "--format", "jsonl")
    assert code == 0
    recs = [json.loads(l) for l in out.splitlines()]
    assert [r["index"] for r in recs] == [100, 101, 102]
    assert [int(r["n"]) for r in recs] == [63, 126, 252]


def test_sample_jsonl_schema():
    code, out, _ = run("sample", "--x", "1e30", "--y", "1000", "--count", "5", "--seed", "42")
    assert code == 0
    recs = [json.loads(l) for l in out.splitlines()]
    assert len(recs) == 5
    for r in recs:
        assert set(r) == {"n", "factors", "k", "seed", "mode_trace", "fallback"}
        f = Factorization(tuple((int(p), e) for p, e in r["factors"]), int(r["n"]))
        assert check_smooth(f, 10**30, 1000) == []
        assert r["seed"] == 42 and isinstance(r["fallback"], bool)


def test_sample_same_seed_same_bytes():
    args = ("sample", "--x", "1e40", "--y", "5000", "--count", "4", "--seed", "7")
    assert run(*args)[1] == run(*args)[1]
    other = run("sample", "--x", "1e40", "--y", "5000", "--count", "4", "--seed", "8")[1]
    assert other != run(*args)[1]


def test_sample_text():
    code, out, _ = run("sample", "--x", "15", "--y", "3", "--seed", "1", "--format", "text",
                       "--mode", "exact")
    assert code == 0 and "k=" in out


@pytest.mark.parametrize("argv", [
    ("psi", "--x", "1.5", "--y", "3"),
    ("psi", "--x", "10"),
    ("sample", "--x", "10", "--y", "3", "--count", "0"),
    ("sample", "--x", "10", "--y", "3", "--mode", "fast"),
    ("nope",),
])
def test_usage_errors_exit_1(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and err


@pytest.mark.parametrize("argv", [
    ("sample", "--x", "3", "--y", "10"),
    ("enumerate", "--x", "15", "--y", "3", "--start", "9"),
    ("rho", "--u", "2", "--h", "0.9"),
])
def test_domain_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == 2 and err.startswith("error:")


def test_rho_values():
    code, out, _ = run("rho", "--u", "2")
    assert code == 0
    assert float(out) == pytest.approx(0.306852819440055, abs=1e-6)
    assert float(run("rho", "--u", "0.5")[1]) == 1.0


def test_rho_driving_x():
    code, out, _ = run("rho", "--u", "3", "--x", "1e100")
    assert code == 0 and float(out) == pytest.approx(0.0486083882911316, rel=1e-4)


def test_selftest_passes():
    code, out, _ = run("selftest")
    assert code == 0
    assert out.count("PASS") == 6 and "FAIL" not in out


def test_parse_int():
    assert parse_int("1e100") == 10**100
    assert parse_int("12345") == 12345
    with pytest.raises(Exception):
        parse_int("1.5")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "smoothgen", "psi", "--x", "15", "--y", "3"],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and r.stdout == "8\n"


def test_sample_flagship_two_records():
    code, out, _ = run("sample", "--x", "1e100", "--y", "10000", "--seed", "1", "--count", "2")
    assert code == 0
    recs = [json.loads(l) for l in out.splitlines()]
    assert len(recs) == 2
    for r in recs:
        # independent recomputation: product and trial-division primality
        prod = 1
        for p, e in r["factors"]:
            p = int(p)
            assert 2 <= p <= 10**4 and all(p % q for q in range(2, math.isqrt(p) + 1))
            prod *= p**e
        assert prod == int(r["n"]) <= 10**100
        assert json.loads(json.dumps(r)) == r

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every identity check here is exact (rational arithmetic, zero tolerance);
the two statistical checks carry their stated tolerances, and the runtime
budgets are asserted as hard bounds.
"""

import math
import time
from fractions import Fraction

import pytest

from detconv.convolve import _l_coefficient, l_alternating_sum
from detconv.verify import (
    RunConfig,
    suite_convolutions,
    suite_global,
    suite_gsvd,
    suite_local,
    suite_minor_orth,
    suite_mixed_disc,
    suite_permanent,
)

CONFIG = RunConfig(seed=7)


def _report(number, description, checks, elapsed, budget):
    passed = all(c.passed for c in checks)
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number:02d} {status}: {description} "
          f"[{len(checks)} checks, {elapsed:.1f}s / budget {budget}s]")
    for c in checks:
        assert c.passed, f"{c.name}: {c.detail}"
    assert elapsed < budget, f"runtime {elapsed:.1f}s exceeded budget {budget}s"


def _timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def mixed_disc_checks():
    return _timed(suite_mixed_disc, CONFIG)


def test_criterion_01_local_theorem():
    checks, elapsed = _timed(suite_local, CONFIG)
    sweep = [c for c in checks if c.name.startswith("local-theorem")]
    assert len(sweep) == 9  # every (d, m) in {1,2,3}^2
    _report(1, "local averaging identity, exhaustive oracle, (d,m) <= 3",
            checks, elapsed, 60)


def test_criterion_02_global_theorem():
    checks, elapsed = _timed(suite_global, CONFIG)
    sweep = [c for c in checks if c.name.startswith("global-theorem n=")]
    assert len(sweep) == 9
    assert any("diagonal hand case" in c.name for c in checks)
    _report(2, "global averaging identity, exhaustive oracle, (n,d) <= 3",
            checks, elapsed, 60)


def test_criterion_03_minor_orthogonality():
    checks, elapsed = _timed(suite_minor_orth, CONFIG)
    exhaustive = [c for c in checks if "exhaustive" in c.name]
    assert len(exhaustive) == 4  # n = 1..4
    assert any("haar" in c.name for c in checks)
    _report(3, "minor-orthogonality: exhaustive n <= 4, haar statistics at n=3",
            checks, elapsed, 120)


def test_criterion_04_mixed_discriminant(mixed_disc_checks):
    checks, elapsed = mixed_disc_checks
    selected = [c for c in checks if c.name.startswith("mixed-discriminant")]
    assert len(selected) == 7
    _report(4, "mixed-discriminant properties and average factorization",
            selected, elapsed, 30)


def test_criterion_05_minor_expansions(mixed_disc_checks):
    checks, elapsed = mixed_disc_checks
    selected = [c for c in checks if c.name.startswith("minor-of")]
    assert len(selected) == 2
    assert all("50/50" in c.detail for c in selected)
    _report(5, "minor-of-product and minor-of-sum expansions, 50 instances each",
            selected, elapsed, 10)


def test_criterion_06_univariate_convolutions():
    checks, elapsed = _timed(suite_convolutions, CONFIG)
    _report(6, "eigenvalue, rectangular and non-hermitian convolutions",
            checks, elapsed, 60)


def test_criterion_07_permanents():
    checks, elapsed = _timed(suite_permanent, CONFIG)
    names = {c.name for c in checks}
    assert "permanent low-rank vs ryser" in names
    assert "permanent low-rank n=30 k=2 within budget" in names
    assert "permanent low-rank beats ryser at n=30" in names
    _report(7, "low-rank permanent vs ryser oracle, n=30 benchmark under 1s",
            checks, elapsed, 60)


def test_criterion_08_gsvd():
    checks, elapsed = _timed(suite_gsvd, CONFIG)
    sweep = [c for c in checks if c.name.startswith("gsvd convolution")]
    assert len(sweep) == 8  # all (m, s, t) with max 2
    _report(8, "gsvd coefficient convolution, operator corollary, identities",
            checks, elapsed, 120)


def test_criterion_09_binomial_identity():
    start = time.perf_counter()
    count = 0
    for m in range(9):
        for a in range(m + 1):
            for b in range(m - a + 1):
                lhs = l_alternating_sum(m, a, b)
                rhs = Fraction(
                    math.factorial(m - a) * math.factorial(m - b),
                    math.factorial(m) * math.factorial(m - a - b),
                )
                assert lhs == rhs == _l_coefficient(m, a, b), (m, a, b)
                count += 1
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE 09 PASS: alternating-sum coefficient identity, "
          f"{count} integer triples with a+b <= m <= 8 [{elapsed:.1f}s]")


def test_criterion_10_determinism(tmp_path):
    from detconv.cli import main

    start = time.perf_counter()
    out1 = tmp_path / "workers1.txt"
    out8 = tmp_path / "workers8.txt"
    assert main(["verify", "all", "--seed", "7", "--workers", "1",
                 "--output", str(out1)]) == 0
    assert main(["verify", "all", "--seed", "7", "--workers", "8",
                 "--output", str(out8)]) == 0
    elapsed = time.perf_counter() - start
    identical = out1.read_bytes() == out8.read_bytes()
    status = "PASS" if identical else "FAIL"
    print(f"ACCEPTANCE 10 {status}: verify-all reports byte-identical across "
          f"worker counts [{elapsed:.1f}s]")
    assert identical

"""Acceptance criteria, each checked exactly and against its time budget.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``; either way one PASS/FAIL line is
printed per criterion.
"""

import sys
import time

import pytest

from thetabundle import checks

# (number, description, time limit in seconds, suites to run)
CRITERIA = [
    (1, "Heisenberg representation for |K| <= 12", 10, [lambda: checks.heisenberg_suite(12)]),
    (2, "u_h basis, products and weights for |K| <= 6", 10, [lambda: checks.uh_suite(6)]),
    (3, "500 normal-form round trips, |H| <= 4096", 60, [lambda: checks.normal_form_suite(500, 4096, seed=0)]),
    (4, "weight-one multiplicity on 100 conjugated sums", 30, [lambda: checks.weight1_suite(100, seed=0)]),
    (5, "two orbits of sizes (3,1), (10,6), (36,28)", 60, [lambda: checks.orbit_suite(3)]),
    (6, "signs of D, Q, central products and conjugates", 30, [lambda: checks.sign_suite(20, seed=0, max_rank=3)]),
    (7, "Brauer group orders and cocycle algebras, |H| <= 16", 60, [checks.brauer_suite, lambda: checks.cocycle_suite(16)]),
    (8, "symmetric product identity for g <= 10, d <= 100", 1, [lambda: checks.obstruction_suite(10, 100)]),
    (9, "pairing multiplicativity over 200 random pairings", 10, [lambda: checks.multiplicativity_suite(200, seed=0)]),
]


def evaluate(number):
    _, description, limit, suites = CRITERIA[number - 1]
    start = time.perf_counter()
    results = [suite() for suite in suites]
    elapsed = time.perf_counter() - start
    failures = [r for r in results if not r.passed]
    ok = not failures and elapsed < limit
    detail = f"{sum(r.checks for r in results)} checks, {elapsed:.2f}s of {limit}s"
    if failures:
        detail += f", counterexample {failures[0].counterexample!r}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {description} ({detail})"
    return ok, line, results, elapsed, limit


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(number, capsys):
    ok, line, results, elapsed, limit = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    for r in results:
        assert r.passed, r.counterexample
    assert elapsed < limit


def test_orbit_sizes_reported():
    sizes = checks.orbit_suite(3).summary["orbit_sizes"]
    assert sizes == {"1": [3, 1], "2": [10, 6], "3": [36, 28]}


def test_elliptic_and_product_orders_reported():
    orders = checks.brauer_suite().summary["brauer_orders"]
    assert all(orders[f"g=1,n={n}"] == 1 for n in range(2, 7))
    assert orders["g=2,n=2"] == 32


if __name__ == "__main__":
    verdicts = []
    for number, *_ in CRITERIA:
        ok, line, *_ = evaluate(number)
        print(line, flush=True)
        verdicts.append(ok)
    sys.exit(0 if all(verdicts) else 1)

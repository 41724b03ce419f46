"""Acceptance criteria 1-8, each run once from a fixed seed with its time budget.

Every criterion prints one PASS/FAIL line; under pytest the lines are also
collected into the terminal summary (see conftest.py). Run this file
directly for the lines alone:

    python3 tests/test_acceptance.py
"""

import time

import pytest

from weiljet.suites import SUITES, suite_rngs

SEED = 7
BUDGET = {1: 5.0, 2: 1.0, 3: 10.0, 4: 10.0, 5: 10.0, 6: 15.0, 7: 5.0, 8: 15.0}
LINES: list[str] = []

_RNGS = suite_rngs(SEED)


def run_criterion(n: int):
    name, fn, takes_mode = SUITES[n - 1]
    start = time.perf_counter()
    res = fn(_RNGS[n - 1], exact=True) if takes_mode else fn(_RNGS[n - 1])
    elapsed = time.perf_counter() - start
    ok = res.passed and elapsed < BUDGET[n]
    line = (
        f"criterion {n} {name}: {'PASS' if ok else 'FAIL'} "
        f"({res.cases} cases, {len(res.failures)} failures, {elapsed:.2f}s of {BUDGET[n]:.0f}s)"
    )
    LINES.append(line)
    print(line)
    return res, elapsed


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n):
    res, elapsed = run_criterion(n)
    assert res.passed, res.failures[:5]
    assert elapsed < BUDGET[n], f"took {elapsed:.2f}s"
    if n == 1:
        assert res.cases >= 100 * 5
    if n == 3:
        assert res.metrics["max_fd_relative_error"] <= 1e-6
    if n == 7:
        assert res.metrics["max_abs_deviation"] <= 1e-9
    if n == 8:
        assert res.metrics["max_double_trivialization_deviation"] < 1e-9
        lo, hi = res.metrics["probe_ratio_range"]
        assert 5 <= lo <= hi <= 20


if __name__ == "__main__":
    for n in range(1, 9):
        run_criterion(n)

"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for just the eight lines.
"""

import sys

import pytest

from crossrigidity.acceptance import CRITERIA, run_criterion

SEED = 0
RESULT_LINES: list[str] = []


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, len(CRITERIA) + 1)])
def test_criterion(criterion):
    res = run_criterion(criterion, seed=SEED)
    line = res.line()
    RESULT_LINES.append(line)
    print(line)
    assert res.passed, line


if __name__ == "__main__":
    failed = 0
    for fn in CRITERIA:
        res = run_criterion(fn, seed=SEED)
        print(res.line())
        failed += not res.passed
    sys.exit(1 if failed else 0)

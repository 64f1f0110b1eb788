"""The ten acceptance batteries, one test each.

Each test prints its pass/fail line; conftest repeats all of them in the
terminal summary so they are visible without ``-s``."""
from __future__ import annotations

import pytest

from weaklog.suite import CRITERIA, TITLES, run_criterion

# seconds; None means no bound beyond "minutes"
TIME_LIMITS = {1: 1.0, 2: 1.0, 7: 10.0, 9: 60.0}
MINUTES = 15 * 60.0

RESULTS: dict[int, object] = {}


@pytest.mark.acceptance
@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[f"c{n:02d}" for n in sorted(CRITERIA)])
def test_criterion(number):
    r = run_criterion(number)
    RESULTS[number] = r
    print(r.line())
    assert r.passed, f"{TITLES[number]}: " + "; ".join(r.failures[:5])
    limit = TIME_LIMITS.get(number, MINUTES)
    assert r.elapsed < limit, f"took {r.elapsed:.1f}s, limit {limit:.0f}s"

from __future__ import annotations


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import RESULTS, TIME_LIMITS, MINUTES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        r = RESULTS[n]
        ok = r.passed and r.elapsed < TIME_LIMITS.get(n, MINUTES)
        line = r.line()
        if r.passed and not ok:
            line = line.replace("[PASS]", "[FAIL]") + " over time limit"
        terminalreporter.write_line(line)
        for f in r.failures[:3]:
            terminalreporter.write_line(f"      {f}")

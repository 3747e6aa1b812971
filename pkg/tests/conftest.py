import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion.

    Lines are printed together at the end of the run, in criterion order.
    """
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(number: int, title: str, checks: list[tuple[str, bool]], seconds: float):
        ok = all(passed for _, passed in checks)
        detail = "; ".join(f"{'ok' if passed else 'FAILED'}: {text}" for text, passed in checks)
        lines[number] = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title} ({seconds:.1f} s)  {detail}"
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from linnikpair.interval import DEFAULT_PRECISION, set_precision  # noqa: E402


@pytest.fixture(autouse=True)
def _default_precision():
    set_precision(DEFAULT_PRECISION)
    yield
    set_precision(DEFAULT_PRECISION)


@pytest.fixture(scope="session")
def full():
    from linnikpair.theorem_gate import full_report

    return full_report()


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[n])

import functools

import pytest

from mslab.analysis import analyze
from mslab.models import get_model


@functools.lru_cache(maxsize=None)
def analysis_of(name):
    return analyze(get_model(name))


@pytest.fixture(scope="session")
def analyzed():
    """Numerical analysis of a base model, computed once per session."""
    return analysis_of


ACCEPTANCE = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    def _report(ok, detail):
        line = f"{request.node.name}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

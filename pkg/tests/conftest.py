import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wpflow import functions as fn
from wpflow import kernels

settings.register_profile("wpflow", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("wpflow")

BACKENDS = ["python", "c"] if kernels.compiled_available() else ["python"]


@pytest.fixture(params=BACKENDS)
def impl(request):
    return request.param


@pytest.fixture(scope="session")
def gauss():
    return fn.builtin("gauss_bump")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_line():
    """Record one summary line per acceptance criterion; printed at session end."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def add(criterion, ok, detail="", skipped=False):
        _ACCEPTANCE.append((criterion, "SKIP" if skipped else "PASS" if ok else "FAIL", detail))
        return ok

    return add


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status, detail in sorted(_ACCEPTANCE, key=lambda x: x[0]):
        terminalreporter.write_line(f"[{status}] criterion {criterion}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def naive_sa(seq):
    seq = [int(x) for x in seq]
    return np.array(sorted(range(1, len(seq) + 1), key=lambda i: seq[i - 1 :]), dtype=np.int64)

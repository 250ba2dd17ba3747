import numpy as np
import pytest
from hypothesis import settings

from primstab.rep import load_fixture

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def schottky():
    return load_fixture("schottky")


@pytest.fixture(scope="session")
def reducible():
    return load_fixture("reducible")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# One line per acceptance criterion, printed at the end of the run.
CRITERIA: dict = {}


def record(number: int, passed: bool, detail: str) -> None:
    CRITERIA[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

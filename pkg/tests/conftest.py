import random

import pytest

from fibsynth.oracle import build_database


@pytest.fixture(scope="session")
def db8():
    return build_database(8)


@pytest.fixture(scope="session")
def db12():
    return build_database(12)


@pytest.fixture
def rng():
    return random.Random(20240601)


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """Store the one-line verdict for an acceptance criterion."""

    def _record(n: int, status: str, detail: str) -> None:
        ACCEPTANCE[n] = f"criterion {n}: {status}  {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thuetwist.numfield import NumberField  # noqa: E402
from thuetwist.family import TwistFamily  # noqa: E402


@pytest.fixture(scope="session")
def cubic2():
    return NumberField.from_coeffs([-2, 0, 0, 1])


@pytest.fixture(scope="session")
def plastic_field():
    return NumberField.from_coeffs([-1, -1, 0, 1])


@pytest.fixture(scope="session")
def sqrt2_field():
    return NumberField.from_coeffs([-2, 0, 1])


@pytest.fixture(scope="session")
def plastic_family(plastic_field):
    K = plastic_field
    return TwistFamily(K, K.one, K.theta, name="plastic")


@pytest.fixture(scope="session")
def cubic2_family(cubic2):
    K = cubic2
    return TwistFamily(K, K.one, K.theta - 1, name="cuberoot2")


@pytest.fixture(scope="session")
def quartic_family():
    K = NumberField.from_coeffs([1, 0, -4, 0, 1])
    return TwistFamily(K, K.one, K.theta, name="quartic")


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion; returns the recorder."""
    def record(number, ok, detail):
        line = f"ACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

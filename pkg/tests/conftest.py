import pytest

from chiralcp import ChiralMedium, dmds_example
from chiralcp.cli import WOODPILE, TUNED_OMEGA_P, tuned_medium_parameters


@pytest.fixture
def woodpile():
    return ChiralMedium.from_parameters(**WOODPILE)


@pytest.fixture
def tuned():
    return ChiralMedium.from_parameters(**tuned_medium_parameters(TUNED_OMEGA_P))


@pytest.fixture
def dmds():
    return dmds_example()


@pytest.fixture
def dmds_excited():
    return dmds_example(excited=True)


# one PASS/FAIL line per acceptance criterion, echoed again in the terminal summary
_ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    def report(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(_ACCEPTANCE_LINES[n])

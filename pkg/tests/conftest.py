import pytest

from pvif import kontsevich as kz


@pytest.fixture(scope="session")
def nk_table():
    """N_k for k <= 1000; shared by the fit and singular-point tests."""
    return kz.compute_nk(1000)


@pytest.fixture(scope="session")
def fit900(nk_table):
    return kz.fit_asymptotics(nk_table, 900, 1000)


_ACCEPTANCE_LINES = {}


def record_acceptance(line_number: int, line: str) -> None:
    _ACCEPTANCE_LINES[line_number] = line


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[n])

import pytest

from cliffchain.classifier import census_c2, enumerate_5site


@pytest.fixture(scope="session")
def census():
    return census_c2(n_reps=3)


@pytest.fixture(scope="session")
def survivors():
    return enumerate_5site()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance line; the lines are repeated in the terminal summary."""

    def _report(criterion: str, ok: bool, detail: str) -> bool:
        line = f"criterion {criterion:<3} {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

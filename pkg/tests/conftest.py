import pytest

from osceig import coefficients as co
from osceig import eigensolver as es

# one line per acceptance criterion, echoed after the test summary so the
# verdicts survive pytest's output capture
ACCEPTANCE_RESULTS = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_RESULTS.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for _, line in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def canonical_reaction():
    """Interior value 1, exterior plateau 100, default ramp width."""
    return co.build_reaction(1.0, 100.0, 0.05)


@pytest.fixture(scope="session")
def sharp_reaction():
    """Same plateaus with a narrow ramp, for large-drift family runs."""
    return co.build_reaction(1.0, 100.0, 0.002)


@pytest.fixture(scope="session")
def refvals(canonical_reaction):
    return es.reference_eigenvalues(canonical_reaction, target_elems=2000)


@pytest.fixture(scope="session")
def dd_schedule():
    return co.make_schedule("DD", 1.0 / 6.0, 0.25, 1.0 / 3.0, 4)


@pytest.fixture(scope="session")
def nn_schedule():
    return co.make_schedule("NN", 1.0 / 6.0, 0.25, None, 4)


@pytest.fixture(scope="session")
def dd_potential(dd_schedule):
    return co.build_sdd(dd_schedule)


@pytest.fixture(scope="session")
def nn_potential(nn_schedule):
    return co.build_snn(nn_schedule)

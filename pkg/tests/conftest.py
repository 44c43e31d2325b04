import pytest

from raagbraid.harness_cli import builtin_embedding


@pytest.fixture(scope="session")
def crossing_pair():
    return builtin_embedding("crossing_pair")


@pytest.fixture(scope="session")
def disjoint_pair():
    return builtin_embedding("disjoint_pair")


@pytest.fixture(scope="session")
def pentagon():
    return builtin_embedding("pentagon_c5")


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line and fail the test if the criterion failed."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash[_ACCEPTANCE].append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

import pytest
from hypothesis import HealthCheck, settings

from kcut.corpus import acceptance_corpus, random_weighted

settings.register_profile("kcut", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("kcut")


@pytest.fixture(scope="session")
def corpus():
    return acceptance_corpus()


@pytest.fixture(scope="session")
def small_random():
    return random_weighted(25, 99, 3, 7, 5)



_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def report(request):
    """Record one pass/fail line for the acceptance summary."""
    lines = request.config.stash[_LINES]

    def emit(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)

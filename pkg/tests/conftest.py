from itertools import permutations

import pytest

_criteria: list[tuple[str, str, str]] = []


def brute_count(n, k, d):
    """Independent count of permutations of [n] with exactly d fixed points in [k]."""
    return sum(
        1
        for a in permutations(range(1, n + 1))
        if sum(a[x] == x + 1 for x in range(k)) == d
    )


@pytest.fixture(scope="session")
def brute():
    return brute_count


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria.append((marker.args[0], "PASS" if rep.passed else "FAIL", item.name))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, name in _criteria:
        terminalreporter.write_line(f"[{status}] {label}  ({name})")

import pytest

from exchnet.graphs import LabeledNetwork

PAW = LabeledNetwork.from_edges(4, [(1, 4), (2, 3), (2, 4), (3, 4)])


@pytest.fixture
def paw() -> LabeledNetwork:
    return PAW


@pytest.fixture
def path4() -> LabeledNetwork:
    return LabeledNetwork.path(4)


@pytest.fixture(scope="session")
def paw_dissociated_fit():
    from exchnet.estimation import dissociated_mle

    return dissociated_mle(PAW)


@pytest.fixture(scope="session")
def path4_dissociated_fit():
    from exchnet.estimation import dissociated_mle

    return dissociated_mle(LabeledNetwork.path(4))


# One pass/fail line per acceptance criterion, printed after the run.

_acceptance_results: dict = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): acceptance criterion covered by this test"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    passed = report.outcome == "passed"
    prev = _acceptance_results.get(name, True)
    _acceptance_results[name] = prev and passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance_results):
        ok = _acceptance_results[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")

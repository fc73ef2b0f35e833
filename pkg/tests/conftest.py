import pytest

from sirelax.models import ModelSpec

TEST1 = dict(beta=0.0004, gamma=0.02, n=998, a=2, N=1000, T=365)
TEST2 = dict(beta=3e-9, gamma=0.05, n=97_469_989, a=11, N=97_470_000, T=180)
SMALL = dict(beta=0.001, gamma=0.02, n=10, a=2, T=365)


@pytest.fixture
def test1():
    return ModelSpec.sir(**TEST1)


@pytest.fixture
def test2():
    return ModelSpec.sir(**TEST2)


@pytest.fixture
def sird3():
    return ModelSpec.sird(sigma=0.01, **TEST1)


@pytest.fixture
def mortality3():
    return ModelSpec.sir_mortality(sigma=0.001, **TEST1)


@pytest.fixture
def small():
    return ModelSpec.sir(**SMALL)


# acceptance summary: one line per criterion, aggregated over its tests

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA.setdefault(number, {"title": title, "outcomes": {}})
            _CRITERIA[number]["outcomes"][item.nodeid] = None


def pytest_runtest_logreport(report):
    for entry in _CRITERIA.values():
        if report.nodeid in entry["outcomes"]:
            if report.when == "call" or report.outcome != "passed":
                prev = entry["outcomes"][report.nodeid]
                if prev in (None, "passed"):
                    entry["outcomes"][report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        outcomes = list(entry["outcomes"].values())
        if any(o is None for o in outcomes):
            status = "SKIP" if all(o is None for o in outcomes) else "PART"
        else:
            status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        n_ok = sum(o == "passed" for o in outcomes)
        terminalreporter.write_line(
            f"{status} criterion {number}: {entry['title']} ({n_ok}/{len(outcomes)} checks passed)"
        )

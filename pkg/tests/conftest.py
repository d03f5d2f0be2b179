import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def platont():
    from platrec.catalog import load_fixture

    return load_fixture("platont")


@pytest.fixture(scope="session")
def arm_bundle():
    from platrec.catalog import load_fixture

    return load_fixture("arm-tee")


@pytest.fixture(scope="session")
def rpi_bundle():
    from platrec.catalog import load_fixture

    return load_fixture("rpi")


# ------------------------------------------------------- acceptance summary

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            number, title = mark.args
            _CRITERIA.setdefault(number, {"title": title, "ok": True, "seen": False})


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark and call.when == "call":
        entry = _CRITERIA[mark.args[0]]
        entry["seen"] = True
        entry["ok"] = entry["ok"] and call.excinfo is None


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        verdict = "PASS" if entry["ok"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {number}: {entry['title']}")

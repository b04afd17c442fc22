import time

import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture(scope="session", autouse=True)
def compiled_integrator():
    """Compile (or load from cache) the numba corner integrator once per session."""
    from bidisc.dynamics.transit import corner_transit
    from bidisc.geometry import ApproximantParams

    start = time.perf_counter()
    corner_transit(0.5, ApproximantParams(10), tol=1e-8, dense=True)
    return time.perf_counter() - start


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _markers.get(report.nodeid)
    if marker is not None:
        _criteria[report.nodeid] = (marker, report.outcome, report.duration)


_markers = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _markers[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome, duration in sorted(_criteria.values()):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({duration:.2f} s)")

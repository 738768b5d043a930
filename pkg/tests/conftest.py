import pytest

TITLES = {
    1: "minimal-discriminant anchors",
    2: "weighted distribution chi-square",
    3: "uniform distribution chi-square",
    4: "lattice-point bijection",
    5: "success-rate floor",
    6: "polylog runtime",
    7: "invariance suites",
    8: "exact-decision soundness",
    9: "determinism",
}

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.fixture
def note(request):
    """Attach a short detail string to the acceptance line of the current test."""
    def add(text):
        request.node.user_properties.append(("detail", text))
    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or marker.kwargs.get("optional"):
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        n = marker.args[0]
        entry = _results.setdefault(n, {"ok": True, "details": []})
        entry["ok"] = entry["ok"] and report.passed
        details = [v for k, v in item.user_properties if k == "detail"]
        if not report.passed:
            details.append(f"{item.name} failed")
        entry["details"].extend(details)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        if n not in _results:
            terminalreporter.write_line(f"criterion {n} ({TITLES[n]}): NOT RUN")
            continue
        entry = _results[n]
        status = "PASS" if entry["ok"] else "FAIL"
        detail = "; ".join(entry["details"])
        terminalreporter.write_line(f"criterion {n} ({TITLES[n]}): {status}  {detail}".rstrip())

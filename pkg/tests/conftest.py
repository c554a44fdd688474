import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion outcome for the end-of-run summary."""
    def record(label):
        ACCEPTANCE_RESULTS.append((label, request.node))
    return record


def pytest_runtest_makereport(item, call):
    if call.when == "call":
        item.acceptance_passed = call.excinfo is None


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, node in ACCEPTANCE_RESULTS:
        status = "PASS" if getattr(node, "acceptance_passed", False) else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")

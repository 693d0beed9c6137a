import pytest

_CRITERIA: list[str] = []


@pytest.fixture
def criterion(request):
    """Report one acceptance criterion as a single PASS/FAIL line, then assert it."""
    state = {"reported": False}

    def report(ok: bool, detail: str):
        state["reported"] = True
        line = f"[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}"
        _CRITERIA.append(line)
        print(line)
        assert ok, detail

    def crashed():
        if not state["reported"]:
            _CRITERIA.append(f"[FAIL] {request.node.name}: raised before reporting")

    request.addfinalizer(crashed)
    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)

import pytest

# filled by tests/test_acceptance.py; printed once at the end of the run
ACCEPTANCE_RESULTS: dict[str, tuple[str, str]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[criterion] = ("PASS" if ok else "FAIL", detail)


def skip(criterion: str, reason: str) -> None:
    ACCEPTANCE_RESULTS[criterion] = ("SKIP", reason)
    pytest.skip(reason)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(k.rstrip("ab")), k)):
        status, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {status} - {detail}")

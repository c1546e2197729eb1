import pytest

# criterion number -> list of (label, passed)
ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


@pytest.fixture
def record():
    def _record(criterion: int, label: str, passed: bool) -> bool:
        ACCEPTANCE.setdefault(criterion, []).append((label, bool(passed)))
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        items = ACCEPTANCE[k]
        ok = all(p for _, p in items)
        detail = "; ".join(f"{label}: {'ok' if p else 'FAILED'}" for label, p in items)
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  ({detail})")

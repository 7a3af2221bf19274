import time

import pytest

_CRITERIA: dict[int, dict] = {}


class CriterionRecorder:
    """Collects pass/fail per acceptance criterion across its sub-tests."""

    def __init__(self, store):
        self._store = store

    def start(self, number: int, title: str):
        entry = self._store.setdefault(number, {"title": title, "failures": [], "checks": 0, "elapsed": 0.0})
        return _Timer(entry)

    def total_elapsed(self) -> float:
        return sum(e["elapsed"] for e in self._store.values())


class _Timer:
    def __init__(self, entry):
        self.entry = entry

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.entry["checks"] += 1
        return self

    def __exit__(self, exc_type, exc, tb):
        self.entry["elapsed"] += time.perf_counter() - self.t0
        if exc_type is not None:
            self.entry["failures"].append(str(exc).splitlines()[0] if str(exc) else exc_type.__name__)
        return False


@pytest.fixture(scope="session")
def criterion():
    return CriterionRecorder(_CRITERIA)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "FAIL" if e["failures"] else "PASS"
        line = f"criterion {number}: {status}  {e['title']}  ({e['checks']} checks, {e['elapsed']:.1f}s)"
        terminalreporter.write_line(line)
        for message in e["failures"]:
            terminalreporter.write_line(f"    {message}")
    total = sum(e["elapsed"] for e in _CRITERIA.values())
    terminalreporter.write_line(f"total acceptance runtime: {total:.1f}s (budget 60s)")

import contextlib
import time

import pytest

_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_KEY] = []


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance criterion's outcome and runtime."""
    results = request.config.stash[_KEY]

    @contextlib.contextmanager
    def check(number, title, max_seconds=None):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            results.append((number, title, False, f"{type(exc).__name__}: {exc}".splitlines()[0]))
            raise
        elapsed = time.perf_counter() - start
        ok = max_seconds is None or elapsed < max_seconds
        detail = f"{elapsed:.2f}s" + ("" if ok else f" exceeds {max_seconds}s budget")
        results.append((number, title, ok, detail))
        assert ok, detail

    return check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = sorted(config.stash.get(_KEY, []))
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in results:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title} ({detail})")

import json
import time
from contextlib import contextmanager
from importlib import resources

import pytest

RESULTS = pytest.StashKey[dict]()


def load_case(name):
    return json.loads(resources.files("lcp_forge.cli").joinpath("cases", f"{name}.json").read_text())


@pytest.fixture
def case():
    return load_case


@pytest.fixture
def criterion(request):
    """Time a criterion body and record PASS/FAIL for the terminal summary."""
    store = request.config.stash.setdefault(RESULTS, {})

    @contextmanager
    def run(number, title, budget):
        t0 = time.perf_counter()
        ok, note = False, ""
        try:
            yield
            ok = True
        except BaseException as exc:
            note = f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
            raise
        finally:
            elapsed = time.perf_counter() - t0
            if ok and elapsed > budget:
                ok, note = False, f"over budget ({elapsed:.2f}s > {budget}s)"
            store[number] = (title, ok, elapsed, budget, note)
        assert elapsed <= budget, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(RESULTS, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        title, ok, elapsed, budget, note = store[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title} ({elapsed:.2f}s / {budget}s)"
        if note:
            line += f" {note}"
        terminalreporter.write_line(line)

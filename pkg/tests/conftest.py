from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

RESULTS: list[tuple[int, str, bool, float, float]] = []


class Criterion:
    """Times one acceptance criterion and records PASS/FAIL against its limit."""

    @contextmanager
    def __call__(self, number: int, name: str, limit: float):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < limit
            RESULTS.append((number, name, ok and within, elapsed, limit))
            print(f"[{'PASS' if ok and within else 'FAIL'}] criterion {number}: {name} "
                  f"({elapsed:.2f} s, limit {limit:g} s)")
        assert within, f"criterion {number} took {elapsed:.2f} s, limit {limit:g} s"


@pytest.fixture
def criterion():
    return Criterion()


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, elapsed, limit in sorted(RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:2d}. {name}  "
                                    f"[{elapsed:.2f} s / {limit:g} s]")

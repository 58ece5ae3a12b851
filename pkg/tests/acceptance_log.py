"""Collects one verdict line per acceptance criterion for the terminal summary."""

import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, time_limit: float | None = None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if time_limit is not None:
            assert elapsed < time_limit, f"took {elapsed:.2f}s, limit {time_limit}s"
    except BaseException as exc:
        line = f"criterion {number:>2}: FAIL  {title} ({type(exc).__name__}: {exc})"
        LINES.append(line)
        print(line)
        raise
    line = f"criterion {number:>2}: PASS  {title} [{time.perf_counter() - start:.2f}s]"
    LINES.append(line)
    print(line)

"""Collects per-criterion outcomes from the acceptance tests for the terminal summary."""
from __future__ import annotations

import functools
import time

# criterion number -> list of (check name, passed, seconds, detail)
RESULTS: dict[int, list[tuple[str, bool, float, str]]] = {}


def criterion(number: int, name: str):
    """Record whether the wrapped test passed, then re-raise any failure."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                first = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
                RESULTS.setdefault(number, []).append((name, False, time.perf_counter() - start, first))
                print(f"criterion {number} [{name}]: FAIL")
                raise
            RESULTS.setdefault(number, []).append((name, True, time.perf_counter() - start, detail or ""))
            print(f"criterion {number} [{name}]: PASS {detail or ''}")

        return run

    return wrap


def summary_lines() -> list[str]:
    lines = []
    for number in sorted(RESULTS):
        checks = RESULTS[number]
        ok = all(passed for _, passed, _, _ in checks)
        failed = [name for name, passed, _, _ in checks if not passed]
        secs = sum(t for _, _, t, _ in checks)
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} [{secs:.1f}s]{tail}")
    return lines

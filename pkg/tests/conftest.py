import time

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Run a criterion body under a wall-clock limit and log one summary line."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def run(number: int, title: str, limit: float, body) -> None:
        start = time.perf_counter()
        try:
            body()
        except BaseException:
            lines.append(f"FAIL  criterion {number:2d}: {title}")
            raise
        elapsed = time.perf_counter() - start
        ok = elapsed < limit
        lines.append(
            f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {title} "
            f"({elapsed:.2f}s, limit {limit:g}s)"
        )
        assert ok, f"took {elapsed:.2f}s, limit {limit:g}s"

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

import functools

import pytest

from greenlab.brownian import restrict, sample_brownian
from greenlab.grid import make_grid
from greenlab.homogeneous import solve_direct, solve_fredholm, wronskian

# committed seed list for every multi-seed check
SEEDS = tuple(range(20))

_ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def grid(n):
    return make_grid(n)


@functools.lru_cache(maxsize=64)
def path(seed, n=2000):
    return sample_brownian(grid(n), seed)


@functools.lru_cache(maxsize=64)
def nested_path(seed, n, finest=4000):
    """Path at resolution n obtained by subsampling the finest one, so grids share B."""
    return restrict(sample_brownian(grid(finest), seed), n)


@functools.lru_cache(maxsize=64)
def direct_pair(seed, n=2000):
    p = path(seed, n)
    u, v = solve_direct(p, "u"), solve_direct(p, "v")
    return u, v, wronskian(u, v)


@functools.lru_cache(maxsize=32)
def fredholm_pair(seed, n=2000):
    p = path(seed, n)
    return solve_fredholm(p, "u"), solve_fredholm(p, "v")


@pytest.fixture
def acceptance_report():
    def record(criterion, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

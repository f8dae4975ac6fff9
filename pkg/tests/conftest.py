from __future__ import annotations

import functools

import pytest

from scatterforge import kernels
from scatterforge.construction import ConstructionParams, build_U_sigma
from scatterforge.field import build_tower

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


@functools.lru_cache(maxsize=None)
def tower(p: int, e: int, m: int, with_q2m: bool = False):
    return build_tower(p, e, m, with_q2m=with_q2m)


@functools.lru_cache(maxsize=None)
def u_sigma(p: int, e: int, m: int, s: int = 1):
    return build_U_sigma(ConstructionParams(tower(p, e, m), s))


@pytest.fixture(scope="session")
def T25():
    return tower(2, 1, 5)


@pytest.fixture(scope="session")
def T35():
    return tower(3, 1, 5)


@pytest.fixture(scope="session")
def T45():
    return tower(2, 2, 5)


@pytest.fixture(scope="session")
def T27():
    return tower(2, 1, 7)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return kernels.get_backend(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])

import numpy as np
import pytest

from eulerqfi.majorana import constellation_to_state
from eulerqfi.polyhedra import platonic, tetrahedral_family

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def tetra():
    return constellation_to_state(platonic("tetrahedron"))


@pytest.fixture(scope="session")
def composite20():
    return constellation_to_state(tetrahedral_family(1, 1, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng, n):
    from eulerqfi.spin import SpinState

    v = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    return SpinState(n, v / np.linalg.norm(v))


@pytest.fixture
def record():
    def _record(label: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

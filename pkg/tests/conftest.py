import numpy as np
import pytest

from dipolelab.core import FieldConfig, ParticleParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_particle():
    return ParticleParams(M=1.0, alpha=1.0)


@pytest.fixture
def unit_fields():
    return FieldConfig(k=1.0, B=1.0, hbar=1.0)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(ok, detail)``."""
    name = request.node.name

    def record(ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
